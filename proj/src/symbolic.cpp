#include "sigstop/symbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace sigstop {

MultiPoly MultiPoly::constant(int nvars, double c) {
  MultiPoly p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::invalid_argument("MultiPoly::variable: index");
  MultiPoly p(nvars);
  Monomial m(nvars, 0);
  m[i] = 1;
  p.add_term(m, 1.0);
  return p;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

void MultiPoly::add_term(const Monomial& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(double s) {
  if (s == 0.0) { terms_.clear(); return *this; }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("MultiPoly mul: nvars mismatch");
  MultiPoly r(a.nvars());
  MultiPoly::Monomial m(a.nvars());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      for (int i = 0; i < a.nvars(); ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      r.add_term(m, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * m[var]);
  }
  return r;
}

double MultiPoly::eval(const Eigen::VectorXd& lambda) const {
  if (lambda.size() != nvars_) throw std::invalid_argument("MultiPoly::eval: size mismatch");
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int e = 0; e < m[i]; ++e) t *= lambda[i];
    s += t;
  }
  return s;
}

void SymbolicDualPoly::add(const Word& w, const MultiPoly& p) {
  if (p.empty()) return;
  auto [it, inserted] = terms_.emplace(w, p);
  if (!inserted) {
    it->second += p;
    if (it->second.empty()) terms_.erase(it);
  }
}

SymbolicDualPoly& SymbolicDualPoly::operator+=(const SymbolicDualPoly& o) {
  for (const auto& [w, p] : o.terms_) add(w, p);
  return *this;
}

SymbolicDualPoly SymbolicDualPoly::truncated(int max_deg) const {
  SymbolicDualPoly r(width_, nvars_);
  for (const auto& [w, p] : terms_)
    if (w.size() <= max_deg) r.add(w, p);
  return r;
}

DualPoly SymbolicDualPoly::substitute(const Eigen::VectorXd& lambda) const {
  DualPoly r(width_);
  for (const auto& [w, p] : terms_) r.add(w, p.eval(lambda));
  return r;
}

SymbolicDualPoly shuffle(const SymbolicDualPoly& a, const SymbolicDualPoly& b) {
  if (a.width() != b.width() || a.nvars() != b.nvars())
    throw std::invalid_argument("symbolic shuffle: shape mismatch");
  SymbolicDualPoly r(a.width(), a.nvars());
  for (const auto& [wa, pa] : a.terms())
    for (const auto& [wb, pb] : b.terms()) {
      MultiPoly prod = pa * pb;
      for (const auto& [w, k] : shuffle_words(wa, wb)) {
        MultiPoly scaled = prod;
        scaled *= static_cast<double>(k);
        r.add(w, scaled);
      }
    }
  return r;
}

SymbolicDualPoly append_letter(const SymbolicDualPoly& l, int letter) {
  if (letter < 1 || letter > l.width())
    throw std::domain_error("symbolic append_letter: invalid letter");
  SymbolicDualPoly r(l.width(), l.nvars());
  for (const auto& [w, p] : l.terms()) r.add(w.appended(letter), p);
  return r;
}

SymbolicDualPoly shuffle_exp(const SymbolicDualPoly& l, int out_level) {
  for (const auto& [w, p] : l.terms())
    if (w.empty())
      throw std::invalid_argument("symbolic shuffle_exp: empty-word part not supported");
  SymbolicDualPoly r(l.width(), l.nvars());
  r.add(Word{}, MultiPoly::constant(l.nvars(), 1.0));
  SymbolicDualPoly term = r;  // running l^{sh k} / k!
  for (int k = 1; k <= out_level; ++k) {
    SymbolicDualPoly next(l.width(), l.nvars());
    const SymbolicDualPoly power = shuffle(term, l).truncated(out_level);
    for (const auto& [w, p] : power.terms()) {
      MultiPoly q = p;
      q *= 1.0 / k;
      next.add(w, q);
    }
    term = std::move(next);
    if (term.terms().empty()) break;
    r += term;
  }
  return r;
}

std::vector<Word> policy_words(int width, int k) {
  std::vector<Word> words;
  const std::size_t n = Word::level_offset(width, k + 1);
  words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) words.push_back(Word::from_dense_index(width, i));
  return words;
}

SymbolicDualPoly symbolic_policy(int width, int k) {
  const std::vector<Word> words = policy_words(width, k);
  SymbolicDualPoly l(width, static_cast<int>(words.size()));
  for (std::size_t i = 0; i < words.size(); ++i)
    l.add(words[i], MultiPoly::variable(static_cast<int>(words.size()), static_cast<int>(i)));
  return l;
}

MultiPoly pair_symbolic(const SymbolicDualPoly& sym, const FreeTensor& a) {
  if (sym.width() != a.width()) throw std::invalid_argument("pair_symbolic: width mismatch");
  MultiPoly r(sym.nvars());
  for (const auto& [w, p] : sym.terms()) {
    if (w.size() > a.level())
      throw std::domain_error("pair_symbolic: word degree exceeds tensor level");
    MultiPoly q = p;
    q *= a.coeff(w);
    r += q;
  }
  return r;
}

}  // namespace sigstop
