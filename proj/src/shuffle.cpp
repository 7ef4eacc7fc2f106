#include "sigstop/shuffle.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace sigstop {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    std::uint64_t h = p.first * 0x9E3779B97F4A7C15ull ^ (p.second + 0x632BE59BD9B4E019ull);
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

using ShuffleResult = std::map<Word, std::int64_t>;
using Cache = std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, ShuffleResult, PairHash>;

Cache g_cache;
std::shared_mutex g_cache_mutex;

ShuffleResult shuffle_uncached(const Word& u, const Word& v) {
  ShuffleResult r;
  if (u.empty()) { r[v] = 1; return r; }
  if (v.empty()) { r[u] = 1; return r; }
  // wi sh vj = (w sh vj)i + (wi sh v)j
  for (const auto& [w, c] : shuffle_words(u.head(), v)) r[w.appended(u.last())] += c;
  for (const auto& [w, c] : shuffle_words(u, v.head())) r[w.appended(v.last())] += c;
  return r;
}

}  // namespace

const ShuffleResult& shuffle_words(const Word& u, const Word& v) {
  // shuffle is commutative; normalize the key
  const Word& a = (u <= v) ? u : v;
  const Word& b = (u <= v) ? v : u;
  const auto key = std::make_pair(a.packed(), b.packed());
  {
    std::shared_lock lock(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  ShuffleResult r = shuffle_uncached(a, b);
  std::unique_lock lock(g_cache_mutex);
  return g_cache.emplace(key, std::move(r)).first->second;
}

void DualPoly::add(const Word& w, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double DualPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

int DualPoly::deg() const {
  int d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, w.size());
  return d;
}

double DualPoly::l1_norm() const {
  double s = 0.0;
  for (const auto& [w, c] : terms_) s += std::fabs(c);
  return s;
}

DualPoly& DualPoly::operator+=(const DualPoly& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

DualPoly& DualPoly::operator-=(const DualPoly& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

DualPoly& DualPoly::operator*=(double s) {
  if (s == 0.0) { terms_.clear(); return *this; }
  for (auto& [w, c] : terms_) c *= s;
  return *this;
}

DualPoly DualPoly::truncated(int max_deg) const {
  DualPoly r(width_);
  for (const auto& [w, c] : terms_)
    if (w.size() <= max_deg) r.add(w, c);
  return r;
}

std::string DualPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    os << std::fabs(c) << "*" << w.str();
    first = false;
  }
  return os.str();
}

DualPoly shuffle(const DualPoly& u, const DualPoly& v) {
  if (u.width() != v.width()) throw std::invalid_argument("shuffle: width mismatch");
  DualPoly r(u.width());
  for (const auto& [wu, cu] : u.terms())
    for (const auto& [wv, cv] : v.terms())
      for (const auto& [w, k] : shuffle_words(wu, wv))
        r.add(w, cu * cv * static_cast<double>(k));
  return r;
}

DualPoly shuffle_poly(const std::vector<double>& poly, const DualPoly& l) {
  DualPoly r(l.width());
  if (poly.empty()) return r;
  r.add(Word{}, poly[0]);
  DualPoly p(l.width(), Word{});
  for (std::size_t k = 1; k < poly.size(); ++k) {
    p = shuffle(p, l);
    r += p * poly[k];
  }
  return r;
}

DualPoly shuffle_exp(const DualPoly& l, int out_level) {
  const double a0 = l.coeff(Word{});
  DualPoly lt = l;  // l-tilde: zero scalar part
  lt.add(Word{}, -a0);
  DualPoly r(l.width(), Word{});
  DualPoly term(l.width(), Word{});
  // words of lt have length >= 1, so powers beyond out_level vanish
  for (int k = 1; k <= out_level; ++k) {
    term = shuffle(term, lt).truncated(out_level) * (1.0 / k);
    if (term.empty()) break;
    r += term;
  }
  r *= std::exp(a0);
  return r;
}

DualPoly append_letter(const DualPoly& l, int letter) {
  if (letter < 1 || letter > l.width()) throw std::domain_error("append_letter: invalid letter");
  DualPoly r(l.width());
  for (const auto& [w, c] : l.terms()) r.add(w.appended(letter), c);
  return r;
}

double pair(const DualPoly& l, const FreeTensor& a) {
  if (l.width() != a.width()) throw std::invalid_argument("pair: width mismatch");
  if (l.deg() > a.level())
    throw std::domain_error("pair: functional degree exceeds tensor level (truncate explicitly)");
  double s = 0.0;
  for (const auto& [w, c] : l.terms()) s += c * a.coeff(w);
  return s;
}

}  // namespace sigstop
