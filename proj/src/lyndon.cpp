#include "sigstop/lyndon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace sigstop {

namespace {

int moebius(int n) {
  int mu = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

// Duval's algorithm: all Lyndon words of length <= N over {1..m}, lex order.
std::vector<Word> duval(int m, int N) {
  std::vector<Word> out;
  std::vector<int> w{1};
  while (!w.empty()) {
    Word word;
    for (int l : w) word = word.appended(l);
    out.push_back(word);
    int len = static_cast<int>(w.size());
    w.resize(N);
    for (int i = len; i < N; ++i) w[i] = w[i - len];
    while (!w.empty() && w.back() == m) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return out;
}

// Chen-Fox-Lyndon right standard factor: the lexicographically smallest
// proper suffix.
Word standard_right_factor(const Word& w) {
  Word best = w.suffix(1);
  for (int n = 2; n < w.size(); ++n) {
    Word s = w.suffix(n);
    // lexicographic compare of words of unequal length
    Word a = s, b = best;
    int cmp = 0;
    int k = std::min(a.size(), b.size());
    for (int i = 0; i < k && cmp == 0; ++i)
      cmp = a.letter(i) - b.letter(i);
    if (cmp == 0) cmp = a.size() - b.size();
    if (cmp < 0) best = s;
  }
  return best;
}

using Expansion = std::map<Word, std::int64_t>;

Expansion expand_bracket(const Word& w, std::map<Word, Expansion>& memo) {
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;
  Expansion r;
  if (w.size() == 1) {
    r[w] = 1;
  } else {
    Word v = standard_right_factor(w);
    Word u = w.prefix(w.size() - v.size());
    Expansion a = expand_bracket(u, memo);
    Expansion b = expand_bracket(v, memo);
    for (const auto& [wa, ca] : a)
      for (const auto& [wb, cb] : b) {
        r[wa.concat(wb)] += ca * cb;
        r[wb.concat(wa)] -= ca * cb;
      }
    for (auto e = r.begin(); e != r.end();)
      e = (e->second == 0) ? r.erase(e) : std::next(e);
  }
  memo[w] = r;
  return r;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> dims(int m, int N) {
  if (m < 1 || N < 1) throw std::invalid_argument("dims: need m >= 1, N >= 1");
  std::int64_t sigma = 0;
  if (m == 1) {
    sigma = N;
  } else {
    std::int64_t p = m;
    for (int n = 1; n <= N; ++n) { sigma += p; p *= m; }
  }
  std::int64_t eta = 0;
  for (int n = 1; n <= N; ++n) {
    std::int64_t s = 0;
    for (int k = 1; k <= n; ++k) {
      if (n % k != 0) continue;
      std::int64_t mk = 1;
      for (int i = 0; i < k; ++i) mk *= m;
      s += moebius(n / k) * mk;
    }
    eta += s / n;
  }
  return {sigma, eta};
}

LyndonBasis::LyndonBasis(int width, int level) : width_(width), level_(level) {
  if (width < 1 || level < 1) throw std::invalid_argument("LyndonBasis: need m >= 1, N >= 1");
  words_ = duval(width, level);
  std::sort(words_.begin(), words_.end());  // graded-lex
  std::map<Word, Expansion> memo;
  expansions_.reserve(words_.size());
  for (const Word& w : words_) {
    Expansion e = expand_bracket(w, memo);
    std::vector<std::pair<std::size_t, std::int64_t>> flat;
    flat.reserve(e.size());
    for (const auto& [word, c] : e) flat.emplace_back(word.dense_index(width), c);
    expansions_.push_back(std::move(flat));
  }
  const auto [sigma, eta] = dims(width, level);
  (void)sigma;
  if (static_cast<std::int64_t>(words_.size()) != eta)
    throw std::logic_error("LyndonBasis: count mismatch with Moebius formula");
}

std::vector<double> LyndonBasis::project(const FreeTensor& log_tensor) const {
  if (log_tensor.width() != width_ || log_tensor.level() != level_)
    throw std::invalid_argument("LyndonBasis::project: shape mismatch");
  std::vector<double> work = log_tensor.data();
  std::vector<double> coords(words_.size());
  // Unit triangularity: eliminating basis elements in graded-lex order leaves
  // each coordinate directly readable at its own word.
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const double c = work[words_[i].dense_index(width_)];
    coords[i] = c;
    if (c != 0.0)
      for (const auto& [idx, k] : expansions_[i]) work[idx] -= c * static_cast<double>(k);
  }
  return coords;
}

FreeTensor LyndonBasis::reconstruct(const std::vector<double>& coords) const {
  if (coords.size() != words_.size())
    throw std::invalid_argument("LyndonBasis::reconstruct: coord size mismatch");
  FreeTensor t(width_, level_);
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0.0)
      for (const auto& [idx, k] : expansions_[i])
        t[idx] += coords[i] * static_cast<double>(k);
  return t;
}

const LyndonBasis& lyndon_basis(int width, int level) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<LyndonBasis>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{width, level}];
  if (!slot) slot = std::make_unique<LyndonBasis>(width, level);
  return *slot;
}

std::vector<std::vector<double>> log_signature_coords(
    const std::vector<FreeTensor>& prefix_sigs, const LyndonBasis& basis,
    double residual_tol) {
  std::vector<std::vector<double>> rows;
  rows.reserve(prefix_sigs.size());
  for (const FreeTensor& s : prefix_sigs) {
    FreeTensor lg = tensor_log(s);
    std::vector<double> c = basis.project(lg);
    FreeTensor back = basis.reconstruct(c);
    double resid = 0.0;
    for (std::size_t i = 1; i < lg.size(); ++i)
      resid = std::max(resid, std::fabs(back[i] - lg[i]));
    if (resid > residual_tol)
      throw std::runtime_error("log_signature_coords: reconstruction residual " +
                               std::to_string(resid));
    rows.push_back(std::move(c));
  }
  return rows;
}

}  // namespace sigstop
