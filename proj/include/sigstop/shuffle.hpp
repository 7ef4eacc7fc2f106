#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sigstop/free_tensor.hpp"
#include "sigstop/word.hpp"

namespace sigstop {

// Shuffle product of two basis words with exact integer multiplicities.
// Results are memoized process-wide behind a shared mutex.
const std::map<Word, std::int64_t>& shuffle_words(const Word& u, const Word& v);

// Sparse linear functional on the tensor algebra: finite word -> coefficient
// map.  Zero coefficients are never stored.
class DualPoly {
 public:
  DualPoly() = default;
  explicit DualPoly(int width) : width_(width) {}
  DualPoly(int width, const Word& w, double c = 1.0) : width_(width) { add(w, c); }

  int width() const { return width_; }
  const std::map<Word, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const Word& w, double c);
  double coeff(const Word& w) const;

  int deg() const;                 // max word length among nonzero terms; 0 if empty
  double l1_norm() const;

  DualPoly& operator+=(const DualPoly& o);
  DualPoly& operator-=(const DualPoly& o);
  DualPoly& operator*=(double s);
  friend DualPoly operator+(DualPoly a, const DualPoly& b) { return a += b; }
  friend DualPoly operator-(DualPoly a, const DualPoly& b) { return a -= b; }
  friend DualPoly operator*(DualPoly a, double s) { return a *= s; }

  DualPoly truncated(int max_deg) const;

  // Rendering like "3·12 - 1.5·221" (ASCII form "3*12 - 1.5*221").
  std::string str() const;

 private:
  int width_ = 0;
  std::map<Word, double> terms_;
};

// Bilinear extension of the word shuffle.
DualPoly shuffle(const DualPoly& u, const DualPoly& v);

// P_shuffle(l) = lambda_0 e + lambda_1 l + lambda_2 (l sh l) + ...
// `poly` holds lambda_0..lambda_n.
DualPoly shuffle_poly(const std::vector<double>& poly, const DualPoly& l);

// exp_shuffle truncated to words of length <= out_level.  A nonzero scalar
// part a_0 contributes the factor exp(a_0) per the definition.
DualPoly shuffle_exp(const DualPoly& l, int out_level);

// Right-concatenates `letter` to every word; letter 1 integrates in time.
DualPoly append_letter(const DualPoly& l, int letter);

// <l, a>; requires deg(l) <= a.level().  Pairing a low-degree functional with
// a higher-level tensor is fine; the converse raises (no silent truncation).
double pair(const DualPoly& l, const FreeTensor& a);

}  // namespace sigstop
