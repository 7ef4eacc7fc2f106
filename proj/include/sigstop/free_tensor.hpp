#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sigstop/word.hpp"

namespace sigstop {

// Element of the truncated tensor algebra T^N(R^m), dense coefficients over
// all words of length <= N in graded-lex order.  Values are immutable in
// spirit: all operations return new tensors.
class FreeTensor {
 public:
  FreeTensor() = default;
  FreeTensor(int width, int level);

  static FreeTensor one(int width, int level);       // unit element
  static FreeTensor from_level1(int width, int level, const std::vector<double>& v);

  int width() const { return width_; }
  int level() const { return level_; }
  std::size_t size() const { return c_.size(); }

  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  double coeff(const Word& w) const;
  void set_coeff(const Word& w, double v);

  const std::vector<double>& data() const { return c_; }
  std::vector<double>& data() { return c_; }

  std::size_t level_offset(int n) const { return Word::level_offset(width_, n); }
  std::size_t level_size(int n) const;

  FreeTensor truncated(int new_level) const;

  FreeTensor& operator+=(const FreeTensor& o);
  FreeTensor& operator-=(const FreeTensor& o);
  FreeTensor& operator*=(double s);
  friend FreeTensor operator+(FreeTensor a, const FreeTensor& b) { return a += b; }
  friend FreeTensor operator-(FreeTensor a, const FreeTensor& b) { return a -= b; }
  friend FreeTensor operator*(FreeTensor a, double s) { return a *= s; }

  double max_abs() const;
  // Paper norm convention: sup over levels of the l^inf norm of each level.
  double sup_norm() const { return max_abs(); }

  static std::size_t dense_size(int width, int level);

 private:
  int width_ = 0;
  int level_ = 0;
  std::vector<double> c_;
};

// Level-graded truncated tensor product: coefficient of w is the sum over all
// splittings w = uv of a[u] * b[v].
FreeTensor tensor_mul(const FreeTensor& a, const FreeTensor& b);

// exp_otimes: requires zero scalar part.
FreeTensor tensor_exp(const FreeTensor& a);

// log_otimes: requires unit scalar part; result has zero scalar part.
FreeTensor tensor_log(const FreeTensor& g);

// Group inverse via the Neumann series sum_n (1 - g)^{otimes n}, exact in T^N.
FreeTensor tensor_inverse(const FreeTensor& g);

// Shuffle-pairing test of group-likeness over all basis word pairs with
// degree sum <= level.
bool is_grouplike(const FreeTensor& a, double tol);

// Flat serialization: "width level" header then coefficients in graded-lex
// order.  Binary and CSV forms; used to cache expected signatures.
void write_tensor(std::ostream& os, const FreeTensor& t);
FreeTensor read_tensor(std::istream& is);
void write_tensor_csv(std::ostream& os, const FreeTensor& t);
FreeTensor read_tensor_csv(std::istream& is);

}  // namespace sigstop
