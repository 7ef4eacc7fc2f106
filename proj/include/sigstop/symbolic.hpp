#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "sigstop/free_tensor.hpp"
#include "sigstop/shuffle.hpp"
#include "sigstop/word.hpp"

namespace sigstop {

// Sparse multivariate polynomial in formal variables lambda_0..lambda_{n-1};
// keys are exponent vectors.
class MultiPoly {
 public:
  using Monomial = std::vector<std::uint8_t>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars) : nvars_(nvars) {}
  static MultiPoly constant(int nvars, double c);
  static MultiPoly variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::map<Monomial, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int total_degree() const;

  void add_term(const Monomial& m, double c);
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator*=(double s);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  MultiPoly derivative(int var) const;
  double eval(const Eigen::VectorXd& lambda) const;

 private:
  int nvars_ = 0;
  std::map<Monomial, double> terms_;
};

// Dual polynomial whose word coefficients are polynomials in lambda;
// substituting reals for all lambda yields a DualPoly.
class SymbolicDualPoly {
 public:
  SymbolicDualPoly() = default;
  SymbolicDualPoly(int width, int nvars) : width_(width), nvars_(nvars) {}

  int width() const { return width_; }
  int nvars() const { return nvars_; }
  const std::map<Word, MultiPoly>& terms() const { return terms_; }

  void add(const Word& w, const MultiPoly& p);
  SymbolicDualPoly& operator+=(const SymbolicDualPoly& o);
  SymbolicDualPoly truncated(int max_deg) const;

  DualPoly substitute(const Eigen::VectorXd& lambda) const;

 private:
  int width_ = 0;
  int nvars_ = 0;
  std::map<Word, MultiPoly> terms_;
};

SymbolicDualPoly shuffle(const SymbolicDualPoly& a, const SymbolicDualPoly& b);
SymbolicDualPoly append_letter(const SymbolicDualPoly& l, int letter);
// exp-shuffle of a symbolic polynomial with no empty-word part, truncated to
// words of length <= out_level.
SymbolicDualPoly shuffle_exp(const SymbolicDualPoly& l, int out_level);

// l = sum_i lambda_i w_i over all words of length <= k (graded-lex order of
// variables; lambda_0 sits on the empty word).
SymbolicDualPoly symbolic_policy(int width, int k);
std::vector<Word> policy_words(int width, int k);

// <sym, a> as a polynomial in lambda; requires max word length <= a.level().
MultiPoly pair_symbolic(const SymbolicDualPoly& sym, const FreeTensor& a);

}  // namespace sigstop
