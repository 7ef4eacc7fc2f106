#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sigstop/process_models.hpp"
#include "sigstop/symbolic.hpp"

namespace sigstop {

// Monte-Carlo mean of terminal prefix signatures with per-coefficient
// standard errors; empty-word coefficient is exactly 1.
struct ExpectedSig {
  FreeTensor tensor;
  Eigen::VectorXd std_errors;
  std::size_t M = 0;
};

ExpectedSig expected_signature(const PathBatch& batch, int level);

// Payoff Y_t = G(X_t) + int_0^t L(X_s) ds for polynomials G, L given by
// ascending coefficient lists.  The identity payoff is G(x) = x, L = 0.
struct PolynomialPayoff {
  std::vector<double> G{0.0, 1.0};
  std::vector<double> L{};
  int deriv_degree() const { return std::max<int>(0, static_cast<int>(G.size()) - 2); }
};

// Deterministic objective of the fully linearized stopping problem:
// lambda |-> <(exp_sh(-(l sh l)1) sh G'^sh(2)) 2 + (exp_sh(-(l sh l)1) sh L^sh(2)) 1, E>
// with l = sum lambda_i w_i over words of length <= k, as a real polynomial
// in lambda plus its formal gradient.
struct LinObjective {
  int k = 0;
  int level = 0;
  double constraint = 1.0;       // l1 ball radius K
  std::vector<Word> words;       // variable i <-> words[i]
  MultiPoly poly;
  std::vector<MultiPoly> gradient;

  double value(const Eigen::VectorXd& lambda) const { return poly.eval(lambda); }
  Eigen::VectorXd grad(const Eigen::VectorXd& lambda) const;
};

// Symbolic objective dual (no expectation yet); exposed for oracle tests.
SymbolicDualPoly symbolic_objective_dual(const PolynomialPayoff& payoff, int width,
                                         int k, int level);

LinObjective build_objective(const PolynomialPayoff& payoff, const ExpectedSig& esig,
                             int k, double constraint);

// Euclidean projection onto the l1 ball of radius K (sorting-based).
Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double K);

struct RestartReport {
  int restart = 0;
  int iterations = 0;
  double value = 0.0;
  double lambda_l1 = 0.0;
};

struct MaximizeResult {
  Eigen::VectorXd lambda;
  double value = 0.0;
  int restarts_used = 0;
  std::vector<RestartReport> restarts;
};

// Projected gradient ascent with backtracking, best over random restarts.
MaximizeResult maximize(const LinObjective& obj, int restarts, std::uint64_t seed);

}  // namespace sigstop
