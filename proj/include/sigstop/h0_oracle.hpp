#pragma once

#include <vector>

namespace sigstop::h0 {

// gamma(x) = phi(x) + x Phi(x), standard normal pdf/cdf (erfc-based).
double gamma(double x);

// Exact solution of the discrete optimal stopping problem for the H = 0
// process via the backward recursion mu_J = 0,
// mu_j = sqrt(j/(j+1)) gamma(mu_{j+1} sqrt((j+1)/j)).
// The recursion values refer to the unscaled payoff Y_j = xi_j - xi_0; the
// process sampled in experiments carries a 1/sqrt(2), whose optimal value is
// value_scaled (1.5830 at J = 100, the Table-2 convention).
struct H0Solution {
  int J = 0;
  std::vector<double> mu;  // mu[j] for j = 1..J (mu[0] unused)
  double value_unscaled() const { return mu[1]; }
  double value_scaled() const;
};

H0Solution solve(int J);

}  // namespace sigstop::h0
