#include "sigstop/h0_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace sigstop::h0 {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }
}  // namespace

double gamma(double x) { return norm_pdf(x) + x * norm_cdf(x); }

double H0Solution::value_scaled() const { return mu[1] * M_SQRT1_2; }

H0Solution solve(int J) {
  if (J < 1) throw std::invalid_argument("h0::solve: J >= 1 required");
  H0Solution s;
  s.J = J;
  s.mu.assign(J + 1, 0.0);
  for (int j = J - 1; j >= 1; --j) {
    const double ratio = static_cast<double>(j) / (j + 1);
    s.mu[j] = std::sqrt(ratio) * gamma(s.mu[j + 1] / std::sqrt(ratio));
  }
  return s;
}

}  // namespace sigstop::h0
