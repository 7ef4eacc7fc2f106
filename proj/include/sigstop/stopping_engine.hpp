#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigstop/process_models.hpp"

namespace sigstop {

// Distribution of the randomization threshold Z.
enum class ZKind { Exp1, LogLogistic };

ZKind z_kind_from_string(const std::string& s);
std::string to_string(ZKind z);

// Survival function, cdf, survival derivative, and quantile.  The exponential
// survival underflows to exactly 0 beyond x = 700 (trained policies saturate).
struct ZDistribution {
  ZKind kind = ZKind::Exp1;

  double survival(double x) const {
    if (kind == ZKind::Exp1) return x > 700.0 ? 0.0 : std::exp(-x);
    return 1.0 / (1.0 + x);
  }
  double cdf(double x) const { return 1.0 - survival(x); }
  double survival_deriv(double x) const {
    if (kind == ZKind::Exp1) return x > 700.0 ? 0.0 : -std::exp(-x);
    const double g = 1.0 + x;
    return -1.0 / (g * g);
  }
  double quantile(double u) const {  // F^{-1}(u), u in (0,1)
    if (kind == ZKind::Exp1) return -std::log(1.0 - u);
    return u / (1.0 - u);
  }
};

struct StopEvaluation {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t M = 0;
  std::optional<std::vector<int>> per_path_stop_index;

  std::string csv_row(const std::string& experiment_id, const std::string& params,
                      int level, const std::string& policy_kind, std::uint64_t seed) const;
};

// Discretized regularized value: mean over paths of
//   Y_0 + sum_j G_Z(sum_{i<=j} theta_i^2) (Y_{j+1} - Y_j).
// theta row-major M x (J+1); y row-major M x (J+1).
StopEvaluation smoothed_value(const std::vector<double>& y,
                              const std::vector<double>& theta, int J,
                              const ZDistribution& z);

// First index j with sum_{i<=j} theta_i^2 >= Z (independent Z per path); J if
// the threshold is never crossed.
std::vector<int> sample_stopping_indices(const std::vector<double>& theta, int J,
                                         const ZDistribution& z, std::uint64_t seed);

// Mean payoff at the sampled stopping indices; the Monte-Carlo cross-check
// estimator for smoothed_value.
StopEvaluation sampled_stop_value(const std::vector<double>& y,
                                  const std::vector<double>& theta, int J,
                                  const ZDistribution& z, std::uint64_t seed);

// Deterministic pairwise summation (reduction order independent of threading).
double pairwise_sum(const double* data, std::size_t n);
// Mean and standard error of a sample via pairwise sums.
std::pair<double, double> mean_and_se(const std::vector<double>& v);

}  // namespace sigstop
