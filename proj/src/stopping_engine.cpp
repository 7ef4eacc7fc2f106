#include "sigstop/stopping_engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sigstop/rng.hpp"

namespace sigstop {

ZKind z_kind_from_string(const std::string& s) {
  if (s == "exp1" || s == "exp") return ZKind::Exp1;
  if (s == "loglogistic" || s == "log-logistic") return ZKind::LogLogistic;
  throw std::invalid_argument("unknown Z distribution: " + s);
}

std::string to_string(ZKind z) { return z == ZKind::Exp1 ? "exp1" : "loglogistic"; }

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

std::pair<double, double> mean_and_se(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) throw std::invalid_argument("mean_and_se: empty sample");
  const double mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

std::string StopEvaluation::csv_row(const std::string& experiment_id,
                                    const std::string& params, int level,
                                    const std::string& policy_kind,
                                    std::uint64_t seed) const {
  std::ostringstream os;
  os.precision(10);
  os << experiment_id << "," << params << "," << level << "," << policy_kind << ","
     << M << "," << value << "," << std_error << "," << seed;
  return os.str();
}

StopEvaluation smoothed_value(const std::vector<double>& y,
                              const std::vector<double>& theta, int J,
                              const ZDistribution& z) {
  const std::size_t cols = static_cast<std::size_t>(J) + 1;
  if (y.size() != theta.size() || y.size() % cols != 0)
    throw std::invalid_argument("smoothed_value: shape mismatch");
  const std::size_t M = y.size() / cols;
  std::vector<double> per_path(M);
#pragma omp parallel for schedule(static)
  for (long long m = 0; m < static_cast<long long>(M); ++m) {
    const double* ym = y.data() + m * cols;
    const double* tm = theta.data() + m * cols;
    double acc = 0.0, v = ym[0];
    for (int j = 0; j < J; ++j) {
      acc += tm[j] * tm[j];
      v += z.survival(acc) * (ym[j + 1] - ym[j]);
    }
    per_path[m] = v;
  }
  auto [mean, se] = mean_and_se(per_path);
  StopEvaluation ev;
  ev.value = mean;
  ev.std_error = se;
  ev.M = M;
  return ev;
}

std::vector<int> sample_stopping_indices(const std::vector<double>& theta, int J,
                                         const ZDistribution& z, std::uint64_t seed) {
  const std::size_t cols = static_cast<std::size_t>(J) + 1;
  if (theta.size() % cols != 0) throw std::invalid_argument("sample_stopping_indices: shape");
  const std::size_t M = theta.size() / cols;
  std::vector<int> idx(M);
#pragma omp parallel for schedule(static)
  for (long long m = 0; m < static_cast<long long>(M); ++m) {
    SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(m));
    const double zdraw = z.quantile(g.uniform());
    const double* tm = theta.data() + m * cols;
    double acc = 0.0;
    int stop = J;
    for (int j = 0; j <= J; ++j) {
      acc += tm[j] * tm[j];
      if (acc >= zdraw) { stop = j; break; }
    }
    idx[m] = stop;
  }
  return idx;
}

StopEvaluation sampled_stop_value(const std::vector<double>& y,
                                  const std::vector<double>& theta, int J,
                                  const ZDistribution& z, std::uint64_t seed) {
  std::vector<int> idx = sample_stopping_indices(theta, J, z, seed);
  const std::size_t cols = static_cast<std::size_t>(J) + 1;
  const std::size_t M = idx.size();
  std::vector<double> stopped(M);
  for (std::size_t m = 0; m < M; ++m) stopped[m] = y[m * cols + idx[m]];
  auto [mean, se] = mean_and_se(stopped);
  StopEvaluation ev;
  ev.value = mean;
  ev.std_error = se;
  ev.M = M;
  ev.per_path_stop_index = std::move(idx);
  return ev;
}

}  // namespace sigstop
