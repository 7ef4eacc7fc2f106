#pragma once

#include <cmath>
#include <vector>

#include "sigstop/free_tensor.hpp"
#include "sigstop/rng.hpp"
#include "sigstop/signature_stream.hpp"

namespace sigstop::testing {

inline FreeTensor random_tensor(int width, int level, SplitMix64& g, double scale = 1.0,
                                bool zero_scalar = false) {
  FreeTensor t(width, level);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = scale * g.uniform_sym();
  if (zero_scalar) t[0] = 0.0;
  return t;
}

// random piecewise-linear scalar path (time-augmented downstream)
inline std::vector<double> random_path(int n_points, SplitMix64& g, double step_scale) {
  std::vector<double> x(n_points);
  x[0] = 0.0;
  for (int j = 1; j < n_points; ++j) x[j] = x[j - 1] + step_scale * g.normal();
  return x;
}

inline std::vector<double> linspace(double a, double b, int n_points) {
  std::vector<double> t(n_points);
  for (int j = 0; j < n_points; ++j) t[j] = a + (b - a) * j / (n_points - 1);
  return t;
}

// signature of the time-augmented path up to time tq (tq inside the grid),
// extending the last partial segment exactly
inline FreeTensor sig_at(const std::vector<double>& times, const std::vector<double>& x,
                         int level, double tq) {
  FreeTensor s = FreeTensor::one(2, level);
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    if (times[j] >= tq) break;
    const double t1 = std::min(times[j + 1], tq);
    const double frac = (t1 - times[j]) / (times[j + 1] - times[j]);
    std::vector<double> inc{t1 - times[j], frac * (x[j + 1] - x[j])};
    s = tensor_mul(s, segment_signature(inc, level));
  }
  return s;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / (1.0 + std::fabs(want));
}

}  // namespace sigstop::testing
