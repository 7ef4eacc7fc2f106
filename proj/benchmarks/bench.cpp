// Serial vs OpenMP timing of the path-parallel kernels: sampling, signature
// streaming, loss/gradient, and resimulation.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sigstop/experiments.hpp"
#include "sigstop/policies.hpp"

using namespace sigstop;

namespace {

double time_once(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& name, const std::function<void()>& fn) {
  omp_set_num_threads(1);
  fn();  // warm caches and the shuffle memo
  const double serial = time_once(fn);
  omp_set_num_threads(omp_get_num_procs());
  const double parallel = time_once(fn);
  std::printf("%-34s serial %8.3fs   %d threads %8.3fs   speedup %.2fx\n", name.c_str(), serial,
              omp_get_num_procs(), parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("kernel benchmarks, %d hardware threads\n", omp_get_num_procs());

  GridSpec grid{1.0, 100, 100};
  const int M = 16384;

  report("sample_fbm H=0.1, M=16k, J=100", [&] { sample_fbm(0.1, grid, M, 1); });

  PathBatch batch = sample_fbm(0.1, grid, M, 1);
  report("deep features N=3 (logsig)", [&] { deep_features(batch, 3); });
  report("linear features N=3 (sig)", [&] { linear_features(batch, 3); });

  FeatureSet f = deep_features(batch, 3);
  DeepPolicy dp = make_deep_policy(2, 3, 2, 35, 3);
  fit_normalization(f, dp.norm_mean, dp.norm_std);
  std::vector<int> paths(batch.M);
  for (int i = 0; i < batch.M; ++i) paths[i] = i;
  report("loss_and_gradient deep, 16k paths",
         [&] { loss_and_gradient(dp, f, paths, ZDistribution{}); });

  dp.train_seed = 1;
  PathBatch fresh = sample_fbm(0.1, grid, M, 2);
  report("lower_bound deep N=3, 16k paths",
         [&] { lower_bound(fresh, Policy{dp}, ZDistribution{}); });
  return 0;
}
