#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sigstop/lyndon.hpp"
#include "sigstop/process_models.hpp"
#include "sigstop/signature_stream.hpp"
#include "sigstop/shuffle.hpp"
#include "sigstop/stopping_engine.hpp"

namespace sigstop {

// theta_l = <l, sig> with l dense over all words of length <= level
// (empty word included: constant offset).
struct LinearPolicy {
  int width = 2;
  int level = 3;
  Eigen::VectorXd coeffs;
  std::uint64_t train_seed = 0;

  DualPoly as_dual() const;
  static LinearPolicy zero(int width, int level);
};

// Small uniform coefficients: theta starts near "never stop" but off the
// gradient-null point theta == 0.
LinearPolicy make_linear_policy(int width, int level, std::uint64_t seed);

// theta_log = A_0 . relu . A_1 . relu ... A_I on Lyndon log-signature
// coordinates, standardized per coordinate by training-set statistics.
struct DeepPolicy {
  int width = 2;
  int level = 2;
  std::vector<Eigen::MatrixXd> W;  // input -> output order; W.size() == I + 1
  std::vector<Eigen::VectorXd> b;
  Eigen::VectorXd norm_mean, norm_std;
  std::uint64_t train_seed = 0;

  int input_dim() const { return static_cast<int>(W.front().cols()); }
  int hidden_layers() const { return static_cast<int>(W.size()) - 1; }
};

// He-style init for hidden layers, small uniform output weights so the
// initial policy is near "never stop".
DeepPolicy make_deep_policy(int width, int level, int hidden_layers, int neurons,
                            std::uint64_t seed);

using Policy = std::variant<LinearPolicy, DeepPolicy>;
std::string policy_kind(const Policy& p);
int policy_level(const Policy& p);

// Per-grid-point policy inputs for a batch: row (m, j) holds either the eta
// log-signature coordinates (deep) or the 1 + sigma signature coefficients
// (linear) of path m at payoff time t_j.
struct FeatureSet {
  int M = 0;
  int J = 0;
  int dim = 0;
  std::vector<double> rows;  // M * (J+1) * dim, row-major
  std::vector<double> y;     // M * (J+1)

  std::size_t row_count() const { return static_cast<std::size_t>(M) * (J + 1); }
};

FeatureSet deep_features(const PathBatch& batch, int level);
FeatureSet linear_features(const PathBatch& batch, int level);

// Training-set standardization constants (deep policies).
void fit_normalization(const FeatureSet& f, Eigen::VectorXd& mean, Eigen::VectorXd& std);

// Policy outputs over one signature stream (granular forms used by tests).
std::vector<double> eval_linear(const LinearPolicy& p, const SigStream& s);
std::vector<double> eval_deep(const DeepPolicy& p,
                              const std::vector<std::vector<double>>& logsig_coords);

// Policy outputs for `count` feature rows (row-major, FeatureSet layout),
// evaluated in cache-sized blocks in parallel.
Eigen::VectorXd policy_forward(const Policy& p, const double* rows, std::size_t count, int dim);

// Flat parameter vector (Adam state lives on this packing).
Eigen::VectorXd pack_params(const Policy& p);
void unpack_params(Policy& p, const Eigen::VectorXd& flat);

// Negative smoothed value over the selected paths and its gradient in the
// flat parameter packing.  Reverse mode through G_Z, the cumulative
// theta^2 sums, and the policy.
std::pair<double, Eigen::VectorXd> loss_and_gradient(const Policy& p,
                                                     const FeatureSet& f,
                                                     const std::vector<int>& paths,
                                                     const ZDistribution& z);

struct TrainConfig {
  double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int batch_size = 1024;
  int max_epochs = 30;
  int plateau_epochs = 6;       // stop after this many epochs without
  double plateau_tol = 1e-5;    // at least plateau_tol improvement
  std::uint64_t seed = 1;
  void validate() const;
};

struct TrainResult {
  Policy policy;
  std::vector<double> epoch_loss;   // epoch-averaged minibatch loss
  double best_loss = 0.0;
};

// Minibatch Adam descent on the smoothed-value loss; returns the
// best-by-training-loss parameters and the per-epoch trace.
TrainResult train(const Policy& init, const FeatureSet& data, const ZDistribution& z,
                  const TrainConfig& cfg);

// Low-biased estimate on fresh paths: smoothed estimator plus the sampled-Z
// cross-check, computed chunk-wise (no full theta matrix is materialized).
// Refuses batches whose seed collides with the policy's training seed.
struct LowerBound {
  StopEvaluation smoothed;
  StopEvaluation sampled;
  bool crosscheck_ok(double n_se = 3.0) const;
};
LowerBound lower_bound(const PathBatch& fresh, const Policy& p, const ZDistribution& z,
                       int chunk = 8192);

// Checkpoint: JSON header (kind, shape, architecture, normalization) plus a
// flat weight array.
void save_policy(const std::string& filename, const Policy& p);
Policy load_policy(const std::string& filename);

}  // namespace sigstop
