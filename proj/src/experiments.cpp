#include "sigstop/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sigstop/h0_oracle.hpp"
#include "sigstop/lyndon.hpp"

namespace sigstop {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

void ExperimentSpec::validate() const {
  model.validate();
  grid.validate();
  if (level < 1 || level > 12) throw std::invalid_argument("experiment: level out of range");
  if (train_exp < 4 || train_exp > 26 || eval_exp < 4 || eval_exp > 26)
    throw std::invalid_argument("experiment: sample exponents out of range");
  if (train_seed() == eval_seed()) throw std::invalid_argument("experiment: seed collision");
  if (model.kind == ModelKind::H0 && grid.J_fine != grid.J)
    throw std::invalid_argument("experiment: H0 model has no refinement grid");
  train_cfg.validate();
}

PathBatch sample_model(const CovModel& model, double rate, double strike,
                       const GridSpec& grid, int M, std::uint64_t seed) {
  switch (model.kind) {
    case ModelKind::BM:
      return sample_fbm(0.5, grid, M, seed);
    case ModelKind::FBM:
      return sample_fbm(model.H, grid, M, seed);
    case ModelKind::H0:
      return sample_h0(grid, M, seed);
    case ModelKind::GammaOU:
      return sample_electricity(model, rate, strike, grid, M, seed);
  }
  throw std::logic_error("sample_model: unknown kind");
}

ExperimentResult run_stopping_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult res;
  const int m_train = 1 << spec.train_exp;
  const int m_eval = 1 << spec.eval_exp;
  const ZDistribution z{spec.z};

  auto t0 = std::chrono::steady_clock::now();
  PathBatch train_batch =
      sample_model(spec.model, spec.rate, spec.strike, spec.grid, m_train, spec.train_seed());

  Policy policy;
  FeatureSet features;
  if (spec.deep) {
    features = deep_features(train_batch, spec.level);
    const auto [sigma, eta] = dims(1 + train_batch.d, spec.level);
    (void)sigma;
    const int q = spec.neurons > 0 ? spec.neurons : static_cast<int>(eta) + 30;
    DeepPolicy dp = make_deep_policy(1 + train_batch.d, spec.level, spec.hidden_layers, q,
                                     spec.seed ^ 0x5bf03635ull);
    fit_normalization(features, dp.norm_mean, dp.norm_std);
    dp.train_seed = spec.train_seed();
    policy = dp;
  } else {
    features = linear_features(train_batch, spec.level);
    LinearPolicy lp = make_linear_policy(1 + train_batch.d, spec.level, spec.seed ^ 0x5bf03635ull);
    lp.train_seed = spec.train_seed();
    policy = lp;
  }

  TrainConfig cfg = spec.train_cfg;
  cfg.seed = spec.seed ^ 0x9e3779b9ull;
  TrainResult tr = train(policy, features, z, cfg);
  res.policy = tr.policy;
  res.loss_trace = tr.epoch_loss;
  res.train_seconds = seconds_since(t0);
  features = FeatureSet{};    // release training memory before resimulation
  train_batch = PathBatch{};

  t0 = std::chrono::steady_clock::now();
  PathBatch eval_batch =
      sample_model(spec.model, spec.rate, spec.strike, spec.grid, m_eval, spec.eval_seed());
  res.lb = lower_bound(eval_batch, res.policy, z);
  res.eval_seconds = seconds_since(t0);
  res.m_eval = static_cast<std::size_t>(m_eval);

  if (spec.model.kind == ModelKind::H0)
    res.oracle_ceiling = h0::solve(spec.grid.J).value_scaled();
  if (spec.model.kind == ModelKind::GammaOU) {
    // terminal payoff row is exactly the European put sample
    std::vector<double> eur(eval_batch.M);
    for (int m = 0; m < eval_batch.M; ++m) eur[m] = eval_batch.payoff(m)[spec.grid.J];
    auto [mean, se] = mean_and_se(eur);
    res.european = mean;
    res.european_se = se;
  }
  return res;
}

std::string describe(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << spec.model.str() << ",J=" << spec.grid.J << ",Jfine=" << spec.grid.J_fine
     << ",N=" << spec.level << "," << (spec.deep ? "deep" : "linear");
  if (spec.deep) os << "(I=" << spec.hidden_layers << ")";
  os << ",Mtrain=2^" << spec.train_exp << ",Meval=2^" << spec.eval_exp
     << ",z=" << to_string(spec.z) << ",seed=" << spec.seed;
  if (spec.model.kind == ModelKind::GammaOU) os << ",K=" << spec.strike << ",r=" << spec.rate;
  return os.str();
}

}  // namespace sigstop
