#pragma once

#include <cstdint>
#include <string>

#include "sigstop/policies.hpp"
#include "sigstop/process_models.hpp"
#include "sigstop/stopping_engine.hpp"

namespace sigstop {

// One sample -> sign -> train -> resimulate pipeline run.
struct ExperimentSpec {
  CovModel model;
  GridSpec grid{1.0, 100, 100};
  int level = 2;
  bool deep = true;
  int hidden_layers = 2;
  int neurons = 0;  // 0 -> eta_{1+d,N} + 30
  int train_exp = 16;
  int eval_exp = 18;
  ZKind z = ZKind::Exp1;
  std::uint64_t seed = 1;          // master; train/eval/init seeds derive from it
  TrainConfig train_cfg;
  double rate = 0.05;              // electricity only
  double strike = 100.0;           // electricity only

  std::uint64_t train_seed() const { return seed; }
  std::uint64_t eval_seed() const { return seed + 1000003; }
  void validate() const;
};

struct ExperimentResult {
  LowerBound lb;
  Policy policy;
  std::vector<double> loss_trace;
  double train_seconds = 0.0;
  double eval_seconds = 0.0;
  double oracle_ceiling = std::numeric_limits<double>::quiet_NaN();   // H = 0 rows
  double european = std::numeric_limits<double>::quiet_NaN();        // electricity rows
  double european_se = std::numeric_limits<double>::quiet_NaN();
  std::size_t m_eval = 0;
};

PathBatch sample_model(const CovModel& model, double rate, double strike,
                       const GridSpec& grid, int M, std::uint64_t seed);

ExperimentResult run_stopping_experiment(const ExperimentSpec& spec);

// Resolved-parameter echo for report headers.
std::string describe(const ExperimentSpec& spec);

}  // namespace sigstop
