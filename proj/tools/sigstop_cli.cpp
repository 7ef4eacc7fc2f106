// Experiment runner for signature-based optimal stopping: fractional
// Brownian motion and electricity-option tables, the fully linearized
// expected-signature route, and the H=0 closed-form reference.

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sigstop/experiments.hpp"
#include "sigstop/h0_oracle.hpp"
#include "sigstop/linearized_solver.hpp"
#include "sigstop/lyndon.hpp"

using json = nlohmann::json;
using namespace sigstop;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CliConfig {
  std::string model = "fbm";
  std::vector<double> hurst{0.1};
  double alpha = -0.4, lambda = 0.02, sigma_vol = 0.2, spot = 100.0, rate = 0.05;
  std::vector<double> strikes{100.0};
  double horizon = 1.0;
  int steps = 100;
  int fine_steps = 0;  // 0 -> steps
  std::vector<int> levels{2};
  std::string policy = "deep";
  int hidden = 2;
  int width = 0;  // 0 -> eta + 30
  int train_exp = 16;
  int eval_exp = 18;
  std::string z_dist = "exp1";
  std::uint64_t seed = 1;
  int epochs = 30;
  int batch = 1024;
  double lr = 1e-3;
  int threads = 0;
  std::string out;
  std::string checkpoint_dir;
  // linearized route
  int k_words = 1;
  double constraint = 1.0;
  int restarts = 20;
  int m_exp = 17;
  std::string expsig_cache;

  json echo() const {
    json j;
    j["version"] = 1;
    j["model"] = {{"kind", model},     {"hurst", hurst},      {"alpha", alpha},
                  {"lambda", lambda},  {"sigma", sigma_vol},  {"spot", spot},
                  {"rate", rate},      {"strikes", strikes}};
    j["grid"] = {{"T", horizon}, {"J", steps}, {"J_fine", fine_steps == 0 ? steps : fine_steps}};
    j["levels"] = levels;
    j["policy"] = {{"kind", policy}, {"hidden", hidden}, {"width", width}};
    j["train_exp"] = train_exp;
    j["eval_exp"] = eval_exp;
    j["z"] = z_dist;
    j["seed"] = seed;
    j["train"] = {{"epochs", epochs}, {"batch", batch}, {"lr", lr}};
    j["threads"] = threads;
    j["linearized"] = {{"k", k_words}, {"constraint", constraint}, {"restarts", restarts},
                       {"m_exp", m_exp}};
    return j;
  }
};

void load_config_file(CliConfig& c, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("config", "cannot open config file " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("config", std::string("config parse error: ") + e.what());
  }
  if (j.value("version", 1) != 1)
    throw CLI::ValidationError("config", "unsupported config version");
  if (j.contains("model")) {
    const auto& m = j["model"];
    c.model = m.value("kind", c.model);
    if (m.contains("hurst")) {
      c.hurst.clear();
      if (m["hurst"].is_array())
        for (const auto& h : m["hurst"]) c.hurst.push_back(h.get<double>());
      else
        c.hurst.push_back(m["hurst"].get<double>());
    }
    c.alpha = m.value("alpha", c.alpha);
    c.lambda = m.value("lambda", c.lambda);
    c.sigma_vol = m.value("sigma", c.sigma_vol);
    c.spot = m.value("spot", c.spot);
    c.rate = m.value("rate", c.rate);
    if (m.contains("strikes")) c.strikes = m["strikes"].get<std::vector<double>>();
  }
  if (j.contains("grid")) {
    c.horizon = j["grid"].value("T", c.horizon);
    c.steps = j["grid"].value("J", c.steps);
    c.fine_steps = j["grid"].value("J_fine", c.fine_steps);
  }
  if (j.contains("levels")) c.levels = j["levels"].get<std::vector<int>>();
  if (j.contains("level")) c.levels = {j["level"].get<int>()};
  if (j.contains("policy")) {
    c.policy = j["policy"].value("kind", c.policy);
    c.hidden = j["policy"].value("hidden", c.hidden);
    c.width = j["policy"].value("width", c.width);
  }
  c.train_exp = j.value("train_exp", c.train_exp);
  c.eval_exp = j.value("eval_exp", c.eval_exp);
  c.z_dist = j.value("z", c.z_dist);
  c.seed = j.value("seed", c.seed);
  if (j.contains("train")) {
    c.epochs = j["train"].value("epochs", c.epochs);
    c.batch = j["train"].value("batch", c.batch);
    c.lr = j["train"].value("lr", c.lr);
  }
  c.threads = j.value("threads", c.threads);
  c.out = j.value("out", c.out);
  if (j.contains("linearized")) {
    c.k_words = j["linearized"].value("k", c.k_words);
    c.constraint = j["linearized"].value("constraint", c.constraint);
    c.restarts = j["linearized"].value("restarts", c.restarts);
    c.m_exp = j["linearized"].value("m_exp", c.m_exp);
  }
}

class Report {
 public:
  Report(const std::string& path, const json& config_echo, const std::string& header) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw CLI::ValidationError("out", "cannot open output file " + path);
    }
    line("# config: " + config_echo.dump());
    line(header);
  }
  void line(const std::string& s) {
    std::cout << s << "\n";
    if (file_.is_open()) file_ << s << "\n";
  }

 private:
  std::ofstream file_;
};

ExperimentSpec base_spec(const CliConfig& c) {
  ExperimentSpec spec;
  spec.grid = GridSpec{c.horizon, c.steps, c.fine_steps == 0 ? c.steps : c.fine_steps};
  spec.deep = (c.policy == "deep");
  if (!spec.deep && c.policy != "linear")
    throw CLI::ValidationError("policy", "policy must be deep or linear");
  spec.hidden_layers = c.hidden;
  spec.neurons = c.width;
  spec.train_exp = c.train_exp;
  spec.eval_exp = c.eval_exp;
  spec.z = z_kind_from_string(c.z_dist);
  spec.seed = c.seed;
  spec.train_cfg.max_epochs = c.epochs;
  spec.train_cfg.batch_size = c.batch;
  spec.train_cfg.lr = c.lr;
  spec.rate = c.rate;
  return spec;
}

std::string result_row(const std::string& experiment, const std::string& params,
                       const ExperimentSpec& spec, const ExperimentResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.lb.smoothed.csv_row(experiment, params, spec.level, spec.deep ? "deep" : "linear",
                              spec.eval_seed());
  os << "," << r.lb.sampled.value << "," << r.lb.sampled.std_error << ","
     << (r.lb.crosscheck_ok() ? 1 : 0) << ",";
  if (std::isfinite(r.oracle_ceiling)) os << r.oracle_ceiling;
  os << ",";
  if (std::isfinite(r.european)) os << r.european;
  os << ",";
  if (std::isfinite(r.european_se)) os << r.european_se;
  os << "," << spec.grid.J << "," << (1 << spec.train_exp) << "," << r.train_seconds << ","
     << r.eval_seconds;
  return os.str();
}

const char* kRowHeader =
    "experiment,params,level,policy,M,value,std_error,seed,value_sampled,se_sampled,"
    "crosscheck_ok,oracle,european,european_se,J,M_train,train_seconds,eval_seconds";

void maybe_save_checkpoint(const CliConfig& c, const std::string& tag,
                           const ExperimentResult& r) {
  if (c.checkpoint_dir.empty()) return;
  std::filesystem::create_directories(c.checkpoint_dir);
  save_policy(c.checkpoint_dir + "/" + tag + ".policy.json", r.policy);
  std::ofstream trace(c.checkpoint_dir + "/" + tag + ".loss.csv");
  trace << "epoch,loss\n";
  for (std::size_t e = 0; e < r.loss_trace.size(); ++e)
    trace << e << "," << r.loss_trace[e] << "\n";
}

int run_fbm_table(const CliConfig& c) {
  Report rep(c.out, c.echo(), kRowHeader);
  for (double H : c.hurst) {
    for (int N : c.levels) {
      ExperimentSpec spec = base_spec(c);
      spec.level = N;
      if (H == 0.0) {
        spec.model.kind = ModelKind::H0;
      } else {
        spec.model.kind = ModelKind::FBM;
        spec.model.H = H;
      }
      ExperimentResult r = run_stopping_experiment(spec);
      std::ostringstream params;
      params << "H=" << H;
      rep.line(result_row("fbm", params.str(), spec, r));
      if (!r.lb.crosscheck_ok())
        throw std::runtime_error("estimator cross-check failed for H=" + std::to_string(H));
      std::ostringstream tag;
      tag << "fbm_H" << H << "_N" << N;
      maybe_save_checkpoint(c, tag.str(), r);
    }
  }
  return 0;
}

int run_electricity_table(const CliConfig& c) {
  Report rep(c.out, c.echo(), kRowHeader);
  for (double K : c.strikes) {
    for (int N : c.levels) {
      ExperimentSpec spec = base_spec(c);
      spec.level = N;
      spec.model.kind = ModelKind::GammaOU;
      spec.model.alpha = c.alpha;
      spec.model.lambda = c.lambda;
      spec.model.sigma = c.sigma_vol;
      spec.model.x0 = std::log(c.spot);
      spec.strike = K;
      ExperimentResult r = run_stopping_experiment(spec);
      std::ostringstream params;
      params << "K=" << K;
      rep.line(result_row("electricity", params.str(), spec, r));
      if (!r.lb.crosscheck_ok())
        throw std::runtime_error("estimator cross-check failed for K=" + std::to_string(K));
      if (r.lb.smoothed.value < r.european - 3 * r.european_se)
        throw std::runtime_error("American lower bound fell below the European reference");
      std::ostringstream tag;
      tag << "elec_K" << K << "_N" << N;
      maybe_save_checkpoint(c, tag.str(), r);
    }
  }
  return 0;
}

int run_linearized(const CliConfig& c) {
  if (c.model != "fbm" && c.model != "bm")
    throw CLI::ValidationError("model", "linearized route supports the fbm/bm identity payoff");
  const int N = c.levels.front();
  ExperimentSpec spec = base_spec(c);
  spec.level = N;
  CovModel model;
  model.kind = ModelKind::FBM;
  model.H = c.model == "bm" ? 0.5 : c.hurst.front();
  model.validate();

  const int M = 1 << c.m_exp;
  ExpectedSig esig;
  bool cached = false;
  if (!c.expsig_cache.empty() && std::filesystem::exists(c.expsig_cache)) {
    std::ifstream is(c.expsig_cache, std::ios::binary);
    esig.tensor = read_tensor(is);
    if (esig.tensor.width() != 2 || esig.tensor.level() != N)
      throw std::runtime_error("expected-signature cache has the wrong shape");
    esig.std_errors.resize(static_cast<Eigen::Index>(esig.tensor.size()));
    for (Eigen::Index i = 0; i < esig.std_errors.size(); ++i) {
      double v;
      is.read(reinterpret_cast<char*>(&v), sizeof v);
      esig.std_errors[i] = v;
    }
    if (!is) throw std::runtime_error("corrupt expected-signature cache");
    esig.M = static_cast<std::size_t>(M);
    cached = true;
  } else {
    PathBatch batch = sample_model(model, 0.0, 0.0, spec.grid, M, c.seed);
    esig = expected_signature(batch, N);
    if (!c.expsig_cache.empty()) {
      std::ofstream os(c.expsig_cache, std::ios::binary);
      write_tensor(os, esig.tensor);
      for (Eigen::Index i = 0; i < esig.std_errors.size(); ++i) {
        double v = esig.std_errors[i];
        os.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    }
  }

  LinObjective obj = build_objective(PolynomialPayoff{}, esig, c.k_words, c.constraint);
  MaximizeResult best = maximize(obj, c.restarts, c.seed + 17);

  // simulation cross-check of the optimized damped functional on fresh paths
  PathBatch fresh = sample_model(model, 0.0, 0.0, spec.grid, M, c.seed + 1000003);
  DualPoly l(2);
  for (std::size_t i = 0; i < obj.words.size(); ++i)
    l.add(obj.words[i], best.lambda[static_cast<Eigen::Index>(i)]);
  DualPoly damp = shuffle_exp(append_letter(shuffle(l, l) * -1.0, 1), N - 1);
  DualPoly functional = append_letter(damp, 2);
  std::vector<double> per_path(fresh.M);
  const std::vector<double> times = fresh.grid.fine_times();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < fresh.M; ++m) {
    std::vector<double> path(fresh.path(m), fresh.path(m) + times.size());
    FreeTensor sig = stream_signatures(times, path, 1, N, fresh.grid.J_fine).sigs.back();
    per_path[m] = pair(functional, sig);
  }
  auto [mc, mc_se] = mean_and_se(per_path);

  Report rep(c.out, c.echo(),
             "experiment,params,level,k,K,M,objective,crosscheck_value,crosscheck_se,"
             "restarts,lambda_l1,cached_expsig");
  std::ostringstream row;
  row.precision(10);
  row << "linearized,H=" << model.H << "," << N << "," << c.k_words << "," << c.constraint << ","
      << M << "," << best.value << "," << mc << "," << mc_se << "," << best.restarts_used << ","
      << best.lambda.lpNorm<1>() << "," << (cached ? 1 : 0);
  rep.line(row.str());

  std::ostringstream lam;
  lam << "# lambda:";
  for (std::size_t i = 0; i < obj.words.size(); ++i)
    lam << " " << obj.words[i].str() << "=" << best.lambda[static_cast<Eigen::Index>(i)];
  rep.line(lam.str());
  rep.line("restart,iterations,value,lambda_l1");
  for (const RestartReport& rr : best.restarts) {
    std::ostringstream r2;
    r2.precision(10);
    r2 << rr.restart << "," << rr.iterations << "," << rr.value << "," << rr.lambda_l1;
    rep.line(r2.str());
  }
  return 0;
}

int run_h0(const CliConfig& c) {
  Report rep(c.out, c.echo(), "J,value_unscaled,value_scaled");
  h0::H0Solution s = h0::solve(c.steps);
  std::ostringstream row;
  row.precision(10);
  row << c.steps << "," << s.value_unscaled() << "," << s.value_scaled();
  rep.line(row.str());
  return 0;
}

int run_dims(const CliConfig& c, bool levels_given) {
  Report rep(c.out, c.echo(), "width,level,sigma,eta");
  const std::vector<int> levels = levels_given ? c.levels : std::vector<int>{1, 2, 3, 4, 5, 6};
  for (int m = 1; m <= 4; ++m)
    for (int N : levels) {
      auto [sigma, eta] = dims(m, N);
      std::ostringstream row;
      row << m << "," << N << "," << sigma << "," << eta;
      rep.line(row.str());
    }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signature stopping policies: training, evaluation and tables"};
  app.require_subcommand(1);
  CliConfig c;

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)")
      ->check(CLI::ExistingFile);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", c.model, "model kind: fbm | bm | h0 | electricity");
    sub->add_option("--hurst", c.hurst, "Hurst parameter(s); 0 selects the H=0 limit process");
    sub->add_option("--level", c.levels, "signature truncation level(s)");
    sub->add_option("--policy", c.policy, "policy kind: deep | linear");
    sub->add_option("--hidden", c.hidden, "hidden layers I");
    sub->add_option("--width", c.width, "neurons per layer (0: eta + 30)");
    sub->add_option("--train-exp", c.train_exp, "log2 training sample count");
    sub->add_option("--eval-exp", c.eval_exp, "log2 resimulation sample count");
    sub->add_option("--steps", c.steps, "payoff grid steps J");
    sub->add_option("--fine-steps", c.fine_steps, "simulation grid steps (0: same as J)");
    sub->add_option("--horizon", c.horizon, "time horizon T");
    sub->add_option("--z-dist", c.z_dist, "randomization law: exp1 | loglogistic");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--epochs", c.epochs, "training epochs");
    sub->add_option("--batch", c.batch, "minibatch size");
    sub->add_option("--lr", c.lr, "Adam learning rate");
    sub->add_option("--threads", c.threads,
                    "worker threads (0: OpenMP default; 1: deterministic runs)");
    sub->add_option("--out", c.out, "CSV output path (also echoed to stdout)");
    sub->add_option("--checkpoint-dir", c.checkpoint_dir, "directory for policy checkpoints");
  };

  CLI::App* fbm = app.add_subcommand("fbm-table", "low-biased stopping values of fractional BM");
  add_common(fbm);
  CLI::App* elec = app.add_subcommand("electricity-table", "American put on the rough spot price");
  add_common(elec);
  elec->add_option("--strikes", c.strikes, "strike list");
  elec->add_option("--alpha", c.alpha, "gamma kernel roughness in (-1/2, 1/2)");
  elec->add_option("--lambda", c.lambda, "gamma kernel decay");
  elec->add_option("--sigma-vol", c.sigma_vol, "stationary log-price volatility");
  elec->add_option("--rate", c.rate, "discount rate");
  elec->add_option("--spot", c.spot, "initial price (X_0 = log spot)");
  CLI::App* lin = app.add_subcommand("linearized", "expected-signature deterministic route");
  add_common(lin);
  lin->add_option("--k", c.k_words, "policy words up to length k");
  lin->add_option("--constraint", c.constraint, "l1 ball radius K");
  lin->add_option("--restarts", c.restarts, "ascent restarts");
  lin->add_option("--m-exp", c.m_exp, "log2 Monte-Carlo samples for the expected signature");
  lin->add_option("--expsig-cache", c.expsig_cache, "binary cache for the expected signature");
  CLI::App* h0cmd = app.add_subcommand("h0", "closed-form H=0 stopping value");
  h0cmd->add_option("--steps", c.steps, "grid steps J");
  h0cmd->add_option("--out", c.out, "CSV output path");
  CLI::App* dimscmd = app.add_subcommand("dims", "signature / log-signature dimension table");
  auto* dims_levels = dimscmd->add_option("--level", c.levels, "levels to print (default 1..6)");
  dimscmd->add_option("--out", c.out, "CSV output path");

  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config_file(c, argv[i + 1]);
      } catch (const CLI::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (c.threads > 0) omp_set_num_threads(c.threads);

  try {
    if (app.got_subcommand(fbm)) return run_fbm_table(c);
    if (app.got_subcommand(elec)) return run_electricity_table(c);
    if (app.got_subcommand(lin)) return run_linearized(c);
    if (app.got_subcommand(h0cmd)) return run_h0(c);
    if (app.got_subcommand(dimscmd)) return run_dims(c, dims_levels->count() > 0);
  } catch (const CLI::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
