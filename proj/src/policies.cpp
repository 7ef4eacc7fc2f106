#include "sigstop/policies.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sigstop/rng.hpp"

namespace sigstop {

using json = nlohmann::json;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

DualPoly LinearPolicy::as_dual() const {
  DualPoly l(width);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) l.add(Word::from_dense_index(width, static_cast<std::size_t>(i)), coeffs[i]);
  return l;
}

LinearPolicy LinearPolicy::zero(int width, int level) {
  LinearPolicy p;
  p.width = width;
  p.level = level;
  p.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(FreeTensor::dense_size(width, level)));
  return p;
}

LinearPolicy make_linear_policy(int width, int level, std::uint64_t seed) {
  LinearPolicy p = LinearPolicy::zero(width, level);
  SplitMix64 g(seed ^ 0x94D049BB133111EBull);
  for (Eigen::Index i = 0; i < p.coeffs.size(); ++i) p.coeffs[i] = 1e-2 * g.uniform_sym();
  return p;
}

DeepPolicy make_deep_policy(int width, int level, int hidden_layers, int neurons,
                            std::uint64_t seed) {
  if (hidden_layers < 1 || neurons < 1)
    throw std::invalid_argument("make_deep_policy: bad architecture");
  const auto [sigma, eta] = dims(width, level);
  (void)sigma;
  DeepPolicy p;
  p.width = width;
  p.level = level;
  const int in = static_cast<int>(eta);
  std::vector<int> sizes{in};
  for (int i = 0; i < hidden_layers; ++i) sizes.push_back(neurons);
  sizes.push_back(1);
  SplitMix64 g(seed ^ 0xD1B54A32D192ED03ull);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l], fan_out = sizes[l + 1];
    Eigen::MatrixXd W(fan_out, fan_in);
    const bool output = (l + 2 == sizes.size());
    const double limit = output ? 1e-2 : std::sqrt(6.0 / fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) W(r, c) = limit * g.uniform_sym();
    p.W.push_back(std::move(W));
    p.b.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  p.norm_mean = Eigen::VectorXd::Zero(in);
  p.norm_std = Eigen::VectorXd::Ones(in);
  return p;
}

std::string policy_kind(const Policy& p) {
  return std::holds_alternative<LinearPolicy>(p) ? "linear" : "deep";
}

int policy_level(const Policy& p) {
  return std::visit([](const auto& q) { return q.level; }, p);
}

FeatureSet deep_features(const PathBatch& batch, int level) {
  const int m = 1 + batch.d;
  const LyndonBasis& basis = lyndon_basis(m, level);
  FeatureSet f;
  f.M = batch.M;
  f.J = batch.grid.J;
  f.dim = static_cast<int>(basis.size());
  f.rows.resize(f.row_count() * f.dim);
  f.y = batch.y;
  const std::vector<double> times = batch.grid.fine_times();
  const int stride = batch.grid.stride();
#pragma omp parallel for schedule(static)
  for (int p = 0; p < batch.M; ++p) {
    std::vector<double> path(batch.path(p), batch.path(p) + times.size() * batch.d);
    SigStream s = stream_signatures(times, path, batch.d, level, stride);
    auto coords = log_signature_coords(s.sigs, basis);
    double* out = f.rows.data() + static_cast<std::size_t>(p) * (f.J + 1) * f.dim;
    for (int j = 0; j <= f.J; ++j)
      std::copy(coords[j].begin(), coords[j].end(), out + static_cast<std::size_t>(j) * f.dim);
  }
  return f;
}

FeatureSet linear_features(const PathBatch& batch, int level) {
  const int m = 1 + batch.d;
  FeatureSet f;
  f.M = batch.M;
  f.J = batch.grid.J;
  f.dim = static_cast<int>(FreeTensor::dense_size(m, level));
  f.rows.resize(f.row_count() * f.dim);
  f.y = batch.y;
  const std::vector<double> times = batch.grid.fine_times();
  const int stride = batch.grid.stride();
#pragma omp parallel for schedule(static)
  for (int p = 0; p < batch.M; ++p) {
    std::vector<double> path(batch.path(p), batch.path(p) + times.size() * batch.d);
    SigStream s = stream_signatures(times, path, batch.d, level, stride);
    double* out = f.rows.data() + static_cast<std::size_t>(p) * (f.J + 1) * f.dim;
    for (int j = 0; j <= f.J; ++j)
      std::copy(s.sigs[j].data().begin(), s.sigs[j].data().end(),
                out + static_cast<std::size_t>(j) * f.dim);
  }
  return f;
}

void fit_normalization(const FeatureSet& f, Eigen::VectorXd& mean, Eigen::VectorXd& std) {
  Eigen::Map<const RowMat> X(f.rows.data(), static_cast<Eigen::Index>(f.row_count()), f.dim);
  mean = X.colwise().mean();
  Eigen::VectorXd var =
      ((X.rowwise() - mean.transpose()).array().square().colwise().sum() /
       static_cast<double>(X.rows() > 1 ? X.rows() - 1 : 1))
          .matrix();
  std = var.array().sqrt().max(1e-12).matrix();
}

std::vector<double> eval_linear(const LinearPolicy& p, const SigStream& s) {
  if (p.level > s.level) throw std::domain_error("eval_linear: policy degree exceeds stream level");
  std::vector<double> theta(s.sigs.size());
  for (std::size_t j = 0; j < s.sigs.size(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.coeffs.size(); ++i) acc += p.coeffs[i] * s.sigs[j][i];
    theta[j] = acc;
  }
  return theta;
}

static Eigen::VectorXd mlp_forward(const DeepPolicy& p, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  Eigen::MatrixXd h = (X.rowwise() - p.norm_mean.transpose()).array().rowwise() /
                      p.norm_std.transpose().array();
  const std::size_t L = p.W.size();
  for (std::size_t l = 0; l + 1 < L; ++l)
    h = ((h * p.W[l].transpose()).rowwise() + p.b[l].transpose()).cwiseMax(0.0);
  return (h * p.W[L - 1].transpose()).rowwise() + p.b[L - 1].transpose();
}

std::vector<double> eval_deep(const DeepPolicy& p,
                              const std::vector<std::vector<double>>& logsig_coords) {
  const int dim = p.input_dim();
  Eigen::MatrixXd X(static_cast<Eigen::Index>(logsig_coords.size()), dim);
  for (std::size_t j = 0; j < logsig_coords.size(); ++j) {
    if (static_cast<int>(logsig_coords[j].size()) != dim)
      throw std::invalid_argument("eval_deep: coordinate dimension mismatch");
    for (int k = 0; k < dim; ++k) X(static_cast<Eigen::Index>(j), k) = logsig_coords[j][k];
  }
  Eigen::VectorXd th = mlp_forward(p, X);
  return std::vector<double>(th.data(), th.data() + th.size());
}

Eigen::VectorXd policy_forward(const Policy& p, const double* rows, std::size_t count, int dim) {
  const auto* lin = std::get_if<LinearPolicy>(&p);
  const auto* dp = std::get_if<DeepPolicy>(&p);
  if ((lin && lin->coeffs.size() != dim) || (dp && dp->input_dim() != dim))
    throw std::invalid_argument("policy_forward: feature dim mismatch");
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  const std::size_t blk = 8192;
  const std::size_t nblocks = (count + blk - 1) / blk;
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t start = static_cast<std::size_t>(b) * blk;
    const Eigen::Index n = static_cast<Eigen::Index>(std::min(blk, count - start));
    Eigen::Map<const RowMat> X(rows + start * dim, n, dim);
    if (lin) {
      out.segment(static_cast<Eigen::Index>(start), n).noalias() = X * lin->coeffs;
      continue;
    }
    RowMat h = (X.rowwise() - dp->norm_mean.transpose()).array().rowwise() /
               dp->norm_std.transpose().array();
    const std::size_t L = dp->W.size();
    for (std::size_t l = 0; l + 1 < L; ++l)
      h = ((h * dp->W[l].transpose()).rowwise() + dp->b[l].transpose()).cwiseMax(0.0);
    out.segment(static_cast<Eigen::Index>(start), n).noalias() =
        h * dp->W[L - 1].transpose().col(0);
    out.segment(static_cast<Eigen::Index>(start), n).array() += dp->b[L - 1][0];
  }
  return out;
}

Eigen::VectorXd pack_params(const Policy& p) {
  if (const auto* lin = std::get_if<LinearPolicy>(&p)) return lin->coeffs;
  const auto& dp = std::get<DeepPolicy>(p);
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < dp.W.size(); ++l) n += dp.W[l].size() + dp.b[l].size();
  Eigen::VectorXd flat(n);
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < dp.W.size(); ++l) {
    flat.segment(at, dp.W[l].size()) = Eigen::Map<const Eigen::VectorXd>(dp.W[l].data(), dp.W[l].size());
    at += dp.W[l].size();
    flat.segment(at, dp.b[l].size()) = dp.b[l];
    at += dp.b[l].size();
  }
  return flat;
}

void unpack_params(Policy& p, const Eigen::VectorXd& flat) {
  if (auto* lin = std::get_if<LinearPolicy>(&p)) {
    if (flat.size() != lin->coeffs.size()) throw std::invalid_argument("unpack_params: size");
    lin->coeffs = flat;
    return;
  }
  auto& dp = std::get<DeepPolicy>(p);
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < dp.W.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(dp.W[l].data(), dp.W[l].size()) = flat.segment(at, dp.W[l].size());
    at += dp.W[l].size();
    dp.b[l] = flat.segment(at, dp.b[l].size());
    at += dp.b[l].size();
  }
  if (at != flat.size()) throw std::invalid_argument("unpack_params: size");
}


namespace {

// Number of whole paths per work block; keeps the block activations resident
// in cache (the full-minibatch GEMMs are memory-bound on small machines).
int block_paths(int cols) { return std::max(1, 8192 / cols); }

// Upstream loss derivative in theta for the paths of one block; overwrites
// theta-cumulative scratch in place (see theta_upstream for the math).
void block_upstream(const FeatureSet& f, const int* paths, int npaths,
                    const double* theta, const ZDistribution& z, double inv_b,
                    double* dtheta, double* value_out) {
  const int J = f.J, cols = J + 1;
  for (int i = 0; i < npaths; ++i) {
    const double* y = f.y.data() + static_cast<std::size_t>(paths[i]) * cols;
    const double* th = theta + static_cast<std::size_t>(i) * cols;
    double* dth = dtheta + static_cast<std::size_t>(i) * cols;
    double acc = 0.0, value = y[0];
    for (int j = 0; j < J; ++j) {
      acc += th[j] * th[j];
      value += z.survival(acc) * (y[j + 1] - y[j]);
      dth[j] = acc;
    }
    value_out[i] = value;
    double suffix = 0.0;
    dth[J] = 0.0;
    for (int j = J - 1; j >= 0; --j) {
      suffix += z.survival_deriv(dth[j]) * (y[j + 1] - y[j]);
      dth[j] = -2.0 * th[j] * suffix * inv_b;
    }
  }
}

}  // namespace

std::pair<double, Eigen::VectorXd> loss_and_gradient(const Policy& p, const FeatureSet& f,
                                                     const std::vector<int>& paths,
                                                     const ZDistribution& z) {
  const int cols = f.J + 1;
  const int B = static_cast<int>(paths.size());
  const double inv_b = 1.0 / static_cast<double>(B);
  const int blk = block_paths(cols);
  const int nblocks = (B + blk - 1) / blk;
  Eigen::Map<const RowMat> all(f.rows.data(), static_cast<Eigen::Index>(f.row_count()), f.dim);
  std::vector<double> per_path(B);

  const auto* lin = std::get_if<LinearPolicy>(&p);
  const auto* dp = std::get_if<DeepPolicy>(&p);
  if (lin && lin->coeffs.size() != f.dim)
    throw std::invalid_argument("loss_and_gradient: feature dim mismatch");
  if (dp && dp->input_dim() != f.dim)
    throw std::invalid_argument("loss_and_gradient: feature dim mismatch");
  const std::size_t L = dp ? dp->W.size() : 0;

  int nthreads = 1;
#pragma omp parallel
  {
#pragma omp single
    nthreads = omp_get_num_threads();
  }
  // per-thread gradient partials, reduced in thread order afterwards
  std::vector<Eigen::VectorXd> partial(nthreads);

#pragma omp parallel num_threads(nthreads)
  {
    const int tid = omp_get_thread_num();
    Eigen::VectorXd& grad = partial[tid];
    grad = Eigen::VectorXd::Zero(pack_params(p).size());
    RowMat X(static_cast<Eigen::Index>(blk) * cols, f.dim);
    std::vector<RowMat> acts(L);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(blk) * cols);
    Eigen::VectorXd dtheta(theta.size());

#pragma omp for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      const int start = b * blk;
      const int npaths = std::min(blk, B - start);
      const Eigen::Index rows = static_cast<Eigen::Index>(npaths) * cols;
      for (int i = 0; i < npaths; ++i)
        X.middleRows(static_cast<Eigen::Index>(i) * cols, cols) =
            all.middleRows(static_cast<Eigen::Index>(paths[start + i]) * cols, cols);

      if (lin) {
        theta.head(rows).noalias() = X.topRows(rows) * lin->coeffs;
        block_upstream(f, paths.data() + start, npaths, theta.data(), z, inv_b, dtheta.data(),
                       per_path.data() + start);
        grad.noalias() += X.topRows(rows).transpose() * dtheta.head(rows);
        continue;
      }

      // forward
      acts[0] = (X.topRows(rows).rowwise() - dp->norm_mean.transpose()).array().rowwise() /
                dp->norm_std.transpose().array();
      for (std::size_t l = 0; l + 1 < L; ++l)
        acts[l + 1] =
            ((acts[l] * dp->W[l].transpose()).rowwise() + dp->b[l].transpose()).cwiseMax(0.0);
      theta.head(rows).noalias() = acts[L - 1] * dp->W[L - 1].transpose().col(0);
      theta.head(rows).array() += dp->b[L - 1][0];

      block_upstream(f, paths.data() + start, npaths, theta.data(), z, inv_b, dtheta.data(),
                     per_path.data() + start);

      // backward, accumulating into the flat per-thread gradient
      RowMat delta = dtheta.head(rows);
      Eigen::Index at = grad.size();
      for (std::size_t l = L; l-- > 0;) {
        at -= dp->W[l].size() + dp->b[l].size();
        Eigen::Map<Eigen::MatrixXd> gW(grad.data() + at, dp->W[l].rows(), dp->W[l].cols());
        Eigen::Map<Eigen::VectorXd> gb(grad.data() + at + dp->W[l].size(), dp->b[l].size());
        gW.noalias() += delta.transpose() * acts[l];
        gb.noalias() += delta.colwise().sum().transpose();
        if (l > 0) {
          RowMat next = delta * dp->W[l];
          next.array() *= (acts[l].array() > 0.0).cast<double>();
          delta = std::move(next);
        }
      }
    }
  }

  Eigen::VectorXd grad = partial[0];
  for (int t = 1; t < nthreads; ++t) grad += partial[t];
  const double loss =
      -pairwise_sum(per_path.data(), per_path.size()) / static_cast<double>(per_path.size());
  if (!std::isfinite(loss)) throw std::runtime_error("loss_and_gradient: non-finite loss");
  return {loss, grad};
}

void TrainConfig::validate() const {
  if (lr <= 0 || beta1 <= 0 || beta1 >= 1 || beta2 <= 0 || beta2 >= 1 || eps <= 0 ||
      batch_size < 1 || max_epochs < 0)
    throw std::invalid_argument("TrainConfig: bad hyperparameters");
}

TrainResult train(const Policy& init, const FeatureSet& data, const ZDistribution& z,
                  const TrainConfig& cfg) {
  cfg.validate();
  TrainResult res;
  res.policy = init;
  Eigen::VectorXd w = pack_params(res.policy);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(w.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(w.size());
  Eigen::VectorXd best_w = w;
  double best_loss = std::numeric_limits<double>::infinity();

  std::vector<int> order(data.M);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffler(cfg.seed);

  long long step = 0;
  int stale = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffler);
    double epoch_loss = 0.0;
    int n_batches = 0;
    for (int start = 0; start < data.M; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, data.M - start);
      std::vector<int> batch(order.begin() + start, order.begin() + start + count);
      auto [loss, grad] = loss_and_gradient(res.policy, data, batch, z);
      ++step;
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
      v = (cfg.beta2 * v.array() + (1.0 - cfg.beta2) * grad.array().square()).matrix();
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      w.array() -= cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
      unpack_params(res.policy, w);
      epoch_loss += loss;
      ++n_batches;
    }
    epoch_loss /= std::max(n_batches, 1);
    res.epoch_loss.push_back(epoch_loss);
    if (epoch_loss < best_loss - cfg.plateau_tol) {
      stale = 0;
    } else {
      ++stale;
    }
    if (epoch_loss < best_loss) {
      best_loss = epoch_loss;
      best_w = w;
    }
    if (stale >= cfg.plateau_epochs) break;
  }
  if (cfg.max_epochs > 0 && !res.epoch_loss.empty()) unpack_params(res.policy, best_w);
  res.best_loss = best_loss;
  return res;
}

bool LowerBound::crosscheck_ok(double n_se) const {
  const double tol = n_se * std::sqrt(smoothed.std_error * smoothed.std_error +
                                      sampled.std_error * sampled.std_error);
  return std::fabs(smoothed.value - sampled.value) <= tol;
}

LowerBound lower_bound(const PathBatch& fresh, const Policy& p, const ZDistribution& z,
                       int chunk) {
  const std::uint64_t train_seed = std::visit([](const auto& q) { return q.train_seed; }, p);
  if (train_seed != 0 && fresh.seed == train_seed)
    throw std::invalid_argument("lower_bound: evaluation batch reuses the training seed");

  const int J = fresh.grid.J;
  const int cols = J + 1;
  const int level = policy_level(p);
  const bool deep = std::holds_alternative<DeepPolicy>(p);
  std::vector<double> smoothed_vals(fresh.M), stopped_vals(fresh.M);
  const std::uint64_t z_seed = fresh.seed ^ 0xA3C59AC2B7F0E81Dull;

  for (int start = 0; start < fresh.M; start += chunk) {
    const int count = std::min(chunk, fresh.M - start);
    PathBatch view;  // shallow chunk copy
    view.M = count;
    view.d = fresh.d;
    view.grid = fresh.grid;
    view.seed = fresh.seed;
    const std::size_t xrow = static_cast<std::size_t>(fresh.grid.J_fine + 1) * fresh.d;
    view.x.assign(fresh.x.begin() + start * xrow, fresh.x.begin() + (start + count) * xrow);
    view.y.assign(fresh.y.begin() + static_cast<std::size_t>(start) * cols,
                  fresh.y.begin() + static_cast<std::size_t>(start + count) * cols);
    FeatureSet f = deep ? deep_features(view, level) : linear_features(view, level);
    Eigen::VectorXd theta = policy_forward(p, f.rows.data(), f.row_count(), f.dim);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i) {
      const double* y = f.y.data() + static_cast<std::size_t>(i) * cols;
      const double* th = theta.data() + static_cast<std::size_t>(i) * cols;
      double acc = 0.0, val = y[0];
      SplitMix64 g = SplitMix64::stream(z_seed, static_cast<std::uint64_t>(start + i));
      const double zdraw = z.quantile(g.uniform());
      int stop = J;
      bool crossed = false;
      for (int j = 0; j <= J; ++j) {
        acc += th[j] * th[j];
        if (j < J) val += z.survival(acc) * (y[j + 1] - y[j]);
        if (!crossed && acc >= zdraw) { stop = j; crossed = true; }
      }
      smoothed_vals[start + i] = val;
      stopped_vals[start + i] = y[stop];
    }
  }

  LowerBound lb;
  auto [ms, ses] = mean_and_se(smoothed_vals);
  lb.smoothed = {ms, ses, static_cast<std::size_t>(fresh.M), std::nullopt};
  auto [mp, sep] = mean_and_se(stopped_vals);
  lb.sampled = {mp, sep, static_cast<std::size_t>(fresh.M), std::nullopt};
  return lb;
}

namespace {

json policy_header(const Policy& p) {
  json h;
  h["kind"] = policy_kind(p);
  if (const auto* lin = std::get_if<LinearPolicy>(&p)) {
    h["width"] = lin->width;
    h["level"] = lin->level;
    h["train_seed"] = lin->train_seed;
  } else {
    const auto& dp = std::get<DeepPolicy>(p);
    h["width"] = dp.width;
    h["level"] = dp.level;
    h["train_seed"] = dp.train_seed;
    json arch = json::array();
    for (std::size_t l = 0; l < dp.W.size(); ++l)
      arch.push_back({{"rows", dp.W[l].rows()}, {"cols", dp.W[l].cols()}});
    h["layers"] = arch;
    h["norm_mean"] = std::vector<double>(dp.norm_mean.data(), dp.norm_mean.data() + dp.norm_mean.size());
    h["norm_std"] = std::vector<double>(dp.norm_std.data(), dp.norm_std.data() + dp.norm_std.size());
  }
  return h;
}

}  // namespace

void save_policy(const std::string& filename, const Policy& p) {
  std::ofstream os(filename);
  if (!os) throw std::runtime_error("save_policy: cannot open " + filename);
  os << policy_header(p).dump() << "\n";
  Eigen::VectorXd w = pack_params(p);
  os.precision(17);
  for (Eigen::Index i = 0; i < w.size(); ++i) os << w[i] << "\n";
}

Policy load_policy(const std::string& filename) {
  std::ifstream is(filename);
  if (!is) throw std::runtime_error("load_policy: cannot open " + filename);
  std::string line;
  std::getline(is, line);
  json h = json::parse(line);
  Policy p;
  if (h.at("kind") == "linear") {
    LinearPolicy lin = LinearPolicy::zero(h.at("width"), h.at("level"));
    lin.train_seed = h.at("train_seed");
    p = lin;
  } else {
    DeepPolicy dp;
    dp.width = h.at("width");
    dp.level = h.at("level");
    dp.train_seed = h.at("train_seed");
    for (const auto& l : h.at("layers")) {
      dp.W.emplace_back(Eigen::MatrixXd::Zero(l.at("rows"), l.at("cols")));
      dp.b.emplace_back(Eigen::VectorXd::Zero(l.at("rows")));
    }
    std::vector<double> nm = h.at("norm_mean"), ns = h.at("norm_std");
    dp.norm_mean = Eigen::Map<Eigen::VectorXd>(nm.data(), static_cast<Eigen::Index>(nm.size()));
    dp.norm_std = Eigen::Map<Eigen::VectorXd>(ns.data(), static_cast<Eigen::Index>(ns.size()));
    p = dp;
  }
  Eigen::VectorXd w = pack_params(p);
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!(is >> w[i])) throw std::runtime_error("load_policy: truncated weights");
  unpack_params(p, w);
  return p;
}

}  // namespace sigstop
