#include "sigstop/process_models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sigstop/rng.hpp"

namespace sigstop {

std::vector<double> GridSpec::payoff_times() const {
  std::vector<double> t(J + 1);
  for (int j = 0; j <= J; ++j) t[j] = T * j / J;
  return t;
}

std::vector<double> GridSpec::fine_times() const {
  std::vector<double> t(J_fine + 1);
  for (int j = 0; j <= J_fine; ++j) t[j] = T * j / J_fine;
  return t;
}

void GridSpec::validate() const {
  if (T <= 0.0 || J < 1 || J_fine < J || J_fine % J != 0)
    throw std::invalid_argument("GridSpec: need T > 0, J >= 1, J_fine a multiple of J");
}

void CovModel::validate() const {
  switch (kind) {
    case ModelKind::FBM:
      if (!(H > 0.0 && H <= 1.0)) throw std::invalid_argument("CovModel: H must be in (0, 1]");
      break;
    case ModelKind::GammaOU:
      if (!(alpha > -0.5 && alpha < 0.5)) throw std::invalid_argument("CovModel: alpha must be in (-1/2, 1/2)");
      if (!(lambda > 0.0 && sigma > 0.0)) throw std::invalid_argument("CovModel: lambda, sigma must be > 0");
      break;
    default:
      break;
  }
}

std::string CovModel::str() const {
  std::ostringstream os;
  switch (kind) {
    case ModelKind::BM: os << "bm"; break;
    case ModelKind::FBM: os << "fbm(H=" << H << ")"; break;
    case ModelKind::H0: os << "h0"; break;
    case ModelKind::GammaOU:
      os << "gamma-ou(alpha=" << alpha << ",lambda=" << lambda << ",sigma=" << sigma
         << ",x0=" << x0 << ")";
      break;
  }
  return os.str();
}

Eigen::MatrixXd fbm_covariance(double H, const std::vector<double>& times) {
  if (!(H > 0.0 && H <= 1.0)) throw std::invalid_argument("fbm_covariance: H must be in (0, 1]");
  const int n = static_cast<int>(times.size());
  Eigen::MatrixXd cov(n, n);
  const double twoH = 2.0 * H;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double s = times[i], t = times[j];
      const double v = 0.5 * (std::pow(s, twoH) + std::pow(t, twoH) -
                              std::pow(std::fabs(s - t), twoH));
      cov(i, j) = cov(j, i) = v;
    }
  return cov;
}

double gamma_ou_correlation(double alpha, double lambda, double h) {
  if (h == 0.0) return 1.0;
  const double nu = alpha + 0.5;
  const double x = lambda * h;
  return std::pow(2.0, -alpha + 0.5) / std::tgamma(nu) * std::pow(x, nu) *
         std::exp(-x) * std::cyl_bessel_k(nu, x);
}

Eigen::MatrixXd gamma_ou_covariance(double alpha, double lambda, double sigma,
                                    const std::vector<double>& times) {
  if (!(alpha > -0.5 && alpha < 0.5)) throw std::invalid_argument("gamma_ou_covariance: bad alpha");
  if (!(lambda > 0.0)) throw std::invalid_argument("gamma_ou_covariance: bad lambda");
  const int n = static_cast<int>(times.size());
  Eigen::MatrixXd cov(n, n);
  const double s2 = sigma * sigma;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double c = s2 * gamma_ou_correlation(alpha, lambda, std::fabs(times[i] - times[j]));
      if (!std::isfinite(c)) throw std::runtime_error("gamma_ou_covariance: non-finite Bessel value");
      cov(i, j) = cov(j, i) = c;
    }
  return cov;
}

Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const double jitter = 1e-12 * cov.diagonal().maxCoeff();
  cov.diagonal().array() += jitter;
  llt.compute(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("cholesky_with_jitter: factorization failed after jitter");
  return llt.matrixL();
}

namespace {

// Fills x (M x n_normals, row-major) with standard normals from per-path
// substreams; deterministic for any thread count.
void fill_normals(std::vector<double>& z, int M, int n, std::uint64_t seed) {
  z.resize(static_cast<std::size_t>(M) * n);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(m));
    double* row = z.data() + static_cast<std::size_t>(m) * n;
    for (int i = 0; i < n; ++i) row[i] = g.normal();
  }
}

// X = Z L^T in chunks (each path row: correlated Gaussian vector).
void apply_factor(std::vector<double>& x, const std::vector<double>& z, int M,
                  const Eigen::MatrixXd& L) {
  const int n = static_cast<int>(L.rows());
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> Z(z.data(), M, n);
  Eigen::Map<RowMat> X(x.data(), M, n);
  const int chunk = 8192;
  for (int start = 0; start < M; start += chunk) {
    const int rows = std::min(chunk, M - start);
    X.middleRows(start, rows).noalias() = Z.middleRows(start, rows) * L.transpose();
  }
}

}  // namespace

PathBatch sample_fbm(double H, const GridSpec& grid, int M, std::uint64_t seed) {
  grid.validate();
  PathBatch b;
  b.M = M;
  b.d = 1;
  b.grid = grid;
  b.seed = seed;
  const int nf = grid.J_fine;  // sampled points t_1..t_Jfine (X_0 = 0 fixed)
  std::vector<double> times = grid.fine_times();
  times.erase(times.begin());
  const Eigen::MatrixXd L = cholesky_with_jitter(fbm_covariance(H, times));

  std::vector<double> z;
  fill_normals(z, M, nf, seed);
  std::vector<double> corr(static_cast<std::size_t>(M) * nf);
  apply_factor(corr, z, M, L);

  b.x.assign(static_cast<std::size_t>(M) * (nf + 1), 0.0);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    double* row = b.x.data() + static_cast<std::size_t>(m) * (nf + 1);
    const double* c = corr.data() + static_cast<std::size_t>(m) * nf;
    row[0] = 0.0;
    for (int j = 0; j < nf; ++j) row[j + 1] = c[j];
  }
  payoff_identity(b);
  return b;
}

PathBatch sample_h0(const GridSpec& grid, int M, std::uint64_t seed) {
  grid.validate();
  if (grid.J_fine != grid.J)
    throw std::invalid_argument("sample_h0: the H=0 process has no finer structure; use J_fine == J");
  PathBatch b;
  b.M = M;
  b.d = 1;
  b.grid = grid;
  b.seed = seed;
  const int J = grid.J;
  b.x.resize(static_cast<std::size_t>(M) * (J + 1));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(m));
    double* row = b.x.data() + static_cast<std::size_t>(m) * (J + 1);
    const double xi0 = g.normal();
    row[0] = 0.0;
    for (int j = 1; j <= J; ++j) row[j] = (g.normal() - xi0) * inv_sqrt2;
  }
  payoff_identity(b);
  return b;
}

PathBatch sample_electricity(const CovModel& model, double r, double strike,
                             const GridSpec& grid, int M, std::uint64_t seed) {
  model.validate();
  grid.validate();
  if (model.kind != ModelKind::GammaOU)
    throw std::invalid_argument("sample_electricity: needs a GammaOU model");
  PathBatch b;
  b.M = M;
  b.d = 1;
  b.grid = grid;
  b.seed = seed;
  const int n = grid.J_fine + 1;  // includes t_0; first noise coordinate zeroed
  const Eigen::MatrixXd L =
      cholesky_with_jitter(gamma_ou_covariance(model.alpha, model.lambda, model.sigma,
                                               grid.fine_times()));
  std::vector<double> z;
  fill_normals(z, M, n, seed);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) z[static_cast<std::size_t>(m) * n] = 0.0;

  b.x.resize(static_cast<std::size_t>(M) * n);
  apply_factor(b.x, z, M, L);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    double* row = b.x.data() + static_cast<std::size_t>(m) * n;
    for (int j = 0; j < n; ++j) row[j] += model.x0;
  }
  payoff_put(b, r, strike);
  return b;
}

void payoff_identity(PathBatch& batch) {
  const int J = batch.grid.J, stride = batch.grid.stride();
  if (batch.d != 1) throw std::invalid_argument("payoff_identity: needs d == 1");
  batch.y.resize(static_cast<std::size_t>(batch.M) * (J + 1));
#pragma omp parallel for schedule(static)
  for (int m = 0; m < batch.M; ++m) {
    const double* p = batch.path(m);
    double* y = batch.payoff(m);
    for (int j = 0; j <= J; ++j) y[j] = p[static_cast<std::size_t>(j) * stride];
  }
}

void payoff_put(PathBatch& batch, double r, double strike) {
  const int J = batch.grid.J, stride = batch.grid.stride();
  if (batch.d != 1) throw std::invalid_argument("payoff_put: needs d == 1");
  batch.y.resize(static_cast<std::size_t>(batch.M) * (J + 1));
  const std::vector<double> t = batch.grid.payoff_times();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < batch.M; ++m) {
    const double* p = batch.path(m);
    double* y = batch.payoff(m);
    for (int j = 0; j <= J; ++j) {
      const double spot = std::exp(p[static_cast<std::size_t>(j) * stride]);
      y[j] = std::exp(-r * t[j]) * std::max(strike - spot, 0.0);
    }
  }
}

PathBatch augment_with_payoff(const PathBatch& batch) {
  if (batch.grid.J_fine != batch.grid.J)
    throw std::invalid_argument("augment_with_payoff: payoff lives on the payoff grid only");
  PathBatch out;
  out.M = batch.M;
  out.d = batch.d + 1;
  out.grid = batch.grid;
  out.seed = batch.seed;
  out.y = batch.y;
  const int n = batch.grid.J + 1;
  out.x.resize(static_cast<std::size_t>(batch.M) * n * out.d);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < batch.M; ++m) {
    const double* px = batch.path(m);
    const double* py = batch.payoff(m);
    double* o = out.x.data() + static_cast<std::size_t>(m) * n * out.d;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < batch.d; ++k) o[j * out.d + k] = px[j * batch.d + k];
      o[j * out.d + batch.d] = py[j];
    }
  }
  return out;
}

void write_batch_csv(const std::string& filename, const PathBatch& batch, int max_paths) {
  std::ofstream os(filename);
  if (!os) throw std::runtime_error("write_batch_csv: cannot open " + filename);
  os << "path,t";
  for (int k = 0; k < batch.d; ++k) os << ",x" << k;
  os << ",y\n";
  os.precision(17);
  const std::vector<double> tf = batch.grid.fine_times();
  const int stride = batch.grid.stride();
  const int mmax = max_paths < 0 ? batch.M : std::min(max_paths, batch.M);
  for (int m = 0; m < mmax; ++m) {
    const double* p = batch.path(m);
    const double* y = batch.payoff(m);
    for (std::size_t j = 0; j < tf.size(); ++j) {
      os << m << "," << tf[j];
      for (int k = 0; k < batch.d; ++k) os << "," << p[j * batch.d + k];
      if (j % stride == 0) os << "," << y[j / stride];
      else os << ",";
      os << "\n";
    }
  }
}

}  // namespace sigstop
