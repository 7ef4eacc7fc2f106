#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sigstop {

// Equidistant payoff grid t_j = T j / J with a refinement for path simulation.
struct GridSpec {
  double T = 1.0;
  int J = 100;
  int J_fine = 100;  // multiple of J

  std::vector<double> payoff_times() const;
  std::vector<double> fine_times() const;
  int stride() const { return J_fine / J; }
  void validate() const;
};

// M sampled trajectories of (time, X, Y) plus RNG provenance.  x is row-major
// M x (J_fine + 1) x d; y is M x (J + 1).
struct PathBatch {
  int M = 0;
  int d = 1;
  GridSpec grid;
  std::uint64_t seed = 0;
  std::vector<double> x;
  std::vector<double> y;

  const double* path(int m) const { return x.data() + static_cast<std::size_t>(m) * (grid.J_fine + 1) * d; }
  const double* payoff(int m) const { return y.data() + static_cast<std::size_t>(m) * (grid.J + 1); }
  double* payoff(int m) { return y.data() + static_cast<std::size_t>(m) * (grid.J + 1); }
};

enum class ModelKind { BM, FBM, H0, GammaOU };

struct CovModel {
  ModelKind kind = ModelKind::FBM;
  double H = 0.5;          // FBM: Hurst in (0, 1]
  double alpha = -0.4;     // GammaOU: in (-1/2, 1/2)
  double lambda = 0.02;    // GammaOU: > 0
  double sigma = 0.2;      // GammaOU: > 0
  double x0 = 0.0;         // GammaOU: initial log-price
  void validate() const;
  std::string str() const;
};

// fBm covariance 0.5 (s^{2H} + t^{2H} - |t-s|^{2H}) on the given times.
Eigen::MatrixXd fbm_covariance(double H, const std::vector<double>& times);

// Stationary gamma-kernel covariance sigma^2 Corr(|t_i - t_j|) with
// Corr(h) = 2^{-alpha+1/2} / Gamma(alpha+1/2) (lambda h)^{alpha+1/2}
//           * e^{-lambda h} K_{alpha+1/2}(lambda h).
Eigen::MatrixXd gamma_ou_covariance(double alpha, double lambda, double sigma,
                                    const std::vector<double>& times);
double gamma_ou_correlation(double alpha, double lambda, double h);

// Cholesky with the one-shot jitter policy (1e-12 * max diagonal, once).
Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd cov);

// Exact Gaussian sampling of fBm on the fine grid via Cholesky; X_0 = 0,
// payoff = the process itself on the payoff grid (H = 0.5 gives BM).
PathBatch sample_fbm(double H, const GridSpec& grid, int M, std::uint64_t seed);

// H = 0 limit process: Y_j = (xi_j - xi_0)/sqrt(2) from J+1 iid standard
// normals (Var 1, pairwise corr 1/2); path == payoff, Y_0 = 0.
PathBatch sample_h0(const GridSpec& grid, int M, std::uint64_t seed);

// Stationary log-price paths with X_0 = x0 exactly on every path (first
// standard-normal input zeroed), payoff e^{-r t_j} (K - exp(X_{t_j}))_+.
PathBatch sample_electricity(const CovModel& model, double r, double strike,
                             const GridSpec& grid, int M, std::uint64_t seed);

// Payoff maps (adapted per grid point).
void payoff_identity(PathBatch& batch);
void payoff_put(PathBatch& batch, double r, double strike);

// Appends the payoff as an extra path component (t, X, Y), for stopping
// problems whose reward is not polynomial in X.
PathBatch augment_with_payoff(const PathBatch& batch);

// CSV export, columns t, X..., Y (one block per path).
void write_batch_csv(const std::string& filename, const PathBatch& batch, int max_paths = -1);

}  // namespace sigstop
