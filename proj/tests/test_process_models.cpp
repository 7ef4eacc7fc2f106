#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "sigstop/process_models.hpp"
#include "sigstop/rng.hpp"
#include "sigstop/stopping_engine.hpp"

using namespace sigstop;

TEST_CASE("fbm covariance formula") {
  std::vector<double> times{0.5, 1.0, 2.0};
  Eigen::MatrixXd bm = fbm_covariance(0.5, times);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(bm(i, j) == doctest::Approx(std::min(times[i], times[j])).epsilon(1e-14));

  Eigen::MatrixXd lin = fbm_covariance(1.0, times);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(lin(i, j) == doctest::Approx(times[i] * times[j]).epsilon(1e-14));

  Eigen::MatrixXd rough = fbm_covariance(0.1, {1.0, 2.0});
  CHECK(rough(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rough(0, 1) == doctest::Approx(0.5 * (1.0 + std::pow(2.0, 0.2) - 1.0)).epsilon(1e-14));
  CHECK(rough(0, 1) == doctest::Approx(0.5743491774985175).epsilon(1e-12));

  CHECK_THROWS_AS(fbm_covariance(0.0, times), std::invalid_argument);
  CHECK_THROWS_AS(fbm_covariance(1.2, times), std::invalid_argument);
}

TEST_CASE("fbm sampling moments and determinism") {
  GridSpec grid{1.0, 10, 10};
  const int M = 100000;
  for (double H : {0.3, 0.5, 1.0}) {
    PathBatch b = sample_fbm(H, grid, M, 99);
    // Var(X_T) = T^{2H} within 3 standard errors of the variance estimate
    std::vector<double> xt(M);
    for (int m = 0; m < M; ++m) xt[m] = b.path(m)[10];
    double mean = 0.0, var = 0.0;
    for (double v : xt) mean += v;
    mean /= M;
    for (double v : xt) var += (v - mean) * (v - mean);
    var /= (M - 1);
    const double se = var * std::sqrt(2.0 / M);
    CHECK(std::fabs(var - 1.0) < 3 * se + 1e-9);
  }

  // H = 0.5: non-overlapping increments are uncorrelated
  PathBatch bm = sample_fbm(0.5, grid, M, 7);
  double r = 0.0, v1 = 0.0, v2 = 0.0;
  for (int m = 0; m < M; ++m) {
    const double* p = bm.path(m);
    const double a = p[4] - p[3], c = p[5] - p[4];
    r += a * c;
    v1 += a * a;
    v2 += c * c;
  }
  CHECK(std::fabs(r / std::sqrt(v1 * v2)) < 4.0 / std::sqrt(M));

  PathBatch again = sample_fbm(0.5, grid, 100, 7);
  PathBatch ref = sample_fbm(0.5, grid, 100, 7);
  CHECK(again.x == ref.x);
  CHECK(again.y == ref.y);
  PathBatch other = sample_fbm(0.5, grid, 100, 8);
  CHECK(other.x != ref.x);
}

TEST_CASE("fbm empirical covariance matches the kernel entrywise") {
  GridSpec grid{1.0, 10, 10};
  const int M = 100000;
  const double H = 0.7;
  PathBatch b = sample_fbm(H, grid, M, 1234);
  std::vector<double> times = grid.fine_times();
  times.erase(times.begin());
  Eigen::MatrixXd cov = fbm_covariance(H, times);
  Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(10, 10);
  for (int m = 0; m < M; ++m) {
    Eigen::Map<const Eigen::VectorXd> x(b.path(m) + 1, 10);
    emp.noalias() += x * x.transpose();
  }
  emp /= M;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double se =
          std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / M);
      CHECK(std::fabs(emp(i, j) - cov(i, j)) < 4 * se);
    }
}

TEST_CASE("H0 sampler: scaled covariance structure") {
  GridSpec grid{1.0, 50, 50};
  const int M = 60000;
  PathBatch b = sample_h0(grid, M, 21);
  double sum0 = 0.0;
  for (int m = 0; m < M; ++m) sum0 += std::fabs(b.payoff(m)[0]);
  CHECK(sum0 == 0.0);  // Y_0 = 0 always

  double var10 = 0.0, cov_10_30 = 0.0;
  for (int m = 0; m < M; ++m) {
    const double* y = b.payoff(m);
    var10 += y[10] * y[10];
    cov_10_30 += y[10] * y[30];
  }
  var10 /= M;
  cov_10_30 /= M;
  CHECK(std::fabs(var10 - 1.0) < 0.02);       // Var = 1 (scaled process)
  CHECK(std::fabs(cov_10_30 - 0.5) < 0.02);   // pairwise correlation 1/2

  CHECK_THROWS_AS(sample_h0(GridSpec{1.0, 10, 20}, 10, 1), std::invalid_argument);
}

TEST_CASE("gamma-OU correlation: formula values and monotonicity") {
  // frozen references evaluated with 30-digit arithmetic
  CHECK(gamma_ou_correlation(-0.4, 0.02, 0.0) == 1.0);
  CHECK(gamma_ou_correlation(-0.4, 0.02, 0.01) == doctest::Approx(0.821808513605740247).epsilon(1e-13));
  CHECK(gamma_ou_correlation(-0.4, 0.02, 0.1) == doctest::Approx(0.716412628579003697).epsilon(1e-13));
  CHECK(gamma_ou_correlation(-0.4, 0.02, 1.0) == doctest::Approx(0.54193867110720472).epsilon(1e-13));
  CHECK(gamma_ou_correlation(-0.4, 0.02, 2.5) == doctest::Approx(0.440672078259660842).epsilon(1e-13));

  double prev = 1.0;
  for (double h = 0.05; h < 3.0; h += 0.05) {
    double c = gamma_ou_correlation(-0.4, 0.02, h);
    CHECK(c < prev);
    prev = c;
  }

  std::vector<double> times{0.0, 0.3, 0.9};
  Eigen::MatrixXd cov = gamma_ou_covariance(-0.4, 0.02, 0.2, times);
  CHECK(cov(0, 0) == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(cov(1, 2) == doctest::Approx(0.04 * gamma_ou_correlation(-0.4, 0.02, 0.6)).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_ou_covariance(0.6, 0.02, 0.2, times), std::invalid_argument);
}

TEST_CASE("electricity sampler pins the initial state and the payoff map") {
  CovModel model;
  model.kind = ModelKind::GammaOU;
  model.alpha = -0.4;
  model.lambda = 0.02;
  model.sigma = 0.2;
  model.x0 = std::log(100.0);
  GridSpec grid{1.0, 20, 20};
  PathBatch b = sample_electricity(model, 0.05, 100.0, grid, 5000, 77);
  for (int m = 0; m < 5000; m += 97) CHECK(b.path(m)[0] == doctest::Approx(model.x0).epsilon(1e-15));

  // put payoff at t = 0 with S_0 = 100, K = 120: exactly 20
  PathBatch b2 = sample_electricity(model, 0.05, 120.0, grid, 64, 78);
  for (int m = 0; m < 64; ++m) CHECK(b2.payoff(m)[0] == doctest::Approx(20.0).epsilon(1e-12));

  // deep in the money: payoff stays strictly positive with r = 0
  PathBatch b3 = sample_electricity(model, 0.0, 1e6, grid, 64, 79);
  for (int m = 0; m < 64; ++m)
    for (int j = 0; j <= 20; ++j) CHECK(b3.payoff(m)[j] > 0.0);
}

TEST_CASE("payoff maps and adaptedness") {
  GridSpec grid{1.0, 4, 4};
  PathBatch b;
  b.M = 1;
  b.d = 1;
  b.grid = grid;
  b.x.assign(5, 0.0);
  payoff_identity(b);
  for (double v : b.y) CHECK(v == 0.0);

  // put with S == K vanishes
  for (auto& v : b.x) v = std::log(100.0);
  payoff_put(b, 0.05, 100.0);
  for (double v : b.y) CHECK(v == 0.0);

  // adaptedness: changing the path after t_j leaves y_j untouched
  b.x = {4.0, 4.1, 4.2, 4.3, 4.4};
  payoff_put(b, 0.05, 100.0);
  std::vector<double> y_before = b.y;
  b.x[3] = -5.0;
  b.x[4] = 9.0;
  payoff_put(b, 0.05, 100.0);
  for (int j = 0; j <= 2; ++j) CHECK(b.y[j] == y_before[j]);
}

TEST_CASE("payoff augmentation as an extra component") {
  GridSpec grid{1.0, 3, 3};
  PathBatch b;
  b.M = 2;
  b.d = 1;
  b.grid = grid;
  b.seed = 5;
  b.x = {0.0, 1.0, 2.0, 3.0, 0.0, -1.0, -2.0, -3.0};
  payoff_identity(b);
  PathBatch aug = augment_with_payoff(b);
  CHECK(aug.d == 2);
  for (int m = 0; m < 2; ++m)
    for (int j = 0; j <= 3; ++j) {
      CHECK(aug.path(m)[j * 2 + 0] == b.path(m)[j]);
      CHECK(aug.path(m)[j * 2 + 1] == b.payoff(m)[j]);
    }
}

TEST_CASE("cholesky jitter and the rank-one H=1 kernel") {
  // H = 1 covariance s*t is rank one; the one-shot jitter must rescue it
  GridSpec grid{1.0, 20, 20};
  PathBatch b = sample_fbm(1.0, grid, 2000, 3);
  // every path is (numerically) a straight line t * xi
  for (int m = 0; m < 2000; m += 101) {
    const double* p = b.path(m);
    const double slope = p[20] / 1.0;
    for (int j = 1; j <= 20; ++j)
      CHECK(std::fabs(p[j] - slope * (static_cast<double>(j) / 20)) < 1e-5 * (1.0 + std::fabs(slope)));
  }
}

TEST_CASE("per-path substreams are decorrelated across the batch") {
  // regression: lockstep substreams once made consecutive paths near-copies
  const int M = 40000;
  double lag = 0.0, var = 0.0, mean = 0.0;
  std::vector<double> z(M);
  for (int m = 0; m < M; ++m) {
    SplitMix64 g = SplitMix64::stream(4242, static_cast<std::uint64_t>(m));
    g.normal();  // skip one to probe window overlap
    z[m] = g.normal();
  }
  for (double v : z) mean += v;
  mean /= M;
  for (int m = 0; m < M; ++m) var += (z[m] - mean) * (z[m] - mean);
  var /= M - 1;
  for (int m = 0; m + 1 < M; ++m) lag += (z[m] - mean) * (z[m + 1] - mean);
  lag /= (M - 1) * var;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(M)));
  CHECK(std::fabs(var - 1.0) < 0.03);
  CHECK(std::fabs(lag) < 4.0 / std::sqrt(static_cast<double>(M)));
}

TEST_CASE("batch csv export writes a parseable table") {
  GridSpec grid{1.0, 2, 4};
  PathBatch b = sample_fbm(0.5, grid, 3, 11);
  const char* path = "/tmp/sigstop_test_batch.csv";
  write_batch_csv(path, b, 2);
  std::FILE* f = std::fopen(path, "r");
  REQUIRE(f != nullptr);
  char line[256];
  REQUIRE(std::fgets(line, sizeof line, f));
  CHECK(std::string(line) == "path,t,x0,y\n");
  int rows = 0;
  while (std::fgets(line, sizeof line, f)) ++rows;
  std::fclose(f);
  CHECK(rows == 2 * 5);
  std::remove(path);
}
