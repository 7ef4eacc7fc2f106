#include <doctest.h>

#include <cmath>

#include "sigstop/linearized_solver.hpp"
#include "sigstop/rng.hpp"
#include "sigstop/signature_stream.hpp"
#include "sigstop/stopping_engine.hpp"

using namespace sigstop;

TEST_CASE("expected signature of a deterministic batch is its signature") {
  GridSpec grid{1.0, 8, 8};
  PathBatch b;
  b.M = 3;
  b.d = 1;
  b.grid = grid;
  std::vector<double> path(9);
  for (int j = 0; j <= 8; ++j) path[j] = 0.3 * j / 8.0 * (1.0 - 0.5 * j / 8.0);
  for (int m = 0; m < 3; ++m) b.x.insert(b.x.end(), path.begin(), path.end());
  payoff_identity(b);

  ExpectedSig e = expected_signature(b, 3);
  FreeTensor sig = stream_signatures(grid.fine_times(), path, 1, 3, 8).sigs.back();
  for (std::size_t i = 0; i < sig.size(); ++i) {
    CHECK(e.tensor[i] == doctest::Approx(sig[i]).epsilon(1e-14));
    CHECK(e.std_errors[static_cast<Eigen::Index>(i)] < 1e-14);
  }
  CHECK(e.tensor[0] == 1.0);

  PathBatch empty;
  empty.grid = grid;
  CHECK_THROWS_AS(expected_signature(empty, 2), std::invalid_argument);
}

TEST_CASE("Brownian expected signature: Fawcett values and exact time words") {
  GridSpec grid{1.0, 40, 40};
  PathBatch b = sample_fbm(0.5, grid, 30000, 401);
  ExpectedSig e = expected_signature(b, 3);

  const double v22 = e.tensor.coeff(Word{2, 2});
  const double se22 = e.std_errors[static_cast<Eigen::Index>(Word{2, 2}.dense_index(2))];
  CHECK(std::fabs(v22 - 0.5) < 3 * se22);
  const double v2 = e.tensor.coeff(Word{2});
  const double se2 = e.std_errors[static_cast<Eigen::Index>(Word{2}.dense_index(2))];
  CHECK(std::fabs(v2) < 3 * se2);

  // time words are exact for every path: T^k / k!
  CHECK(e.tensor.coeff(Word{1}) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.tensor.coeff(Word{1, 1}) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(e.tensor.coeff(Word{1, 1, 1}) == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(e.std_errors[static_cast<Eigen::Index>(Word{1, 1}.dense_index(2))] < 1e-13);
}

TEST_CASE("martingale pairings <w 12, E> vanish within Monte-Carlo error") {
  GridSpec grid{1.0, 200, 200};
  PathBatch b = sample_fbm(0.5, grid, 4096, 403);
  const int N = 4;
  ExpectedSig e = expected_signature(b, N);
  for (std::size_t i = 0; i < Word::level_offset(2, N - 1); ++i) {
    Word w = Word::from_dense_index(2, i);
    Word w12 = w.appended(1).appended(2);
    double v = e.tensor.coeff(w12);
    double se = e.std_errors[static_cast<Eigen::Index>(w12.dense_index(2))];
    CHECK(std::fabs(v) < 3 * se + 2e-3);  // small linear-interpolation bias allowed
  }
}

TEST_CASE("l1 projection") {
  Eigen::VectorXd v(4);
  v << 0.2, -0.1, 0.05, 0.0;
  CHECK((project_l1(v, 1.0) - v).norm() == 0.0);  // already feasible

  Eigen::VectorXd w(3);
  w << 3.0, -4.0, 1.0;
  Eigen::VectorXd p = project_l1(w, 2.0);
  CHECK(p.lpNorm<1>() == doctest::Approx(2.0).epsilon(1e-12));
  // signs preserved, small entries shrink to zero first
  CHECK(p[0] > 0.0);
  CHECK(p[1] < 0.0);
  CHECK(p[2] == 0.0);
  // optimality spot check: no random feasible point is closer to w
  SplitMix64 g(411);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd q(3);
    for (int i = 0; i < 3; ++i) q[i] = 4.0 * g.uniform_sym();
    q = project_l1(q, 2.0);
    CHECK((w - p).norm() <= (w - q).norm() + 1e-12);
  }
}

TEST_CASE("objective against the direct simulation of the damped functional") {
  GridSpec grid{1.0, 400, 400};
  PathBatch b = sample_fbm(0.5, grid, 3000, 421);
  const int N = 6;
  ExpectedSig e = expected_signature(b, N);
  LinObjective obj = build_objective(PolynomialPayoff{}, e, 1, 1.0);

  const std::vector<double> times = grid.fine_times();
  SplitMix64 g(431);
  for (int rep = 0; rep < 3; ++rep) {
    Eigen::VectorXd lam(3);
    for (int i = 0; i < 3; ++i) lam[i] = 0.2 * g.uniform_sym();
    DualPoly l(2);
    l.add(Word{}, lam[0]);
    l.add(Word{1}, lam[1]);
    l.add(Word{2}, lam[2]);

    // oracle: E[ int_0^T exp(-int_0^t <l, sig>^2 ds) dX_t ] by trapezoid
    std::vector<double> per_path(b.M);
#pragma omp parallel for schedule(static)
    for (int m = 0; m < b.M; ++m) {
      std::vector<double> path(b.path(m), b.path(m) + times.size());
      SigStream s = stream_signatures(times, path, 1, 2, 1);
      double acc = 0.0, integral = 0.0;
      double u_prev = pair(l, s.sigs[0]);
      for (int j = 0; j < grid.J; ++j) {
        double u_next = pair(l, s.sigs[j + 1]);
        double damp_prev = std::exp(-acc);
        acc += 0.5 * (u_prev * u_prev + u_next * u_next) / grid.J;
        double damp_next = std::exp(-acc);
        integral += 0.5 * (damp_prev + damp_next) * (path[j + 1] - path[j]);
        u_prev = u_next;
      }
      per_path[m] = integral;
    }
    auto [mc, se] = mean_and_se(per_path);
    CHECK(std::fabs(obj.value(lam) - mc) < 3 * se);
  }
}

TEST_CASE("constraint degeneracy and the k=0 grid-search oracle") {
  GridSpec grid{1.0, 50, 50};
  PathBatch b = sample_fbm(1.0, grid, 2000, 407);
  const int N = 6;
  ExpectedSig e = expected_signature(b, N);

  // K = 0 forces lambda = 0: value is the undamped payoff word <2, E>
  LinObjective degenerate = build_objective(PolynomialPayoff{}, e, 0, 0.0);
  MaximizeResult r0 = maximize(degenerate, 3, 1);
  CHECK(r0.lambda.lpNorm<1>() == 0.0);
  CHECK(r0.value == doctest::Approx(e.tensor.coeff(Word{2})).epsilon(1e-12));

  LinObjective obj = build_objective(PolynomialPayoff{}, e, 0, 1.0);
  MaximizeResult best = maximize(obj, 5, 1);
  double grid_best = -1e300;
  for (int i = -10000; i <= 10000; ++i) {
    Eigen::VectorXd lam(1);
    lam << i * 1e-4;
    grid_best = std::max(grid_best, obj.value(lam));
  }
  CHECK(std::fabs(best.value - grid_best) < 1e-4 * (1.0 + std::fabs(grid_best)));

  // restart monotonicity (prefix property of the restart streams)
  double v1 = maximize(obj, 1, 9).value;
  double v5 = maximize(obj, 5, 9).value;
  double v10 = maximize(obj, 10, 9).value;
  CHECK(v1 <= v5 + 1e-15);
  CHECK(v5 <= v10 + 1e-15);
}
