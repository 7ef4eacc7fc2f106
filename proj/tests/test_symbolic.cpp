#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sigstop/linearized_solver.hpp"
#include "sigstop/symbolic.hpp"

using namespace sigstop;
using sigstop::testing::linspace;
using sigstop::testing::random_path;

TEST_CASE("multipoly arithmetic, eval and derivative") {
  MultiPoly x = MultiPoly::variable(2, 0), y = MultiPoly::variable(2, 1);
  MultiPoly p = x * x + y * 3.0 + MultiPoly::constant(2, -1.0);
  Eigen::VectorXd at(2);
  at << 2.0, -0.5;
  CHECK(p.eval(at) == doctest::Approx(4.0 - 1.5 - 1.0));
  CHECK(p.derivative(0).eval(at) == doctest::Approx(4.0));
  CHECK(p.derivative(1).eval(at) == doctest::Approx(3.0));
  CHECK(p.total_degree() == 2);

  MultiPoly q = p * p;
  CHECK(q.eval(at) == doctest::Approx(p.eval(at) * p.eval(at)));
  CHECK(q.total_degree() == 4);
}

TEST_CASE("substitution commutes with shuffle and exp-shuffle") {
  // the symbolic layer must be the lambda-generic version of the concrete one
  SymbolicDualPoly l = symbolic_policy(2, 1);  // vars on e, 1, 2
  CHECK(l.nvars() == 3);
  SplitMix64 g(61);
  Eigen::VectorXd lam(3);
  for (int i = 0; i < 3; ++i) lam[i] = 0.5 * g.uniform_sym();

  SymbolicDualPoly ll = shuffle(l, l);
  DualPoly concrete = l.substitute(lam);
  DualPoly a = ll.substitute(lam);
  DualPoly b = shuffle(concrete, concrete);
  for (const auto& [w, c] : b.terms()) CHECK(a.coeff(w) == doctest::Approx(c).epsilon(1e-14));

  SymbolicDualPoly damped = append_letter(ll, 1);
  SymbolicDualPoly es = shuffle_exp(damped, 5);
  DualPoly a2 = es.substitute(lam);
  DualPoly b2 = shuffle_exp(append_letter(b, 1), 5);
  for (const auto& [w, c] : b2.terms()) CHECK(a2.coeff(w) == doctest::Approx(c).epsilon(1e-12));
  for (const auto& [w, c] : a2.terms()) CHECK(b2.coeff(w) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("pairing a symbolic dual is the polynomial of pairings") {
  auto times = linspace(0.0, 1.0, 101);
  SplitMix64 g(67);
  std::vector<double> x = random_path(101, g, 0.1);
  FreeTensor sig = stream_signatures(times, x, 1, 5, 100).sigs.back();

  SymbolicDualPoly l = symbolic_policy(2, 1);
  SymbolicDualPoly es = shuffle_exp(append_letter(shuffle(l, l), 1), 5);
  MultiPoly p = pair_symbolic(es, sig);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXd lam(3);
    for (int i = 0; i < 3; ++i) lam[i] = 0.4 * g.uniform_sym();
    CHECK(p.eval(lam) == doctest::Approx(pair(es.substitute(lam), sig)).epsilon(1e-12));
  }
}

TEST_CASE("k = 0 objective collapses to the scalar damping series") {
  // exp_sh of -(lambda_0^2 e sh e)1 pairs as sum_r (-lambda_0^2)^r <1^r 2, E>
  auto times = linspace(0.0, 1.0, 51);
  SplitMix64 g(71);
  std::vector<double> x = random_path(51, g, 0.15);
  const int N = 6;
  FreeTensor sig = stream_signatures(times, x, 1, N, 50).sigs.back();

  PolynomialPayoff identity;
  SymbolicDualPoly sym = symbolic_objective_dual(identity, 2, 0, N);
  MultiPoly obj = pair_symbolic(sym, sig);

  for (double lam0 : {0.0, 0.4, -0.9}) {
    double expect = 0.0;
    Word ones;
    for (int r = 0; r <= N - 1; ++r) {
      expect += std::pow(-lam0 * lam0, r) * sig.coeff(ones.appended(2));
      if (r < N - 1) ones = ones.appended(1);
    }
    Eigen::VectorXd lv(1);
    lv << lam0;
    CHECK(obj.eval(lv) == doctest::Approx(expect).epsilon(1e-12));
  }

  // lambda = 0 reproduces the undamped payoff word <2, E>
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  CHECK(obj.eval(zero) == doctest::Approx(sig.coeff(Word{2})).epsilon(1e-14));
}

TEST_CASE("objective gradient matches central differences") {
  auto times = linspace(0.0, 1.0, 51);
  SplitMix64 g(73);
  std::vector<double> x = random_path(51, g, 0.12);
  const int N = 5;
  FreeTensor sig = stream_signatures(times, x, 1, N, 50).sigs.back();

  ExpectedSig esig;
  esig.tensor = sig;
  esig.std_errors = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sig.size()));
  esig.M = 1;
  LinObjective obj = build_objective(PolynomialPayoff{}, esig, 1, 1.0);

  Eigen::VectorXd lam(3);
  lam << 0.21, -0.33, 0.4;
  Eigen::VectorXd grad = obj.grad(lam);
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd p = lam, m = lam;
    p[i] += h;
    m[i] -= h;
    double fd = (obj.value(p) - obj.value(m)) / (2 * h);
    CHECK(std::fabs(grad[i] - fd) / (1.0 + std::fabs(fd)) < 1e-6);
  }
}

TEST_CASE("symbolic exp-shuffle rejects an empty-word part") {
  SymbolicDualPoly l(2, 1);
  l.add(Word{}, MultiPoly::variable(1, 0));
  CHECK_THROWS_AS(shuffle_exp(l, 3), std::invalid_argument);
}

TEST_CASE("degree bookkeeping guard") {
  PolynomialPayoff identity;
  CHECK_THROWS_AS(symbolic_objective_dual(identity, 2, 2, 3), std::domain_error);
}
