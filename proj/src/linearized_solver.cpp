#include "sigstop/linearized_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sigstop/rng.hpp"
#include "sigstop/signature_stream.hpp"
#include "sigstop/stopping_engine.hpp"

namespace sigstop {

ExpectedSig expected_signature(const PathBatch& batch, int level) {
  if (batch.M < 1) throw std::invalid_argument("expected_signature: empty batch");
  const int m = 1 + batch.d;
  const std::size_t size = FreeTensor::dense_size(m, level);
  const std::vector<double> times = batch.grid.fine_times();

  std::vector<double> terminal(static_cast<std::size_t>(batch.M) * size);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < batch.M; ++p) {
    std::vector<double> path(batch.path(p), batch.path(p) + times.size() * batch.d);
    SigStream s = stream_signatures(times, path, batch.d, level,
                                    batch.grid.J_fine);  // keep endpoints only
    const FreeTensor& last = s.sigs.back();
    std::copy(last.data().begin(), last.data().end(),
              terminal.begin() + static_cast<std::size_t>(p) * size);
  }

  ExpectedSig e;
  e.M = static_cast<std::size_t>(batch.M);
  e.tensor = FreeTensor(m, level);
  e.std_errors = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  std::vector<double> column(batch.M);
  for (std::size_t i = 0; i < size; ++i) {
    for (int p = 0; p < batch.M; ++p) column[p] = terminal[static_cast<std::size_t>(p) * size + i];
    auto [mean, se] = mean_and_se(column);
    e.tensor[i] = mean;
    e.std_errors[static_cast<Eigen::Index>(i)] = se;
  }
  e.tensor[0] = 1.0;  // exact for every path
  e.std_errors[0] = 0.0;
  return e;
}

Eigen::VectorXd LinObjective::grad(const Eigen::VectorXd& lambda) const {
  Eigen::VectorXd g(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) g[i] = gradient[i].eval(lambda);
  return g;
}

SymbolicDualPoly symbolic_objective_dual(const PolynomialPayoff& payoff, int width,
                                         int k, int level) {
  if (width < 2) throw std::invalid_argument("symbolic_objective_dual: need width >= 2");
  const int g_deg = payoff.deriv_degree();
  if (level < 2 * k + 1 || level < g_deg + 1)
    throw std::domain_error("symbolic_objective_dual: level too small for k/payoff bookkeeping");

  SymbolicDualPoly l = symbolic_policy(width, k);
  const int nvars = l.nvars();

  // -(l sh l) 1
  SymbolicDualPoly damping = shuffle(l, l);
  {
    SymbolicDualPoly neg(width, nvars);
    for (const auto& [w, p] : damping.terms()) {
      MultiPoly q = p;
      q *= -1.0;
      neg.add(w, q);
    }
    damping = append_letter(neg, 1);
  }
  SymbolicDualPoly expd = shuffle_exp(damping, level - 1);

  SymbolicDualPoly obj(width, nvars);
  // G' part, integrated against dX (letter 2)
  {
    std::vector<double> gp;
    for (std::size_t i = 1; i < payoff.G.size(); ++i)
      gp.push_back(payoff.G[i] * static_cast<double>(i));
    if (!gp.empty()) {
      DualPoly gpoly = shuffle_poly(gp, DualPoly(width, Word{2}));
      SymbolicDualPoly gsym(width, nvars);
      for (const auto& [w, c] : gpoly.terms()) gsym.add(w, MultiPoly::constant(nvars, c));
      obj += append_letter(shuffle(expd, gsym).truncated(level - 1), 2);
    }
  }
  // L part, integrated against time (letter 1)
  if (!payoff.L.empty()) {
    DualPoly lpoly = shuffle_poly(payoff.L, DualPoly(width, Word{2}));
    SymbolicDualPoly lsym(width, nvars);
    for (const auto& [w, c] : lpoly.terms()) lsym.add(w, MultiPoly::constant(nvars, c));
    obj += append_letter(shuffle(expd, lsym).truncated(level - 1), 1);
  }
  return obj.truncated(level);
}

LinObjective build_objective(const PolynomialPayoff& payoff, const ExpectedSig& esig,
                             int k, double constraint) {
  LinObjective obj;
  obj.k = k;
  obj.level = esig.tensor.level();
  obj.constraint = constraint;
  obj.words = policy_words(esig.tensor.width(), k);
  SymbolicDualPoly sym =
      symbolic_objective_dual(payoff, esig.tensor.width(), k, esig.tensor.level());
  obj.poly = pair_symbolic(sym, esig.tensor);
  const int nvars = static_cast<int>(obj.words.size());
  obj.gradient.reserve(nvars);
  for (int i = 0; i < nvars; ++i) obj.gradient.push_back(obj.poly.derivative(i));
  return obj;
}

Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double K) {
  if (K < 0.0) throw std::invalid_argument("project_l1: negative radius");
  if (K == 0.0) return Eigen::VectorXd::Zero(v.size());
  if (v.lpNorm<1>() <= K) return v;
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = std::fabs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - K) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      tau = t;
    }
  }
  (void)rho;
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::fabs(v[i]) - tau;
    out[i] = a > 0.0 ? (v[i] > 0 ? a : -a) : 0.0;
  }
  return out;
}

MaximizeResult maximize(const LinObjective& obj, int restarts, std::uint64_t seed) {
  const int n = static_cast<int>(obj.words.size());
  MaximizeResult best;
  best.lambda = Eigen::VectorXd::Zero(n);
  best.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    SplitMix64 g = SplitMix64::stream(seed, static_cast<std::uint64_t>(r));
    Eigen::VectorXd lam(n);
    if (r == 0) {
      lam.setZero();  // the undamped payoff point is a natural anchor
    } else {
      for (int i = 0; i < n; ++i) lam[i] = g.uniform_sym();
      lam = project_l1(lam, obj.constraint / 10.0);
    }
    double val = obj.value(lam);
    double step = 0.1;
    int it = 0;
    for (; it < 500 && step > 1e-13; ++it) {
      Eigen::VectorXd grad = obj.grad(lam);
      Eigen::VectorXd cand = project_l1(lam + step * grad, obj.constraint);
      const double cval = obj.value(cand);
      if (cval > val + 1e-15 * (1.0 + std::fabs(val))) {
        lam = cand;
        val = cval;
        step *= 1.3;
      } else {
        step *= 0.5;
      }
    }
    best.restarts.push_back({r, it, val, lam.lpNorm<1>()});
    if (val > best.value) {
      best.value = val;
      best.lambda = lam;
    }
    ++best.restarts_used;
  }
  return best;
}

}  // namespace sigstop
