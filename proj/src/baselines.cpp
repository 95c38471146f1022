#include "monocomp/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace monocomp {

namespace {

void require_identity_lambda(const CompositeProblem& p, const char* who) {
  if (!p.lambda_op.is_identity())
    throw std::invalid_argument(std::string(who) + ": Lambda must be the identity");
}

double objective(const CompositeProblem& p, std::span<const double> x) { return j_value(p, x); }

std::vector<double> gradient(const CompositeProblem& p, std::span<const double> x) {
  std::vector<double> ax = p.a.multiply(x);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= p.b[i];
  std::vector<double> g = p.a.multiply_transpose(ax);
  for (double& v : g) v *= 2.0 * p.qscale;
  return g;
}

}  // namespace

void GistConfig::validate() const {
  if (!(relative_tolerance > 0.0)) throw std::invalid_argument("gist: tolerance must be > 0");
  if (!(step_min > 0.0 && step_min <= step_max)) throw std::invalid_argument("gist: bad step bounds");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("gist: shrink must be in (0,1)");
  if (nonmonotone_window == 0) throw std::invalid_argument("gist: window must be >= 1");
}

void FistaConfig::validate() const {
  if (step < 0.0) throw std::invalid_argument("fista: step must be >= 0");
}

double power_iteration_ata(const SparseMatrix& a, std::size_t iterations) {
  std::vector<double> v(a.cols(), 1.0 / std::sqrt(static_cast<double>(a.cols())));
  double lam = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const std::vector<double> av = a.multiply(v);
    std::vector<double> w = a.multiply_transpose(av);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lam = norm;
    for (double& x : w) x /= norm;
    v = std::move(w);
  }
  return lam;
}

SolveReport gist_solve(const CompositeProblem& p, const GistConfig& cfg,
                       std::span<const double> x0) {
  cfg.validate();
  require_identity_lambda(p, "gist");
  const auto t_begin = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.x.assign(x0.begin(), x0.end());
  StageTrace trace;
  trace.eps = 0.0;
  double f_cur = objective(p, rep.x);
  trace.j_eps.push_back(f_cur);

  std::vector<double> g = gradient(p, rep.x);
  std::vector<double> x_prev, g_prev;
  double eta = 1.0;
  for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
    if (!x_prev.empty()) {
      double dxdx = 0.0, dxdg = 0.0;
      for (std::size_t i = 0; i < rep.x.size(); ++i) {
        const double dx = rep.x[i] - x_prev[i];
        dxdx += dx * dx;
        dxdg += dx * (g[i] - g_prev[i]);
      }
      eta = dxdg > 1e-300 ? dxdx / dxdg : 1.0;
      eta = std::clamp(eta, cfg.step_min, cfg.step_max);
    }
    const std::size_t w0 = trace.j_eps.size() > cfg.nonmonotone_window
                               ? trace.j_eps.size() - cfg.nonmonotone_window
                               : 0;
    double f_ref = trace.j_eps[w0];
    for (std::size_t i = w0 + 1; i < trace.j_eps.size(); ++i)
      f_ref = std::max(f_ref, trace.j_eps[i]);

    std::vector<double> x_new(rep.x.size());
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 100; ++ls) {
      for (std::size_t i = 0; i < rep.x.size(); ++i)
        x_new[i] = p.penalty.prox(rep.x[i] - eta * g[i], eta);
      f_new = objective(p, x_new);
      if (std::isnan(f_new))
        throw SolveError("gist: objective diverged to NaN", f_new, k);
      double dist = 0.0;
      for (std::size_t i = 0; i < rep.x.size(); ++i) {
        const double d = x_new[i] - rep.x[i];
        dist += d * d;
      }
      if (f_new <= f_ref - cfg.sufficient_decrease / (2.0 * eta) * dist) {
        accepted = true;
        break;
      }
      eta *= cfg.shrink;
      if (eta < cfg.step_min) break;
    }
    if (!accepted) break;  // step floor reached; no admissible progress

    x_prev = rep.x;
    g_prev = g;
    rep.x = std::move(x_new);
    g = gradient(p, rep.x);
    trace.j_eps.push_back(f_new);
    ++trace.iterations;
    const double change = std::abs(f_new - f_cur);
    f_cur = f_new;
    if (change <= cfg.relative_tolerance * std::max(1.0, std::abs(f_cur))) {
      trace.converged = true;
      break;
    }
  }
  rep.final_residual = trace.j_eps.size() >= 2
                           ? std::abs(trace.j_eps.back() - trace.j_eps[trace.j_eps.size() - 2])
                           : 0.0;
  rep.converged = trace.converged;
  rep.total_inner_iterations = trace.iterations;
  rep.stages.push_back(std::move(trace));
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return rep;
}

SolveReport fista_solve(const CompositeProblem& p, const FistaConfig& cfg,
                        std::span<const double> x0) {
  cfg.validate();
  require_identity_lambda(p, "fista");
  if (p.penalty.lambda() != 0.0 &&
      (p.penalty.kind() != PenaltyKind::PowerLaw || p.penalty.tau() != 1.0))
    throw std::invalid_argument("fista: convex case only (power law with tau = 1)");
  const auto t_begin = std::chrono::steady_clock::now();

  double step = cfg.step;
  if (step == 0.0) {
    const double lip = 2.0 * p.qscale * power_iteration_ata(p.a);
    step = lip > 0.0 ? 1.0 / lip : 1.0;
  }

  SolveReport rep;
  rep.x.assign(x0.begin(), x0.end());
  StageTrace trace;
  trace.eps = 0.0;
  std::vector<double> x = rep.x, y = rep.x;
  double t = 1.0;
  double f_best = objective(p, x);
  std::vector<double> x_best = x;
  trace.j_eps.push_back(f_best);
  for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
    const std::vector<double> g = gradient(p, y);
    std::vector<double> x_new(x.size());
    const double thresh = step * p.penalty.lambda();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double v = y[i] - step * g[i];
      x_new[i] = v > thresh ? v - thresh : (v < -thresh ? v + thresh : 0.0);
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = x_new[i] + (t - 1.0) / t_new * (x_new[i] - x[i]);
    x = std::move(x_new);
    t = t_new;
    const double f = objective(p, x);
    trace.j_eps.push_back(f);
    ++trace.iterations;
    if (f < f_best) {
      f_best = f;
      x_best = x;
    }
    const double prev = trace.j_eps[trace.j_eps.size() - 2];
    if (std::abs(f - prev) <= cfg.relative_tolerance * std::max(1.0, std::abs(prev))) {
      trace.converged = true;
      break;
    }
  }
  rep.x = std::move(x_best);
  rep.final_residual = f_best;
  rep.converged = trace.converged;
  rep.total_inner_iterations = trace.iterations;
  rep.stages.push_back(std::move(trace));
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return rep;
}

}  // namespace monocomp
