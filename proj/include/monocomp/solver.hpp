#pragma once

#include <optional>
#include <vector>

#include "monocomp/linsolve.hpp"
#include "monocomp/problem.hpp"

namespace monocomp {

struct ContinuationSchedule {
  double eps_start = 1e-1;
  double eps_floor = 1e-12;
  double decay = 0.1;                 // multiplicative, in (0,1)
  double inner_tolerance = 1e-3;      // l-inf of the optimality residual
  std::size_t inner_max_iterations = 5000;

  void validate() const;
  std::vector<double> stages() const;
};

struct StageTrace {
  double eps = 0.0;
  std::vector<double> j_eps;          // J_eps(x^0), J_eps(x^1), ...
  std::vector<double> j_unreg;        // unsmoothed J per iterate (comparison protocol)
  std::vector<double> elapsed_seconds;  // cumulative wall clock per iterate
  std::vector<double> residuals;      // l-inf optimality residual per iterate
  /// Slack of the quantified descent estimate at each accepted step:
  /// J_eps(x^{k+1}) + qscale|A dx|^2 + sum_i Psi'(y_i^k^2) dy_i^2 - J_eps(x^k),
  /// nonpositive up to rounding.
  std::vector<double> descent_gaps;
  std::size_t iterations = 0;
  bool converged = false;
  /// The linear solver hit its accuracy floor: the next iterate no longer
  /// decreased J_eps (the floor of Theorem-style descent under rounding) and
  /// was discarded.
  bool stalled = false;
};

struct SolveReport {
  std::vector<double> x;
  std::vector<StageTrace> stages;
  std::size_t total_inner_iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;

  /// Unsmoothed objective values per iteration, all stages concatenated
  /// (baselines fill this directly; the monotone solver records J_eps).
  std::vector<double> flat_j_trace() const;
};

/// Default start: least squares under witness (a); zero under witness (b)
/// (the LS problem is ill-posed for rank-deficient A).
std::vector<double> default_start(const CompositeProblem& p, const LinearSolveOptions& opts);

SolveReport inner_solve(const CompositeProblem& p, double eps, std::span<const double> x0,
                        const ContinuationSchedule& sched, const LinearSolveOptions& opts);

/// Runs inner_solve over eps = start, start*decay, ... down to the floor,
/// warm-starting each stage from the previous iterate. Empty x0 uses
/// default_start.
SolveReport continuation_solve(const CompositeProblem& p, std::span<const double> x0,
                               const ContinuationSchedule& sched, const LinearSolveOptions& opts);

struct LambdaSweepRow {
  double lambda;
  double fidelity;     // |A x_lambda - b_tilde|_2
  double quasi_norm;   // |Lambda x_lambda|_tau^tau
};

struct TauSweepRow {
  double tau;
  double quasi_norm;        // thresholded, see threshold below
  std::size_t support_size;
};

struct LambdaSweepResult {
  std::vector<LambdaSweepRow> rows;
  std::vector<double> b_tilde;
};

struct TauSweepResult {
  std::vector<TauSweepRow> rows;
  double support_threshold;
};

/// lambda -> 0 asymptotics for the power law: fidelity against
/// b_tilde = (I-P)b, P the orthogonal projector onto Ker(A^T).
/// Requires rank(A) = n.
LambdaSweepResult asymptotic_lambda_sweep(const CompositeProblem& p,
                                          const std::vector<double>& lambdas,
                                          const ContinuationSchedule& sched,
                                          const LinearSolveOptions& opts);

/// tau -> 0 asymptotics: quasi-norm and support of Lambda x_tau. Entries at
/// or below `support_threshold` count as exact zeros in both columns (the
/// smoothed solve leaves numerical dust where a minimizer has exact zeros,
/// and |.|^tau near tau=0 maps any nonzero to ~1).
TauSweepResult asymptotic_tau_sweep(const CompositeProblem& p, const std::vector<double>& taus,
                                    const ContinuationSchedule& sched,
                                    const LinearSolveOptions& opts,
                                    double support_threshold = 1e-6);

}  // namespace monocomp
