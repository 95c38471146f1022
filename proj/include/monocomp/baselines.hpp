#pragma once

#include "monocomp/solver.hpp"

namespace monocomp {

/// Proximal gradient with Barzilai-Borwein step and nonmonotone backtracking.
/// Terminates when the relative change of consecutive objective values drops
/// below `relative_tolerance` or after `max_iterations`.
struct GistConfig {
  double relative_tolerance = 1e-5;
  std::size_t max_iterations = 1000;
  double step_min = 1e-12;
  double step_max = 1e12;
  double shrink = 0.5;              // backtracking factor, in (0,1)
  double sufficient_decrease = 1e-5;
  std::size_t nonmonotone_window = 5;

  void validate() const;
};

struct FistaConfig {
  double step = 0.0;                // 0: 1/L via power iteration on A^T A
  std::size_t max_iterations = 5000;
  double relative_tolerance = 1e-10;

  void validate() const;
};

/// Requires Lambda = identity. The report carries the unsmoothed objective
/// trace in a single stage with eps = 0.
SolveReport gist_solve(const CompositeProblem& p, const GistConfig& cfg,
                       std::span<const double> x0);

/// Convex case only: Lambda = identity and power-law tau = 1 (or lambda = 0).
/// Tracks the best iterate seen; the report's x is the best, not the last.
SolveReport fista_solve(const CompositeProblem& p, const FistaConfig& cfg,
                        std::span<const double> x0);

/// Largest eigenvalue of A^T A by power iteration (deterministic start).
double power_iteration_ata(const SparseMatrix& a, std::size_t iterations = 200);

}  // namespace monocomp
