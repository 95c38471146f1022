#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "monocomp/sparse.hpp"

namespace monocomp {

enum class SolveMethod { DirectCholesky, ConjugateGradient };

struct LinearSolveOptions {
  SolveMethod method = SolveMethod::DirectCholesky;
  double cg_tolerance = 1e-10;      // absolute l-inf residual target
  std::size_t cg_max_iterations = 0;  // 0: 20*n
  double diagonal_shift = 0.0;
};

/// Thrown by the linear solvers: CG out of iterations (carries the final
/// residual) or Cholesky breakdown on a non-SPD matrix.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, double residual, std::size_t iteration)
      : std::runtime_error(what), residual(residual), iteration(iteration) {}
  double residual;
  std::size_t iteration;
};

/// Solves M x = rhs for symmetric positive definite M.
std::vector<double> solve_spd(const SparseMatrix& m, std::span<const double> rhs,
                              const LinearSolveOptions& opts);

/// Jacobi-preconditioned CG on a matrix-free operator. `apply` must be
/// symmetric positive (semi)definite; products and reductions run in a fixed
/// sequential order, so results are deterministic.
std::vector<double> cg_solve(const std::function<std::vector<double>(std::span<const double>)>& apply,
                             std::span<const double> rhs, std::span<const double> jacobi_diag,
                             double tolerance, std::size_t max_iterations,
                             std::span<const double> x0 = {});

/// Sparse Cholesky with the symbolic analysis cached across refactorizations
/// (the iteration matrix of the reweighted scheme keeps one sparsity pattern).
class CholeskyFactor {
 public:
  CholeskyFactor();
  ~CholeskyFactor();
  CholeskyFactor(CholeskyFactor&&) noexcept;
  CholeskyFactor& operator=(CholeskyFactor&&) noexcept;

  /// Factorizes m (+ shift*I); reuses the symbolic analysis when the pattern
  /// matches the previous call. Throws SolveError on breakdown.
  void factorize(const SparseMatrix& m, double shift = 0.0);
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace monocomp
