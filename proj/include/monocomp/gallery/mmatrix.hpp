#pragma once

#include "monocomp/solver.hpp"

namespace monocomp::gallery {

/// 5-point-Laplacian test problem: A stacks the scaled forward-difference
/// gradients (A^T A is the Dirichlet Laplacian times (n+1)^2), Lambda = I,
/// qscale = 1/2. b is chosen so that A^T b equals the discretized forcing
/// 10 x1 sin(5 x2) cos(7 x1), i.e. b = A z with z the Poisson solution.
struct MMatrixInstance {
  CompositeProblem problem;
  std::vector<double> forcing;           // f on the n x n interior grid
  std::vector<double> poisson_solution;  // z = (A^T A)^{-1} f, the lambda = 0 solution
};

MMatrixInstance build_mmatrix(std::size_t n, double lambda, double tau);

}  // namespace monocomp::gallery
