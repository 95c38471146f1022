#pragma once

#include <span>
#include <vector>

#include "monocomp/penalty.hpp"
#include "monocomp/sparse.hpp"

namespace monocomp {

/// Which assumption makes the objective coercive: (a) A has full column
/// rank, or (b) Ker(A) and Ker(Lambda) intersect trivially (the penalty must
/// then be positively homogeneous, i.e. the power law).
enum class CoercivityWitness { FullColumnRank, JointKernel };

/// min_x qscale*|Ax-b|^2 + sum_i phi((Lambda x)_i).
/// qscale is a problem field: the theory sections use 1/2, the 1-D fracture
/// model uses N and the 2-D one uses 1; keeping the written scaling avoids
/// silently rescaling lambda.
struct CompositeProblem {
  SparseMatrix a;
  std::vector<double> b;
  SparseMatrix lambda_op;
  Penalty penalty;
  double qscale = 0.5;
  CoercivityWitness witness = CoercivityWitness::FullColumnRank;

  std::size_t dim() const { return a.cols(); }

  /// Checks dimensions always, and the declared witness numerically (dense
  /// rank of A or of the stacked [A; Lambda]) when n <= max_rank_check.
  void validate(std::size_t max_rank_check = 200) const;
};

double j_value(const CompositeProblem& p, std::span<const double> x);
double j_eps_value(const CompositeProblem& p, double eps, std::span<const double> x);

/// Gradient of j_eps: 2*qscale*A^T(Ax-b) + Lambda^T [w .* (Lambda x)] with
/// w the smoothed reweighting coefficients; its l-inf norm is the stopping
/// statistic of the monotone iteration.
std::vector<double> optimality_residual(const CompositeProblem& p, double eps,
                                        std::span<const double> x);

}  // namespace monocomp
