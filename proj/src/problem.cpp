#include "monocomp/problem.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace monocomp {

namespace {

std::size_t dense_rank(const std::vector<const SparseMatrix*>& blocks, std::size_t n) {
  std::size_t rows = 0;
  for (const auto* b : blocks) rows += b->rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(n));
  std::size_t base = 0;
  for (const auto* b : blocks) {
    for (std::size_t r = 0; r < b->rows(); ++r) {
      const auto cs = b->row_cols(r);
      const auto vs = b->row_values(r);
      for (std::size_t k = 0; k < cs.size(); ++k)
        d(static_cast<Eigen::Index>(base + r), static_cast<Eigen::Index>(cs[k])) += vs[k];
    }
    base += b->rows();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace

void CompositeProblem::validate(std::size_t max_rank_check) const {
  if (a.cols() != lambda_op.cols())
    throw std::invalid_argument("problem: A and Lambda column counts differ");
  if (b.size() != a.rows())
    throw std::invalid_argument("problem: b length != rows(A)");
  if (!(qscale > 0.0))
    throw std::invalid_argument("problem: qscale must be > 0");
  const std::size_t n = a.cols();
  if (n == 0 || n > max_rank_check) return;
  if (witness == CoercivityWitness::FullColumnRank) {
    if (dense_rank({&a}, n) != n)
      throw std::invalid_argument("problem: declared rank(A)=n witness fails numerically");
  } else {
    if (dense_rank({&a, &lambda_op}, n) != n)
      throw std::invalid_argument("problem: declared joint-kernel witness fails numerically");
  }
}

double j_value(const CompositeProblem& p, std::span<const double> x) {
  const std::vector<double> ax = p.a.multiply(x);
  double fit = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double d = ax[i] - p.b[i];
    fit += d * d;
  }
  const std::vector<double> y = p.lambda_op.multiply(x);
  double pen = 0.0;
  for (double yi : y) pen += p.penalty.phi(yi);
  return p.qscale * fit + pen;
}

double j_eps_value(const CompositeProblem& p, double eps, std::span<const double> x) {
  const SmoothedPenalty sp(p.penalty, eps);
  const std::vector<double> ax = p.a.multiply(x);
  double fit = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double d = ax[i] - p.b[i];
    fit += d * d;
  }
  const std::vector<double> y = p.lambda_op.multiply(x);
  double pen = 0.0;
  for (double yi : y) pen += sp.psi(yi * yi);
  return p.qscale * fit + pen;
}

std::vector<double> optimality_residual(const CompositeProblem& p, double eps,
                                        std::span<const double> x) {
  const SmoothedPenalty sp(p.penalty, eps);
  std::vector<double> ax = p.a.multiply(x);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= p.b[i];
  std::vector<double> g = p.a.multiply_transpose(ax);
  for (double& gi : g) gi *= 2.0 * p.qscale;
  std::vector<double> y = p.lambda_op.multiply(x);
  for (double& yi : y) yi = sp.weight(yi) * yi;
  const std::vector<double> lt = p.lambda_op.multiply_transpose(y);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += lt[i];
  return g;
}

}  // namespace monocomp
