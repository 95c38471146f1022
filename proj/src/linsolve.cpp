#include "monocomp/linsolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <limits>

namespace monocomp {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m, double shift) {
  using T = Eigen::Triplet<double>;
  std::vector<T> trips;
  trips.reserve(m.nnz() + (shift != 0.0 ? m.rows() : 0));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k)
      trips.emplace_back(static_cast<int>(r), static_cast<int>(cs[k]), vs[k]);
    if (shift != 0.0) trips.emplace_back(static_cast<int>(r), static_cast<int>(r), shift);
  }
  Eigen::SparseMatrix<double> e(static_cast<Eigen::Index>(m.rows()),
                                static_cast<Eigen::Index>(m.cols()));
  e.setFromTriplets(trips.begin(), trips.end());
  e.makeCompressed();
  return e;
}

double linf_residual(const SparseMatrix& m, std::span<const double> x,
                     std::span<const double> rhs, double shift) {
  const std::vector<double> mx = m.multiply(x);
  double r = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i)
    r = std::max(r, std::abs(mx[i] + shift * x[i] - rhs[i]));
  return r;
}

}  // namespace

struct CholeskyFactor::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseMatrix<double> mat;  // equilibrated
  Eigen::VectorXd inv_scale;        // S^-1, S = sqrt(diag)
  bool analyzed = false;
  std::size_t pattern_nnz = 0;
  std::size_t pattern_rows = 0;
};

CholeskyFactor::CholeskyFactor() : impl_(std::make_unique<Impl>()) {}
CholeskyFactor::~CholeskyFactor() = default;
CholeskyFactor::CholeskyFactor(CholeskyFactor&&) noexcept = default;
CholeskyFactor& CholeskyFactor::operator=(CholeskyFactor&&) noexcept = default;

void CholeskyFactor::factorize(const SparseMatrix& m, double shift) {
  Eigen::SparseMatrix<double> e = to_eigen(m, shift);
  // symmetric Jacobi equilibration: the reweighted systems mix weight rows of
  // order 1/eps^2 with O(1) elastic rows, which unequilibrated LDLT cannot
  // factor accurately
  Eigen::VectorXd& s = impl_->inv_scale;
  s = e.diagonal();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    s[i] = s[i] > 0.0 ? 1.0 / std::sqrt(s[i]) : 1.0;
  for (Eigen::Index k = 0; k < e.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(e, k); it; ++it)
      it.valueRef() *= s[it.row()] * s[it.col()];
  impl_->mat = std::move(e);
  const Eigen::SparseMatrix<double>& es = impl_->mat;
  if (!impl_->analyzed || impl_->pattern_nnz != static_cast<std::size_t>(es.nonZeros()) ||
      impl_->pattern_rows != m.rows()) {
    impl_->ldlt.analyzePattern(es);
    impl_->analyzed = true;
    impl_->pattern_nnz = static_cast<std::size_t>(es.nonZeros());
    impl_->pattern_rows = m.rows();
  }
  impl_->ldlt.factorize(es);
  bool ok = impl_->ldlt.info() == Eigen::Success;
  if (ok) {
    // LDLT accepts indefinite matrices; an SPD input must keep D positive up
    // to cancellation noise, and never exactly singular
    const auto& d = impl_->ldlt.vectorD();
    const double dmax = d.size() ? d.maxCoeff() : 0.0;
    if (!(dmax > 0.0)) ok = false;
    for (Eigen::Index i = 0; i < d.size() && ok; ++i)
      if (d[i] == 0.0 || d[i] < -1e-10 * dmax || !std::isfinite(d[i])) ok = false;
  }
  if (!ok)
    throw SolveError("cholesky factorization breakdown (matrix not SPD; consider a diagonal shift)",
                     std::numeric_limits<double>::quiet_NaN(), 0);
}

std::vector<double> CholeskyFactor::solve(std::span<const double> rhs) const {
  const Eigen::VectorXd& s = impl_->inv_scale;
  Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t i = 0; i < rhs.size(); ++i)
    b[static_cast<Eigen::Index>(i)] = rhs[i] * s[static_cast<Eigen::Index>(i)];
  Eigen::VectorXd z = impl_->ldlt.solve(b);
  // two refinement passes in the equilibrated system
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd r = b - impl_->mat * z;
    z += impl_->ldlt.solve(r);
  }
  if (!z.allFinite())
    throw SolveError("cholesky solve produced non-finite values (singular system)",
                     std::numeric_limits<double>::quiet_NaN(), 0);
  Eigen::VectorXd x = s.cwiseProduct(z);
  return {x.data(), x.data() + x.size()};
}

std::vector<double> cg_solve(const std::function<std::vector<double>(std::span<const double>)>& apply,
                             std::span<const double> rhs, std::span<const double> jacobi_diag,
                             double tolerance, std::size_t max_iterations,
                             std::span<const double> x0) {
  const std::size_t n = rhs.size();
  std::vector<double> x(n, 0.0);
  std::vector<double> r(rhs.begin(), rhs.end());
  if (!x0.empty()) {
    x.assign(x0.begin(), x0.end());
    const std::vector<double> ax = apply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ax[i];
  }
  std::vector<double> z(n), p(n), ap;
  const auto precond = [&] {
    for (std::size_t i = 0; i < n; ++i)
      z[i] = jacobi_diag[i] > 0.0 ? r[i] / jacobi_diag[i] : r[i];
  };
  const auto linf = [&] {
    double v = 0.0;
    for (double ri : r) v = std::max(v, std::abs(ri));
    return v;
  };
  double resid = linf();
  if (resid <= tolerance) return x;
  precond();
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    ap = apply(p);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0)) {
      // semidefinite stall: the Krylov space hit the kernel
      if (resid <= tolerance) return x;
      throw SolveError("cg: operator not positive definite along search direction", resid, it);
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    resid = linf();
    if (resid <= tolerance) return x;
    precond();
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolveError("cg: no convergence within max iterations", resid, max_iterations);
}

std::vector<double> solve_spd(const SparseMatrix& m, std::span<const double> rhs,
                              const LinearSolveOptions& opts) {
  if (m.rows() != m.cols()) throw std::invalid_argument("solve_spd: matrix not square");
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve_spd: rhs size mismatch");
  if (opts.method == SolveMethod::DirectCholesky) {
    CholeskyFactor f;
    f.factorize(m, opts.diagonal_shift);
    return f.solve(rhs);
  }
  const std::size_t maxit = opts.cg_max_iterations ? opts.cg_max_iterations : 20 * m.rows();
  std::vector<double> diag(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) diag[r] = m.entry(r, r) + opts.diagonal_shift;
  const double shift = opts.diagonal_shift;
  const auto apply = [&m, shift](std::span<const double> v) {
    std::vector<double> y = m.multiply(v);
    if (shift != 0.0)
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += shift * v[i];
    return y;
  };
  std::vector<double> x = cg_solve(apply, rhs, diag, opts.cg_tolerance, maxit);
  // multiply-back check so the advertised post-condition holds
  const double res = linf_residual(m, x, rhs, shift);
  if (res > opts.cg_tolerance * (1.0 + 1e-12))
    throw SolveError("cg: residual check failed", res, maxit);
  return x;
}

}  // namespace monocomp
