#include "monocomp/gallery/mmatrix.hpp"

#include <cmath>
#include <stdexcept>

namespace monocomp::gallery {

MMatrixInstance build_mmatrix(std::size_t n, double lambda, double tau) {
  if (n < 2) throw std::invalid_argument("mmatrix: n must be >= 2");
  const SparseMatrix d = dirichlet_difference(n, static_cast<double>(n + 1));
  const SparseMatrix in = SparseMatrix::identity(n);
  const SparseMatrix g1 = kronecker(in, d);
  const SparseMatrix g2 = kronecker(d, in);
  SparseMatrix a = vstack({&g1, &g2});

  // node (i, j) -> linear index j*n + i; x1 along the fast index
  const double h = 1.0 / static_cast<double>(n + 1);
  std::vector<double> f(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = static_cast<double>(i + 1) * h;
      const double x2 = static_cast<double>(j + 1) * h;
      f[j * n + i] = 10.0 * x1 * std::sin(5.0 * x2) * std::cos(7.0 * x1);
    }

  const SparseMatrix lap = normal_operator(a, SparseMatrix(0, n * n), {}, 1.0);
  LinearSolveOptions direct;
  const std::vector<double> z = solve_spd(lap, f, direct);
  MMatrixInstance inst{
      {std::move(a), {}, SparseMatrix::identity(n * n), Penalty::power_law(lambda, tau), 0.5,
       CoercivityWitness::FullColumnRank},
      std::move(f),
      z};
  inst.problem.b = inst.problem.a.multiply(z);
  return inst;
}

}  // namespace monocomp::gallery
