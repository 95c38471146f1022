#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths: dense linear algebra by straight loops, brute-force
// scalar scans, finite differences, and a seeded instance generator.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "monocomp/problem.hpp"

namespace oracles {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_of(const monocomp::SparseMatrix& m) { return m.to_dense(); }

inline std::vector<double> dense_matvec(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Dense dense_kron(const Dense& a, const Dense& b) {
  const std::size_t ar = a.size(), ac = a.empty() ? 0 : a[0].size();
  const std::size_t br = b.size(), bc = b.empty() ? 0 : b[0].size();
  Dense out(ar * br, std::vector<double>(ac * bc, 0.0));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

inline Dense dense_matmul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size(), m = b[0].size(), k = b.size();
  Dense c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
  return c;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Independent evaluation of qscale|Ax-b|^2 + sum phi((Lx)_i) on dense copies.
inline double dense_objective(const monocomp::CompositeProblem& p, const std::vector<double>& x) {
  const auto ax = dense_matvec(dense_of(p.a), x);
  double fit = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) fit += (ax[i] - p.b[i]) * (ax[i] - p.b[i]);
  double pen = 0.0;
  for (double y : dense_matvec(dense_of(p.lambda_op), x)) pen += p.penalty.phi(y);
  return p.qscale * fit + pen;
}

/// Brute-force scan of min_z 0.5 (z-v)^2 + eta phi(z) over [-lim, lim].
inline double prox_scan(const monocomp::Penalty& pen, double v, double eta, double lim,
                        double step) {
  double best_z = 0.0;
  double best_f = 0.5 * v * v;  // z = 0
  for (double z = -lim; z <= lim; z += step) {
    const double f = 0.5 * (z - v) * (z - v) + eta * pen.phi(z);
    if (f < best_f) {
      best_f = f;
      best_z = z;
    }
  }
  return best_z;
}

inline double central_diff(const std::function<double(double)>& f, double t, double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Deterministic uniform in [lo, hi].
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((gen_() >> 11) * 0x1.0p-53);
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

 private:
  std::mt19937_64 gen_;
};

/// Random full-column-rank composite instance with m >= n.
inline monocomp::CompositeProblem random_instance(std::uint64_t seed, std::size_t n_max = 50,
                                                  monocomp::PenaltyKind kind = monocomp::PenaltyKind::PowerLaw) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.index(n_max - 1);
  const std::size_t m = n + rng.index(n_max);
  const std::size_t r = 1 + rng.index(n_max);
  std::vector<monocomp::SparseMatrix::Triplet> at, lt;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      at.push_back({i, j, rng.uniform(-1.0, 1.0)});
  // keep A well-conditioned enough for a reliable rank witness
  for (std::size_t j = 0; j < n; ++j) at.push_back({j, j, 2.0});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform(0.0, 1.0) < 0.4) lt.push_back({i, j, rng.uniform(-1.0, 1.0)});
  double tau = 0.0, lambda = 0.0;
  switch (kind) {
    case monocomp::PenaltyKind::PowerLaw:
      tau = rng.uniform(0.2, 1.0);
      lambda = rng.uniform(0.01, 0.5);
      break;
    default:
      tau = rng.uniform(1.5, 4.0);
      lambda = rng.uniform(0.05, 0.5);
      break;
  }
  monocomp::CompositeProblem p{
      monocomp::SparseMatrix::from_triplets(m, n, std::move(at)),
      {},
      monocomp::SparseMatrix::from_triplets(r, n, std::move(lt)),
      monocomp::Penalty(kind, lambda, tau),
      0.5,
      monocomp::CoercivityWitness::FullColumnRank};
  p.b.resize(m);
  for (double& v : p.b) v = rng.uniform(-1.0, 1.0);
  return p;
}

}  // namespace oracles
