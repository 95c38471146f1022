#include "monocomp/gallery/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace monocomp::gallery {

std::vector<double> heat_semigroup_apply(std::size_t n, double s, std::span<const double> v) {
  if (v.size() != n) throw std::invalid_argument("heat semigroup: size mismatch");
  const double dx = 1.0 / static_cast<double>(n + 1);
  const double pi = std::numbers::pi;
  std::vector<double> out(n, 0.0);
  // eigenpairs: mu_j = 2/dx^2 (cos(j pi dx) - 1), phi_j(i) = sin(j pi i dx),
  // |phi_j|^2 = (n+1)/2
  for (std::size_t j = 1; j <= n; ++j) {
    double coef = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      coef += std::sin(j * pi * i * dx) * v[i - 1];
    const double mu = 2.0 / (dx * dx) * (std::cos(j * pi * dx) - 1.0);
    coef *= std::exp(mu * s) / (0.5 * (n + 1));
    for (std::size_t i = 1; i <= n; ++i)
      out[i - 1] += coef * std::sin(j * pi * i * dx);
  }
  return out;
}

ContinuationSchedule control_schedule() {
  ContinuationSchedule s;
  s.eps_start = 1e-3;
  s.eps_floor = 1e-8;
  s.inner_tolerance = 1e-3;
  return s;
}

ControlInstance build_control(double lambda, double tau) {
  const std::size_t n = 49;
  const std::size_t m = 50;
  const double dx = 1.0 / 50.0;
  const double dt = 1.0 / 50.0;
  const double t_end = 1.0;

  std::vector<double> b1(n, 0.0), b2(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = i * dx;
    if (x > 0.2 && x < 0.3) b1[i - 1] = 1.0;
    if (x > 0.6 && x < 0.7) b2[i - 1] = 1.0;
  }

  std::vector<SparseMatrix::Triplet> trips;
  for (std::size_t k = 0; k < m; ++k) {
    const double s = t_end - k * dt - dt / 2.0;
    const std::vector<double> c1 = heat_semigroup_apply(n, s, b1);
    const std::vector<double> c2 = heat_semigroup_apply(n, s, b2);
    for (std::size_t i = 0; i < n; ++i) {
      if (c1[i] != 0.0) trips.push_back({i, k, dt * c1[i]});
      if (c2[i] != 0.0) trips.push_back({i, m + k, dt * c2[i]});
    }
  }

  ControlInstance inst{
      {SparseMatrix::from_triplets(n, 2 * m, std::move(trips)),
       std::vector<double>(n, 0.0), SparseMatrix::identity(2 * m),
       Penalty::power_law(lambda, tau), 0.5, CoercivityWitness::JointKernel},
      m,
      std::vector<double>(n, 0.0)};
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = i * dx;
    inst.target[i - 1] = 0.4 * std::exp(-70.0 * (x - 0.7) * (x - 0.7));
  }
  inst.problem.b = inst.target;
  return inst;
}

}  // namespace monocomp::gallery
