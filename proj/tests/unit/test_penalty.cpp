#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "monocomp/penalty.hpp"
#include "oracles.hpp"

using monocomp::Penalty;
using monocomp::PenaltyKind;
using monocomp::SmoothedPenalty;

namespace {

const std::vector<Penalty> kZoo = {
    Penalty::power_law(1.0, 0.5),  Penalty::power_law(0.3, 0.1), Penalty::power_law(2.0, 1.0),
    Penalty::scad(2.0, 3.0),       Penalty::scad(1.0, 4.0),      Penalty::scad(0.5, 2.5),
    Penalty::mcp(2.0, 3.0),        Penalty::mcp(1.0, 1.5),       Penalty::mcp(0.7, 5.0),
};

}  // namespace

TEST_SUITE_BEGIN("penalty");

TEST_CASE("phi closed-form values") {
  CHECK(Penalty::power_law(1.0, 0.5).phi(0.0) == 0.0);
  CHECK(Penalty::scad(2.0, 3.0).phi(10.0) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(Penalty::mcp(2.0, 3.0).phi(10.0) == doctest::Approx(6.0).epsilon(1e-14));
  // SCAD branches are continuous at |t| = lambda and lambda*tau
  const Penalty s = Penalty::scad(1.3, 2.7);
  CHECK(s.phi(1.3 - 1e-12) == doctest::Approx(s.phi(1.3 + 1e-12)).epsilon(1e-9));
  CHECK(s.phi(1.3 * 2.7 - 1e-12) == doctest::Approx(s.phi(1.3 * 2.7 + 1e-12)).epsilon(1e-9));
  const Penalty m = Penalty::mcp(1.3, 2.7);
  CHECK(m.phi(1.3 * 2.7 - 1e-12) == doctest::Approx(m.phi(1.3 * 2.7 + 1e-12)).epsilon(1e-9));
}

TEST_CASE("construction rejects invalid parameters") {
  CHECK_THROWS_AS(Penalty::power_law(-1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Penalty::power_law(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Penalty::power_law(1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(Penalty::scad(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Penalty::mcp(1.0, 0.7), std::invalid_argument);
  CHECK_NOTHROW(Penalty::power_law(0.0, 0.5));  // lambda = 0 drives the LS case
}

TEST_CASE("phi_prime values and domain error") {
  // plateau begins at lambda*tau: zero slope there, lambda - |t|/tau inside
  CHECK(Penalty::mcp(2.0, 2.5).phi_prime(5.0) == 0.0);
  CHECK(Penalty::mcp(2.0, 3.0).phi_prime(5.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(Penalty::scad(1.0, 4.0).phi_prime(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Penalty::power_law(1.0, 0.5).phi_prime(4.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(Penalty::power_law(1.0, 0.5).phi_prime(0.0), std::domain_error);
  CHECK(Penalty::power_law(2.0, 1.0).phi_prime(0.0) == 0.0);

  for (const Penalty& p : kZoo) {
    for (double t : {0.3, 0.9, 1.7, 4.2}) {
      const double fd = oracles::central_diff([&](double s) { return p.phi(s); }, t);
      CHECK(p.phi_prime(t) == doctest::Approx(fd).epsilon(1e-5));
      CHECK(p.phi_prime(-t) == doctest::Approx(-p.phi_prime(t)).epsilon(1e-14));
    }
  }
}

TEST_CASE("phi grid properties: even, nondecreasing, midpoint concave") {
  for (const Penalty& p : kZoo) {
    const std::size_t grid = 10000;
    double prev = 0.0;
    for (std::size_t i = 0; i <= grid; ++i) {
      const double t = -10.0 + 20.0 * i / grid;
      CHECK(p.phi(t) == doctest::Approx(p.phi(-t)).epsilon(1e-13));
      if (t >= 0.0) {
        CHECK(p.phi(t) >= prev - 1e-13);
        prev = p.phi(t);
      }
    }
    oracles::Rng rng(7);
    for (int k = 0; k < 200; ++k) {
      const double s = rng.uniform(0.0, 10.0), t = rng.uniform(0.0, 10.0);
      CHECK(p.phi(0.5 * (s + t)) >= 0.5 * (p.phi(s) + p.phi(t)) - 1e-12);
    }
  }
}

TEST_CASE("power-law homogeneity phi(a t) = a^tau phi(t)") {
  const Penalty p = Penalty::power_law(0.7, 0.3);
  oracles::Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const double a = rng.uniform(0.01, 5.0), t = rng.uniform(-4.0, 4.0);
    CHECK(p.phi(a * t) == doctest::Approx(std::pow(a, 0.3) * p.phi(t)).epsilon(1e-11));
  }
}

TEST_CASE("scad/mcp plateau: phi constant beyond lambda*tau") {
  for (const Penalty& p : {Penalty::scad(2.0, 3.0), Penalty::mcp(2.0, 3.0)}) {
    const double v = p.phi(p.lambda() * p.tau());
    for (double t : {6.0, 10.0, 1e3}) CHECK(p.phi(t) == doctest::Approx(v).epsilon(1e-14));
  }
}

TEST_CASE("psi branches and continuity at eps^2") {
  for (const Penalty& p : kZoo) {
    const SmoothedPenalty sp(p, 0.1);
    const double e2 = 0.01;
    CHECK(sp.psi(e2) == doctest::Approx(p.phi(0.1)).epsilon(1e-13));
    CHECK(sp.psi(e2 * (1 + 1e-10)) == doctest::Approx(sp.psi(e2 * (1 - 1e-10))).epsilon(1e-7));
    // t = 0: phi(eps) - phi'(eps) eps / 2
    CHECK(sp.psi(0.0) ==
          doctest::Approx(p.phi(0.1) - p.phi_prime(0.1) * 0.1 / 2.0).epsilon(1e-13));
  }
  const SmoothedPenalty pl(Penalty::power_law(1.0, 0.5), 0.01);
  CHECK(pl.psi(1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("psi_prime nonnegative and C1 chain rule") {
  for (const Penalty& p : kZoo) {
    const SmoothedPenalty sp(p, 0.05);
    oracles::Rng rng(13);
    for (int k = 0; k < 100; ++k) {
      const double t = rng.uniform(1e-4, 9.0);
      CHECK(sp.psi_prime(t) >= 0.0);
      // d/dt psi(t^2) = 2 t psi'(t^2)
      const double fd =
          oracles::central_diff([&](double s) { return sp.psi(s * s); }, t);
      const double an = 2.0 * t * sp.psi_prime(t * t);
      CHECK(an == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("weight closed forms") {
  const SmoothedPenalty pl(Penalty::power_law(1.0, 0.5), 0.1);
  CHECK(pl.weight(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  const SmoothedPenalty mc(Penalty::mcp(2.0, 3.0), 0.1);
  CHECK(mc.weight(10.0) == 0.0);
  for (const Penalty& p : kZoo) {
    const double eps = 0.07;
    const SmoothedPenalty sp(p, eps);
    CHECK(sp.weight(0.0) == doctest::Approx(p.phi_prime(eps) / eps).epsilon(1e-13));
    oracles::Rng rng(17);
    for (int k = 0; k < 50; ++k) {
      const double y = rng.uniform(-8.0, 8.0);
      CHECK(sp.weight(y) == doctest::Approx(sp.weight(-y)).epsilon(1e-14));
      CHECK(sp.weight(y) == doctest::Approx(2.0 * sp.psi_prime(y * y)).epsilon(1e-12));
      // consistency with the raw gradient where the eps branch is inactive
      if (std::abs(y) >= eps && p.phi_prime(std::abs(y)) > 0.0) {
        const double lhs = sp.weight(y) * y;
        const double rhs = p.phi_prime(std::abs(y)) * (y > 0 ? 1.0 : -1.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("phi_prime(eps)*eps -> 0 along eps = 10^-1..-8") {
  for (const Penalty& p : kZoo) {
    double first = 0.0, prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 8; ++k) {
      const double eps = std::pow(10.0, -k);
      const double v = p.phi_prime(eps) * eps;
      if (k == 1) first = v;
      CHECK(v >= 0.0);
      CHECK(v < prev);
      prev = v;
    }
    // the slowest case in the zoo is the power law with tau = 0.1, whose
    // ratio over seven decades is 10^-0.7
    CHECK(prev <= 0.5 * first);
  }
}

TEST_CASE("prox closed-form examples") {
  CHECK(Penalty::power_law(1.0, 1.0).prox(3.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  for (const Penalty& p : kZoo) CHECK(p.prox(0.0, 0.7) == 0.0);
  // derived: scan oracle at step 1e-6 over [-3,3]
  const Penalty p = Penalty::power_law(1.0, 0.5);
  const double scan = oracles::prox_scan(p, 2.0, 0.5, 3.0, 1e-6);
  CHECK(std::abs(p.prox(2.0, 0.5) - scan) <= 2e-6);
}

TEST_CASE("prox never loses to the grid scan") {
  oracles::Rng rng(23);
  for (const Penalty& p : kZoo) {
    for (int k = 0; k < 25; ++k) {
      const double v = rng.uniform(-6.0, 6.0);
      const double eta = rng.uniform(0.05, 3.0);
      const double z = p.prox(v, eta);
      const double zs = oracles::prox_scan(p, v, eta, 8.0, 1e-4);
      const auto f = [&](double t) { return 0.5 * (t - v) * (t - v) + eta * p.phi(t); };
      CHECK(f(z) <= f(zs) + 1e-8);
      CHECK(std::abs(z) <= std::abs(v) + 1e-12);  // shrinkage
      CHECK(p.prox(-v, eta) == doctest::Approx(-z).epsilon(1e-12));
    }
  }
}

TEST_CASE("psi uniform convergence sup |psi_eps - phi o sqrt| decreasing") {
  for (const Penalty& p : kZoo) {
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 8; ++k) {
      const SmoothedPenalty sp(p, std::pow(10.0, -k));
      double sup = 0.0;
      for (std::size_t i = 0; i <= 10000; ++i) {
        const double t = 10.0 * i / 10000;
        sup = std::max(sup, std::abs(sp.psi(t) - p.phi(std::sqrt(t))));
      }
      CHECK(sup <= prev * (1.0 + 1e-12) + 1e-300);
      prev = sup;
    }
  }
}

TEST_SUITE_END();
