#include <doctest.h>

#include <cmath>

#include "monocomp/solver.hpp"
#include "oracles.hpp"

using namespace monocomp;

namespace {

CompositeProblem scalar_problem(double lambda = 1.0, double tau = 0.5) {
  CompositeProblem p{SparseMatrix::identity(1),
                     {1.0},
                     SparseMatrix::identity(1),
                     Penalty::power_law(lambda, tau),
                     0.5,
                     CoercivityWitness::FullColumnRank};
  return p;
}

ContinuationSchedule quick_sched(double tol = 1e-10) {
  ContinuationSchedule s;
  s.inner_tolerance = tol;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("problem validation catches bad witnesses and shapes") {
  CompositeProblem p = scalar_problem();
  CHECK_NOTHROW(p.validate());
  p.b = {1.0, 2.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  // 1x2 A has a kernel: rank witness must fail
  CompositeProblem q{SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}}),
                     {1.0},
                     SparseMatrix::identity(2),
                     Penalty::power_law(1.0, 0.5),
                     0.5,
                     CoercivityWitness::FullColumnRank};
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q.witness = CoercivityWitness::JointKernel;  // Ker(A) cap Ker(I) = 0
  CHECK_NOTHROW(q.validate());
}

TEST_CASE("j_value examples and dense oracle") {
  CompositeProblem p = scalar_problem();
  p.b = {0.0};
  CHECK(j_value(p, std::vector<double>{0.0}) == 0.0);
  p.b = {1.0};
  CHECK(j_value(p, std::vector<double>{1.0}) == doctest::Approx(1.0).epsilon(1e-14));

  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const CompositeProblem q = oracles::random_instance(seed, 10);
    oracles::Rng rng(seed + 100);
    std::vector<double> x(q.dim());
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    CHECK(j_value(q, x) == doctest::Approx(oracles::dense_objective(q, x)).epsilon(1e-12));
  }
}

TEST_CASE("j_eps examples: linear branch and convergence to j") {
  CompositeProblem p = scalar_problem();
  // x with Lambda x = 0: value is qscale|Ax-b|^2 + r * psi(0)
  const SmoothedPenalty sp(p.penalty, 0.1);
  CHECK(j_eps_value(p, 0.1, std::vector<double>{0.0}) ==
        doctest::Approx(0.5 + sp.psi(0.0)).epsilon(1e-14));
  // eps -> 0: j_eps -> j on a fixed x
  const std::vector<double> x{0.3};
  double prev_gap = std::numeric_limits<double>::max();
  for (int k = 1; k <= 8; ++k) {
    const double gap = std::abs(j_eps_value(p, std::pow(10.0, -k), x) - j_value(p, x));
    CHECK(gap <= prev_gap + 1e-15);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 1e-6);
}

TEST_CASE("optimality residual: scalar closed form and FD gradient") {
  CompositeProblem p = scalar_problem();
  const double eps = 0.1;
  const SmoothedPenalty sp(p.penalty, eps);
  // residual(x) = (x-1) + w(x) x at qscale = 1/2
  for (double x : {0.4, 1.0, 2.5}) {
    const auto r = optimality_residual(p, eps, std::vector<double>{x});
    CHECK(r[0] == doctest::Approx((x - 1.0) + sp.weight(x) * x).epsilon(1e-13));
  }
  // fixed point of the frozen-weight equation has zero residual
  const double w1 = sp.weight(1.0);
  const double xf = 1.0 / (1.0 + w1);
  // residual at the *frozen* weight: (xf-1) + w1*xf = 0 by construction
  CHECK((xf - 1.0) + w1 * xf == doctest::Approx(0.0).epsilon(1e-15));

  for (std::uint64_t seed = 201; seed <= 250; ++seed) {
    const CompositeProblem q = oracles::random_instance(seed, 8);
    oracles::Rng rng(seed);
    std::vector<double> x(q.dim());
    for (double& v : x) v = rng.uniform(-1.5, 1.5);
    const double e = 0.05;
    const auto r = optimality_residual(q, e, x);
    double scale = 1.0;
    for (double v : r) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto f = [&](double t) {
        std::vector<double> xx = x;
        xx[i] = t;
        return j_eps_value(q, e, xx);
      };
      CHECK(std::abs(r[i] - oracles::central_diff(f, x[i])) <= 1e-5 * scale);
    }
  }
}

TEST_CASE("inner_solve scalar first step lands at 2/3") {
  CompositeProblem p = scalar_problem();
  ContinuationSchedule s = quick_sched(1e-30);  // force full iteration budget
  s.inner_max_iterations = 1;
  const auto rep = inner_solve(p, 0.1, std::vector<double>{1.0}, s, {});
  CHECK(rep.x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("inner_solve with lambda = 0 reaches least squares in one step") {
  CompositeProblem p = oracles::random_instance(301, 8);
  p.penalty = Penalty::power_law(0.0, 0.5);
  ContinuationSchedule s = quick_sched(1e-12);
  const auto rep = inner_solve(p, 0.1, std::vector<double>(p.dim(), 0.5), s, {});
  CHECK(rep.total_inner_iterations <= 1);
  // residual of the normal equations at the result
  const auto r = optimality_residual(p, 0.1, rep.x);
  for (double v : r) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("inner_solve returns immediately from a fixed point") {
  CompositeProblem p = scalar_problem();
  ContinuationSchedule s = quick_sched(1e-12);
  const auto first = inner_solve(p, 0.1, std::vector<double>{1.0}, s, {});
  CHECK(first.converged);
  const auto again = inner_solve(p, 0.1, first.x, s, {});
  CHECK(again.total_inner_iterations == 0);
  CHECK(again.converged);
}

TEST_CASE("strict descent and quantified descent hold on seeded instances") {
  for (std::uint64_t seed = 401; seed <= 420; ++seed) {
    const PenaltyKind kind = seed % 3 == 0   ? PenaltyKind::PowerLaw
                             : seed % 3 == 1 ? PenaltyKind::Scad
                                             : PenaltyKind::Mcp;
    const CompositeProblem p = oracles::random_instance(seed, 14, kind);
    ContinuationSchedule s = quick_sched(1e-9);
    const auto rep = continuation_solve(p, {}, s, {});
    for (const StageTrace& st : rep.stages) {
      for (std::size_t k = 1; k < st.j_eps.size(); ++k) {
        CHECK(st.j_eps[k] <=
              st.j_eps[k - 1] + 1e-12 * std::max(1.0, std::abs(st.j_eps[k - 1])));
      }
      for (double gap : st.descent_gaps) CHECK(gap <= 1e-10);
    }
  }
}

TEST_CASE("fixed-point consistency: restarting from the solution barely moves J") {
  const CompositeProblem p = oracles::random_instance(431, 12);
  ContinuationSchedule s = quick_sched(1e-9);
  const auto rep = continuation_solve(p, {}, s, {});
  const double eps_last = rep.stages.back().eps;
  const auto again = inner_solve(p, eps_last, rep.x, s, {});
  double l1 = 0.0;
  for (double v : rep.x) l1 += std::abs(v);
  CHECK(std::abs(j_eps_value(p, eps_last, again.x) - j_eps_value(p, eps_last, rep.x)) <=
        s.inner_tolerance * std::max(1.0, l1));
}

TEST_CASE("continuation with start = floor equals one inner solve") {
  const CompositeProblem p = oracles::random_instance(443, 10);
  ContinuationSchedule s = quick_sched(1e-9);
  s.eps_start = s.eps_floor = 1e-3;
  const auto c = continuation_solve(p, {}, s, {});
  const auto i = inner_solve(p, 1e-3, default_start(p, {}), s, {});
  CHECK(c.stages.size() == 1);
  REQUIRE(c.x.size() == i.x.size());
  for (std::size_t k = 0; k < c.x.size(); ++k) CHECK(c.x[k] == i.x[k]);
}

TEST_CASE("eps -> 0 consistency: J(x_eps) trend nonincreasing over stages") {
  for (std::uint64_t seed : {461u, 462u, 463u}) {
    const CompositeProblem p = oracles::random_instance(seed, 10);
    ContinuationSchedule s = quick_sched(1e-10);
    const auto rep = continuation_solve(p, {}, s, {});
    for (std::size_t k = 1; k < rep.stages.size(); ++k)
      CHECK(rep.stages[k].j_unreg.back() <= rep.stages[k - 1].j_unreg.back() + 1e-6);
  }
}

TEST_CASE("desk-scale oracle optimality on n <= 4 problems") {
  // refined multi-start grid search as an independent optimum witness
  for (std::uint64_t seed = 471; seed <= 478; ++seed) {
    oracles::Rng rng(seed);
    const std::size_t n = 2 + rng.index(3);
    const std::size_t m = n + rng.index(3);
    std::vector<SparseMatrix::Triplet> at;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) at.push_back({i, j, rng.uniform(-1.0, 1.0)});
    for (std::size_t j = 0; j < n; ++j) at.push_back({j, j, 1.5});
    CompositeProblem p{SparseMatrix::from_triplets(m, n, std::move(at)),
                       {},
                       SparseMatrix::identity(n),
                       Penalty::power_law(0.08, 0.5),
                       0.5,
                       CoercivityWitness::FullColumnRank};
    p.b.resize(m);
    for (double& v : p.b) v = rng.uniform(-1.5, 1.5);

    ContinuationSchedule s = quick_sched(1e-10);
    const auto rep = continuation_solve(p, {}, s, {});
    const double j_solver = j_value(p, rep.x);

    // coarse scan then local zoom
    std::vector<double> best(n, 0.0);
    double best_f = j_value(p, best);
    std::vector<double> x(n, 0.0);
    const std::function<void(std::size_t, double)> scan = [&](std::size_t dim, double step) {
      if (dim == n) {
        const double f = j_value(p, x);
        if (f < best_f) {
          best_f = f;
          best = x;
        }
        return;
      }
      for (double v = -3.0; v <= 3.0 + 1e-12; v += step) {
        x[dim] = v;
        scan(dim + 1, step);
      }
    };
    scan(0, 0.25);
    for (double step : {0.05, 0.01, 0.002, 0.0005, 1e-4, 2e-5}) {
      const std::vector<double> center = best;
      const std::function<void(std::size_t)> zoom = [&](std::size_t dim) {
        if (dim == n) {
          const double f = j_value(p, x);
          if (f < best_f) {
            best_f = f;
            best = x;
          }
          return;
        }
        for (int o = -4; o <= 4; ++o) {
          x[dim] = center[dim] + o * step;
          zoom(dim + 1);
        }
      };
      zoom(0);
    }
    CHECK(j_solver <= best_f + 1e-4);
  }
}

TEST_CASE("lambda sweep: fidelity decreasing, exact-range datum") {
  // b in range(A): b_tilde = b
  CompositeProblem p = oracles::random_instance(481, 8);
  const std::size_t n = p.dim();
  std::vector<double> z(n, 0.7);
  p.b = p.a.multiply(z);
  ContinuationSchedule s = quick_sched(1e-10);
  const auto res = asymptotic_lambda_sweep(p, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, s, {});
  for (std::size_t i = 0; i < p.b.size(); ++i)
    CHECK(res.b_tilde[i] == doctest::Approx(p.b[i]).epsilon(1e-8));
  for (std::size_t k = 1; k < res.rows.size(); ++k)
    CHECK(res.rows[k].fidelity <= res.rows[k - 1].fidelity * 1.05 + 1e-12);
  CHECK(res.rows.back().fidelity <= 1e-3);

  // square invertible A: the limit solves Ax = b
  CompositeProblem q = scalar_problem();
  const auto res2 = asymptotic_lambda_sweep(q, {1e-2, 1e-4, 1e-6}, s, {});
  CHECK(res2.rows.back().fidelity <= 1e-3);

  CompositeProblem bad = oracles::random_instance(482, 8);
  bad.penalty = Penalty::scad(1.0, 3.0);
  CHECK_THROWS_AS(asymptotic_lambda_sweep(bad, {1e-2}, s, {}), std::invalid_argument);
}

TEST_CASE("tau sweep approaches the support count") {
  // 5-variable instance with a known sparse optimum
  CompositeProblem p{SparseMatrix::identity(5),
                     {2.0, 0.0, -1.5, 0.0, 0.9},
                     SparseMatrix::identity(5),
                     Penalty::power_law(0.05, 0.5),
                     0.5,
                     CoercivityWitness::FullColumnRank};
  ContinuationSchedule s = quick_sched(1e-10);
  s.eps_floor = 1e-8;
  const auto res = asymptotic_tau_sweep(p, {0.5, 0.2, 0.1, 0.05, 0.01}, s, {});
  const auto& last = res.rows.back();
  CHECK(last.tau == 0.01);
  CHECK(std::abs(last.quasi_norm - static_cast<double>(last.support_size)) <= 0.5);
  CHECK(res.support_threshold > 0.0);
  // entry y = 0.5 alone: 0.5^tau -> 1 as tau -> 0
  CHECK(std::pow(0.5, 0.01) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("solver failure propagates with stage context") {
  // A = 0 and a Lambda that misses a coordinate leave a singular system
  CompositeProblem p{SparseMatrix(2, 2), {0.0, 0.0},
                     SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}}),
                     Penalty::power_law(1.0, 0.5), 0.5, CoercivityWitness::JointKernel};
  ContinuationSchedule s = quick_sched(1e-10);
  CHECK_THROWS_AS(continuation_solve(p, std::vector<double>{1.0, 1.0}, s, {}),
                  SolveError);
}

TEST_SUITE_END();
