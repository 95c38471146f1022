#include "monocomp/gallery/fracture.hpp"

#include <cmath>
#include <stdexcept>

namespace monocomp::gallery {

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Elastic: return "elastic";
    case Phase::Prefracture: return "prefracture";
    case Phase::Fracture: return "fracture";
  }
  return "?";
}

namespace {

/// Difference block of the 1-D operator: backward differences on 2N+1
/// unknowns with the cross-crack row (index N, 0-based) removed, material
/// applied per interval.
SparseMatrix fracture_1d_differences(const Fracture1DModel& model) {
  const std::size_t N = model.half_intervals;
  const std::size_t n = 2 * N + 1;
  SparseMatrix dbar = backward_difference(n, 1.0).delete_rows({N});
  if (!model.material.empty()) {
    if (model.material.size() != 2 * N)
      throw std::invalid_argument("fracture 1d: material must have 2N entries");
    dbar = dbar.scale_rows(model.material);
  }
  return dbar;
}

Phase label(double jump, double amp, const PhaseThresholds& th) {
  if (jump <= th.jump_rel * amp || amp == 0.0) return Phase::Elastic;
  if (jump >= th.fracture_frac * amp) return Phase::Fracture;
  return Phase::Prefracture;
}

struct StepResult {
  PhasePoint point;
  std::vector<double> u;
};

template <class Model, class Builder, class Energy>
PhaseTrace run_quasi_static(const Model& model, const QuasiStaticOptions& opts,
                            const Builder& build, const Energy& elastic, double amp_scale) {
  PhaseTrace trace;
  std::vector<double> u;
  for (double t = model.dt; t <= model.t_end + 1e-12; t += model.dt) {
    const CompositeProblem p = build(model, t);
    SolveReport rep = continuation_solve(p, u, opts.schedule, opts.linsolve);
    u = rep.x;
    const std::vector<double> jumps = p.lambda_op.multiply(u);
    double jump = 0.0;
    std::size_t jump_node = 0;
    for (std::size_t i = 0; i < jumps.size(); ++i)
      if (std::abs(jumps[i]) > jump) {
        jump = std::abs(jumps[i]);
        jump_node = i;
      }
    const double amp = amp_scale * t;
    PhasePoint pt;
    pt.t = t;
    pt.jump = jump;
    pt.elastic_energy = elastic(model, u);
    pt.j = j_value(p, u);
    pt.residual = rep.final_residual;
    pt.iterations = rep.total_inner_iterations;
    pt.phase = label(jump, amp, opts.thresholds);
    if (trace.first_open_time < 0.0 && pt.phase != Phase::Elastic) {
      trace.first_open_time = t;
      trace.first_open_node = jump_node;
    }
    if (opts.on_step) opts.on_step(pt);
    trace.points.push_back(pt);
    if (opts.keep_displacements) trace.displacements.push_back(u);
  }
  return trace;
}

}  // namespace

CompositeProblem build_fracture_1d(const Fracture1DModel& model, double t) {
  const std::size_t N = model.half_intervals;
  if (N < 2) throw std::invalid_argument("fracture 1d: N must be >= 2");
  const std::size_t n = 2 * N + 1;
  const SparseMatrix dbar = fracture_1d_differences(model);
  SparseMatrix tether = SparseMatrix::from_triplets(1, n, {{0, n - 1, model.gamma}});
  CompositeProblem p{
      vstack({&dbar, &tether}),
      std::vector<double>(n, 0.0),
      SparseMatrix::from_triplets(1, n, {{0, N - 1, -1.0}, {0, N, 1.0}}),
      model.penalty,
      static_cast<double>(N),
      CoercivityWitness::FullColumnRank};
  p.b.back() = model.gamma * t;
  return p;
}

double Fracture2DModel::datum_value(double t, double x, double y) const {
  switch (datum) {
    case BoundaryDatum::G1: return (2.0 * x - 0.5) * t;
    case BoundaryDatum::G2: return 2.0 * t * std::cos(4.0 * (y - 0.5)) * (x - 0.5);
    case BoundaryDatum::G3: return t * 0.01 * std::cos(2.0 * (y - 0.5)) * (x - 0.5);
  }
  return 0.0;
}

std::pair<double, double> fracture_2d_node(const Fracture2DModel& model, std::size_t l) {
  const std::size_t N = model.half_intervals;
  const std::size_t m = model.m();
  const std::size_t jx = l / m;
  const std::size_t iy = l % m;
  // columns N and N+1 (0-based) are the two crack lips, both at x = 0.5
  const double x = jx <= N ? static_cast<double>(jx) / (2.0 * N)
                           : static_cast<double>(jx - 1) / (2.0 * N);
  const double y = static_cast<double>(iy) / static_cast<double>(m - 1);
  return {x, y};
}

namespace {

struct Fracture2DOperators {
  SparseMatrix d1;  // material applied
  SparseMatrix d2;
  std::vector<bool> tether_active;  // per node
};

double material_at(const Fracture2DModel& model, bool left, double x, double y) {
  switch (model.material) {
    case MaterialField::Homogeneous: return 1.0;
    case MaterialField::TwoMaterial: return left ? 600.0 : 1.0;
    case MaterialField::Graded: return left ? 400.0 * std::exp(y) : 400.0 * y;
  }
  return 1.0;
}

Fracture2DOperators build_operators(const Fracture2DModel& model) {
  const std::size_t N = model.half_intervals;
  const std::size_t m = model.m();
  const SparseMatrix d = interior_difference(m, 1.0);
  const SparseMatrix im = SparseMatrix::identity(m);
  const SparseMatrix g1 = kronecker(im, d);
  const SparseMatrix g2 = kronecker(d, im);

  // G1 blocks N and N+1 (the lip columns) are removed wholesale; G2 loses the
  // block differencing across the crack pair.
  std::vector<std::size_t> rows1;
  for (std::size_t r = (m - 1) * N; r < (m - 1) * N + 2 * (m - 1); ++r) rows1.push_back(r);
  std::vector<std::size_t> rows2;
  for (std::size_t r = m * N; r < m * N + m; ++r) rows2.push_back(r);
  SparseMatrix d1 = g1.delete_rows(rows1);
  SparseMatrix d2 = g2.delete_rows(rows2);

  if (model.material != MaterialField::Homogeneous) {
    // D1 rows: y-differences within column jx (blocks 0..N-1 then N+2..m-1)
    std::vector<double> r1(d1.rows());
    for (std::size_t r = 0; r < d1.rows(); ++r) {
      const std::size_t block = r / (m - 1);
      const std::size_t jx = block < N ? block : block + 2;
      const std::size_t iy = r % (m - 1);
      const auto [x, y0] = fracture_2d_node(model, jx * m + iy);
      const auto [x1, y1] = fracture_2d_node(model, jx * m + iy + 1);
      r1[r] = material_at(model, jx <= N, x, 0.5 * (y0 + y1));
    }
    d1 = d1.scale_rows(r1);
    // D2 rows: x-differences between columns k,k+1 (k = 0..N-1, N+1..m-2)
    std::vector<double> r2(d2.rows());
    for (std::size_t r = 0; r < d2.rows(); ++r) {
      const std::size_t block = r / m;
      const std::size_t k = block < N ? block : block + 1;
      const std::size_t iy = r % m;
      const auto [xa, y] = fracture_2d_node(model, k * m + iy);
      const auto [xb, yb] = fracture_2d_node(model, (k + 1) * m + iy);
      r2[r] = material_at(model, k < N, 0.5 * (xa + xb), y);
    }
    d2 = d2.scale_rows(r2);
  }

  Fracture2DOperators ops{std::move(d1), std::move(d2), std::vector<bool>(m * m, false)};
  for (std::size_t l = 0; l < m * m; ++l) {
    const std::size_t jx = l / m;
    const std::size_t iy = l % m;
    const bool boundary = jx == 0 || jx == m - 1 || iy == 0 || iy == m - 1;
    ops.tether_active[l] = model.tether == TetherMode::FullGrid || boundary;
  }
  return ops;
}

}  // namespace

CompositeProblem build_fracture_2d(const Fracture2DModel& model, double t) {
  const std::size_t N = model.half_intervals;
  if (N < 2) throw std::invalid_argument("fracture 2d: N must be >= 2");
  const std::size_t m = model.m();
  const Fracture2DOperators ops = build_operators(model);

  std::vector<SparseMatrix::Triplet> tether_trips;
  for (std::size_t l = 0; l < m * m; ++l)
    if (ops.tether_active[l]) tether_trips.push_back({l, l, model.gamma});
  const SparseMatrix tether = SparseMatrix::from_triplets(m * m, m * m, std::move(tether_trips));

  std::vector<SparseMatrix::Triplet> df_trips;
  for (std::size_t i = 0; i < m; ++i) {
    df_trips.push_back({i, N * m + i, -1.0});
    df_trips.push_back({i, (N + 1) * m + i, 1.0});
  }

  CompositeProblem p{
      vstack({&ops.d1, &ops.d2, &tether}),
      {},
      SparseMatrix::from_triplets(m, m * m, std::move(df_trips)),
      model.penalty,
      1.0,
      CoercivityWitness::FullColumnRank};
  p.b.assign(p.a.rows(), 0.0);
  const std::size_t diff_rows = ops.d1.rows() + ops.d2.rows();
  for (std::size_t l = 0; l < m * m; ++l) {
    if (!ops.tether_active[l]) continue;
    const auto [x, y] = fracture_2d_node(model, l);
    p.b[diff_rows + l] = model.gamma * model.datum_value(t, x, y);
  }
  return p;
}

double elastic_energy_1d(const Fracture1DModel& model, std::span<const double> u) {
  const SparseMatrix dbar = fracture_1d_differences(model);
  const std::vector<double> du = dbar.multiply(u);
  double e = 0.0;
  for (double v : du) e += v * v;
  return static_cast<double>(model.half_intervals) * e;
}

double elastic_energy_2d(const Fracture2DModel& model, std::span<const double> u) {
  const Fracture2DOperators ops = build_operators(model);
  double e = 0.0;
  for (const SparseMatrix* d : {&ops.d1, &ops.d2}) {
    const std::vector<double> du = d->multiply(u);
    for (double v : du) e += v * v;
  }
  return e;
}

bool PhaseTrace::has_phase(Phase p) const {
  for (const auto& pt : points)
    if (pt.phase == p) return true;
  return false;
}

double PhaseTrace::first_time(Phase p) const {
  for (const auto& pt : points)
    if (pt.phase == p) return pt.t;
  return -1.0;
}

PhaseTrace quasi_static_run(const Fracture1DModel& model, const QuasiStaticOptions& opts) {
  return run_quasi_static(
      model, opts, [](const Fracture1DModel& m, double t) { return build_fracture_1d(m, t); },
      [](const Fracture1DModel& m, std::span<const double> u) { return elastic_energy_1d(m, u); },
      1.0);
}

PhaseTrace quasi_static_run(const Fracture2DModel& model, const QuasiStaticOptions& opts) {
  // boundary-datum amplitude scales linearly in t for all three g's
  double amp1 = 0.0;
  const std::size_t m = model.m();
  for (std::size_t l = 0; l < m * m; ++l) {
    const std::size_t jx = l / m;
    const std::size_t iy = l % m;
    if (jx != 0 && jx != m - 1 && iy != 0 && iy != m - 1) continue;
    const auto [x, y] = fracture_2d_node(model, l);
    amp1 = std::max(amp1, std::abs(model.datum_value(1.0, x, y)));
  }
  return run_quasi_static(
      model, opts, [](const Fracture2DModel& mo, double t) { return build_fracture_2d(mo, t); },
      [](const Fracture2DModel& mo, std::span<const double> u) { return elastic_energy_2d(mo, u); },
      amp1);
}

}  // namespace monocomp::gallery
