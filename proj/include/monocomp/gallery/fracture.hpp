#pragma once

#include <functional>
#include <string>
#include <vector>

#include "monocomp/solver.hpp"

namespace monocomp::gallery {

enum class Phase { Elastic, Prefracture, Fracture };
std::string to_string(Phase p);

/// Labels from the jump amplitude relative to the boundary-datum amplitude:
/// jump <= jump_rel * amp -> elastic; jump >= fracture_frac * amp -> fracture
/// (the opening carries essentially the whole imposed displacement; the
/// residual bridging force and elastic energy are negligible); else
/// prefracture.
struct PhaseThresholds {
  double jump_rel = 1e-6;
  double fracture_frac = 0.98;
};

struct Fracture1DModel {
  std::size_t half_intervals = 100;  // N; 2N intervals, 2N+1 unknowns
  Penalty penalty = Penalty::power_law(1.0, 0.5);
  double gamma = 50.0;
  std::vector<double> material;  // per-interval a_i, size 2N; empty = homogeneous
  double t_end = 3.0;
  double dt = 0.01;
};

CompositeProblem build_fracture_1d(const Fracture1DModel& model, double t);

enum class BoundaryDatum { G1, G2, G3 };
enum class MaterialField { Homogeneous, TwoMaterial, Graded };
enum class TetherMode { BoundaryOnly, FullGrid };

struct Fracture2DModel {
  std::size_t half_intervals = 80;  // N; m = 2N+2, m^2 unknowns
  Penalty penalty = Penalty::power_law(1.0, 0.5);
  double gamma = 50.0;
  BoundaryDatum datum = BoundaryDatum::G1;
  MaterialField material = MaterialField::Homogeneous;
  TetherMode tether = TetherMode::BoundaryOnly;
  double t_end = 3.0;
  double dt = 0.01;

  std::size_t m() const { return 2 * half_intervals + 2; }
  double datum_value(double t, double x, double y) const;
};

CompositeProblem build_fracture_2d(const Fracture2DModel& model, double t);

/// (x, y) coordinates of node with linear index l = jx*m + iy.
std::pair<double, double> fracture_2d_node(const Fracture2DModel& model, std::size_t l);

struct PhasePoint {
  double t = 0.0;
  double jump = 0.0;            // max |D_f u|
  double elastic_energy = 0.0;  // qscale * |A u - b|^2 over difference rows
  double j = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  Phase phase = Phase::Elastic;
};

struct PhaseTrace {
  std::vector<PhasePoint> points;
  std::vector<std::vector<double>> displacements;  // per step, if kept
  /// First time any crack node opened (jump above the elastic threshold),
  /// and which node (2-D; 0 in 1-D).
  double first_open_time = -1.0;
  std::size_t first_open_node = 0;

  bool has_phase(Phase p) const;
  double first_time(Phase p) const;  // -1 if never
};

struct QuasiStaticOptions {
  ContinuationSchedule schedule;
  LinearSolveOptions linsolve;
  PhaseThresholds thresholds;
  bool keep_displacements = false;
  std::function<void(const PhasePoint&)> on_step;  // optional progress hook

  QuasiStaticOptions() {
    schedule.inner_tolerance = 1e-10;
    schedule.inner_max_iterations = 400;
  }
};

PhaseTrace quasi_static_run(const Fracture1DModel& model, const QuasiStaticOptions& opts);
PhaseTrace quasi_static_run(const Fracture2DModel& model, const QuasiStaticOptions& opts);

/// Elastic energy restricted to the difference rows (boundary tether rows
/// excluded), i.e. qscale * |R D u|^2.
double elastic_energy_1d(const Fracture1DModel& model, std::span<const double> u);
double elastic_energy_2d(const Fracture2DModel& model, std::span<const double> u);

}  // namespace monocomp::gallery
