#pragma once

#include "monocomp/solver.hpp"

namespace monocomp::gallery {

/// Sparse optimal control of the 1-D heat equation: two actuators with
/// indicator profiles on (.2,.3) and (.6,.7), 49 interior nodes, 50 midpoint
/// time steps on [0,1], target y_d(x) = 0.4 exp(-70 (x-.7)^2). The 49 x 100
/// operator maps the stacked control vector (u1, u2) to y(1).
struct ControlInstance {
  CompositeProblem problem;
  std::size_t controls_per_actuator = 50;  // u = (u1^1..u1^50, u2^1..u2^50)
  std::vector<double> target;              // y_d on the interior grid
};

ControlInstance build_control(double lambda = 1e-4, double tau = 0.5);

/// e^{As} v for the second-order finite-difference Dirichlet Laplacian on
/// n interior nodes (spacing 1/(n+1)), via the analytic sine eigenbasis.
std::vector<double> heat_semigroup_apply(std::size_t n, double s, std::span<const double> v);

/// Schedule the paper uses for this instance (eps 1e-3 down to 1e-8).
ContinuationSchedule control_schedule();

}  // namespace monocomp::gallery
