#pragma once

#include <string>

namespace monocomp {

enum class PenaltyKind { PowerLaw, Scad, Mcp };

std::string to_string(PenaltyKind k);
PenaltyKind penalty_kind_from_string(const std::string& s);

/// Concave sparsity penalty phi(t): the power law lambda*|t|^tau with
/// tau in (0,1], SCAD, or MCP (tau > 1 for the latter two). phi is even,
/// vanishes at 0, is nondecreasing and concave on t >= 0.
///
/// lambda = 0 is admitted and makes phi identically zero, so the same
/// machinery drives plain least-squares runs.
class Penalty {
 public:
  Penalty(PenaltyKind kind, double lambda, double tau);

  static Penalty power_law(double lambda, double tau) { return {PenaltyKind::PowerLaw, lambda, tau}; }
  static Penalty scad(double lambda, double tau) { return {PenaltyKind::Scad, lambda, tau}; }
  static Penalty mcp(double lambda, double tau) { return {PenaltyKind::Mcp, lambda, tau}; }

  PenaltyKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }

  double phi(double t) const;

  /// Derivative of phi away from the origin; odd in t. Throws
  /// std::domain_error at t = 0 for the power law with tau < 1 (the
  /// derivative is unbounded there; use SmoothedPenalty::weight instead).
  double phi_prime(double t) const;

  /// argmin_z 0.5*(z-v)^2 + eta*phi(z). Closed-form soft threshold for
  /// tau = 1; piecewise candidates for SCAD/MCP; safeguarded root finding
  /// plus value comparison against z = 0 for the power law with tau < 1.
  /// Ties between 0 and an interior candidate break toward 0.
  double prox(double v, double eta) const;

 private:
  PenaltyKind kind_;
  double lambda_;
  double tau_;
};

/// C^1 smoothing Psi_eps of t -> phi(sqrt(t)): quadratic-in-sqrt branch
/// replaced by a linear one on [0, eps^2], phi(sqrt(t)) beyond.
class SmoothedPenalty {
 public:
  SmoothedPenalty(Penalty base, double epsilon);

  const Penalty& base() const { return base_; }
  double epsilon() const { return epsilon_; }

  /// Psi_eps(t) for t >= 0.
  double psi(double t) const;

  /// Psi_eps'(t) = 1 / max{2 eps/phi'(eps), 2 sqrt(t)/phi'(sqrt(t))} >= 0.
  double psi_prime(double t) const;

  /// Reweighting coefficient of the optimality condition:
  /// weight(y) = 1 / max{eps/phi'(eps), |y|/phi'(|y|)} = 2 Psi_eps'(y^2).
  /// Zero on the SCAD/MCP plateau (the |y|/phi'(|y|) ratio is +inf there).
  double weight(double y) const;

 private:
  Penalty base_;
  double epsilon_;
};

}  // namespace monocomp
