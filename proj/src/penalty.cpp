#include "monocomp/penalty.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace monocomp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double sign(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }
}  // namespace

std::string to_string(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::PowerLaw: return "power";
    case PenaltyKind::Scad: return "scad";
    case PenaltyKind::Mcp: return "mcp";
  }
  return "?";
}

PenaltyKind penalty_kind_from_string(const std::string& s) {
  if (s == "power" || s == "powerlaw" || s == "ltau") return PenaltyKind::PowerLaw;
  if (s == "scad") return PenaltyKind::Scad;
  if (s == "mcp") return PenaltyKind::Mcp;
  throw std::invalid_argument("unknown penalty kind: " + s);
}

Penalty::Penalty(PenaltyKind kind, double lambda, double tau)
    : kind_(kind), lambda_(lambda), tau_(tau) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("penalty: lambda must be >= 0");
  if (kind == PenaltyKind::PowerLaw) {
    if (!(tau > 0.0 && tau <= 1.0))
      throw std::invalid_argument("power-law penalty: tau must be in (0,1]");
  } else {
    if (!(tau > 1.0))
      throw std::invalid_argument("scad/mcp penalty: tau must be > 1");
  }
}

double Penalty::phi(double t) const {
  const double a = std::abs(t);
  switch (kind_) {
    case PenaltyKind::PowerLaw:
      return lambda_ * std::pow(a, tau_);
    case PenaltyKind::Scad: {
      if (a >= lambda_ * tau_) return lambda_ * lambda_ * (tau_ + 1.0) / 2.0;
      if (a > lambda_) return (lambda_ * tau_ * a - 0.5 * (a * a + lambda_ * lambda_)) / (tau_ - 1.0);
      return lambda_ * a;
    }
    case PenaltyKind::Mcp: {
      if (a >= lambda_ * tau_) return lambda_ * lambda_ * tau_ / 2.0;
      return lambda_ * (a - a * a / (2.0 * lambda_ * tau_));
    }
  }
  return 0.0;
}

double Penalty::phi_prime(double t) const {
  const double a = std::abs(t);
  const double s = sign(t);
  switch (kind_) {
    case PenaltyKind::PowerLaw: {
      if (lambda_ == 0.0) return 0.0;
      if (tau_ == 1.0) return s * lambda_;
      if (a == 0.0)
        throw std::domain_error("phi_prime: power-law derivative unbounded at t = 0");
      return s * lambda_ * tau_ * std::pow(a, tau_ - 1.0);
    }
    case PenaltyKind::Scad: {
      if (a >= lambda_ * tau_) return 0.0;
      if (a > lambda_) return s * (lambda_ * tau_ - a) / (tau_ - 1.0);
      return s * lambda_;
    }
    case PenaltyKind::Mcp: {
      if (a >= lambda_ * tau_) return 0.0;
      return s * (lambda_ - a / tau_);
    }
  }
  return 0.0;
}

double Penalty::prox(double v, double eta) const {
  if (!(eta > 0.0)) throw std::invalid_argument("prox: eta must be > 0");
  if (v == 0.0 || lambda_ == 0.0) return lambda_ == 0.0 ? v : 0.0;
  const double s = sign(v);
  const double a = std::abs(v);
  const auto value = [&](double z) { return 0.5 * (z - a) * (z - a) + eta * phi(z); };

  double best_z = 0.0;
  double best_f = value(0.0);
  const auto consider = [&](double z) {
    if (!(z > 0.0)) return;
    const double f = value(z);
    if (f < best_f) {  // strict: ties stay at the sparser candidate
      best_f = f;
      best_z = z;
    }
  };

  switch (kind_) {
    case PenaltyKind::PowerLaw: {
      if (tau_ == 1.0) return s * std::max(0.0, a - eta * lambda_);
      // Stationarity g(z) = z + c z^{tau-1} - a on z > 0, c = eta*lambda*tau.
      // g is decreasing then increasing with minimum at zmin; the largest
      // root (if any) lies in [zmin, a].
      const double c = eta * lambda_ * tau_;
      const double zmin = std::pow(c * (1.0 - tau_), 1.0 / (2.0 - tau_));
      const auto g = [&](double z) { return z + c * std::pow(z, tau_ - 1.0) - a; };
      if (g(zmin) <= 0.0) {
        double lo = zmin, hi = a;
        for (int it = 0; it < 200 && (hi - lo) > 1e-17 * (1.0 + hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          (g(mid) > 0.0 ? hi : lo) = mid;
        }
        consider(0.5 * (lo + hi));
      }
      break;
    }
    case PenaltyKind::Scad: {
      const double lt = lambda_ * tau_;
      // |z| <= lambda: soft threshold of the linear branch
      consider(std::min(std::max(a - eta * lambda_, 0.0), lambda_));
      // lambda < |z| <= lambda*tau: stationary point of the quadratic branch
      const double denom = tau_ - 1.0 - eta;
      if (denom != 0.0) {
        const double z2 = (a * (tau_ - 1.0) - eta * lt) / denom;
        consider(std::min(std::max(z2, lambda_), lt));
      }
      consider(lambda_);
      consider(lt);
      // plateau: phi constant, minimum of the quadratic at z = a
      consider(std::max(a, lt));
      break;
    }
    case PenaltyKind::Mcp: {
      const double lt = lambda_ * tau_;
      const double denom = 1.0 - eta / tau_;
      if (denom > 0.0) {
        const double z1 = (a - eta * lambda_) / denom;
        consider(std::min(std::max(z1, 0.0), lt));
      }
      consider(lt);
      consider(std::max(a, lt));
      break;
    }
  }
  return s * best_z;
}

SmoothedPenalty::SmoothedPenalty(Penalty base, double epsilon)
    : base_(base), epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("smoothed penalty: epsilon must be > 0");
}

double SmoothedPenalty::psi(double t) const {
  if (t < 0.0) throw std::domain_error("psi: t must be >= 0");
  const double e = epsilon_;
  if (t >= e * e) return base_.phi(std::sqrt(t));
  const double dp = base_.lambda() == 0.0 ? 0.0 : base_.phi_prime(e);
  return dp / (2.0 * e) * t + base_.phi(e) - dp * e / 2.0;
}

double SmoothedPenalty::psi_prime(double t) const {
  if (t < 0.0) throw std::domain_error("psi_prime: t must be >= 0");
  return 0.5 * weight(std::sqrt(t));
}

double SmoothedPenalty::weight(double y) const {
  const Penalty& p = base_;
  const double a = std::abs(y);
  const double e = epsilon_;
  if (p.lambda() == 0.0) return 0.0;
  if (p.kind() == PenaltyKind::PowerLaw) {
    // eps/phi'(eps) = eps^{2-tau}/(lambda tau); the max picks the larger argument
    return p.lambda() * p.tau() * std::pow(std::max(e, a), p.tau() - 2.0);
  }
  const double pe = p.phi_prime(e);
  const double ra = pe > 0.0 ? e / pe : kInf;
  double rb = 0.0;
  if (a > 0.0) {
    const double pa = p.phi_prime(a);
    rb = pa > 0.0 ? a / pa : kInf;
  }
  const double m = std::max(ra, rb);
  return std::isfinite(m) ? 1.0 / m : 0.0;
}

}  // namespace monocomp
