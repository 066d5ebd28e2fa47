#pragma once

#include <complex>
#include <variant>

#include "blochform/cubic_roots.hpp"

namespace blochform {

/// Rates and fields of the driven two-level Bloch equations
///
///   u' = -gamma_t u - delta v
///   v' = -gamma_t v + delta u + Omega w
///   w' = -gamma w - Omega v + gamma w_eq
///
/// `omega` is a magnitude. When `invert_coupling` is set, every Omega that
/// couples v and w enters with a minus sign (magnetic-resonance convention);
/// the characteristic cubic only sees Omega^2 and is unaffected.
struct BlochParams {
  double gamma = 0.0;
  double gamma_t = 0.0;
  double delta = 0.0;
  double omega = 0.0;
  double w_eq = 0.0;
  bool invert_coupling = false;

  double coupling() const { return invert_coupling ? -omega : omega; }

  /// Throws InputError naming the first offending field.
  void validate() const;
};

struct BlochState {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  double operator[](int l) const { return l == 0 ? u : (l == 1 ? v : w); }
  double& operator[](int l) { return l == 0 ? u : (l == 1 ? v : w); }

  /// Throws InputError for non-finite components, and additionally for
  /// |(u,v,w)| > 1 + tolerance when `physical` is set.
  void validate(bool physical = false, double tolerance = 1e-9) const;
};

enum class Variable { U = 0, V = 1, W = 2 };

inline constexpr Variable kVariables[] = {Variable::U, Variable::V, Variable::W};

const char* to_string(Variable l);

/// Right-hand side of the Bloch equations at state `x`.
BlochState bloch_rhs(const BlochParams& p, const BlochState& x);

/// Determinant of the Laplace-domain coefficient matrix,
/// p^3 + (gamma + 2 gamma_t) p^2 + (gamma_t^2 + 2 gamma gamma_t + delta^2 + Omega^2) p
///     + gamma gamma_t^2 + gamma delta^2 + gamma_t Omega^2.
RealCubic characteristic_poly(const BlochParams& p);

/// Cramer numerator f_l(q) so that the Laplace image of variable l is
/// f_l(q) / Delta(q). Includes the pump term W0 = w0 + gamma w_eq / q, so q
/// must be nonzero; throws DomainError at q == 0.
std::complex<double> numerator_poly(const BlochParams& p, const BlochState& init, Variable l,
                                    std::complex<double> q);

/// lim_{q->0} q f_l(q) = gamma w_eq * {-delta Omega, Omega gamma_t, gamma_t^2 + delta^2}.
double numerator_pole_residue(const BlochParams& p, Variable l);

struct Dimensionless {
  double alpha = 0.0;  ///< delta^2 / (gamma - gamma_t)^2
  double beta = 0.0;   ///< Omega^2 / (gamma - gamma_t)^2
};

/// Throws DomainError when gamma == gamma_t.
Dimensionless dimensionless(const BlochParams& p);

/// Inverse of `dimensionless` for a given (gamma, gamma_t) pair. delta takes
/// the sign of `delta_sign`.
BlochParams from_dimensionless(double gamma, double gamma_t, double alpha, double beta,
                               double w_eq, double delta_sign = 1.0);

/// Two-level system driven by E0 cos(omega t).
struct TwoLevelPhysical {
  double t1 = 0.0;
  double t2 = 0.0;
  double omega0 = 0.0;       ///< transition angular frequency
  double omega_drive = 0.0;  ///< driving angular frequency
  double coupling = 0.0;     ///< |mu . E0| / hbar
  double w_eq = -1.0;
};

/// Spins in a static field H0 with a transverse drive 2 H1 cos(omega t).
/// Time is measured in units of 1/(g H1).
struct MagneticResonancePhysical {
  double t1 = 0.0;
  double t2 = 0.0;
  double g = 0.0;  ///< |gyromagnetic ratio|
  double h0 = 0.0;
  double h1 = 0.0;
  double omega_drive = 0.0;
  double w_eq = 1.0;
};

using PhysicalParams = std::variant<TwoLevelPhysical, MagneticResonancePhysical>;

BlochParams from_physical(const PhysicalParams& phys);

/// Factor converting laboratory time tau to the equation's time variable.
double time_scale(const PhysicalParams& phys);

}  // namespace blochform
