#pragma once

#include <array>
#include <complex>

#include "blochform/bloch_model.hpp"
#include "blochform/cubic_roots.hpp"

namespace blochform {

/// Functional form of the closed-form solution. The Zero* forms belong to
/// the a0 = 0 family, where Delta(p) = p (p^2 + a2 p + a1) and the Laplace
/// image gains a 1/p^2 pole (a term linear in t).
enum class SolutionForm {
  ComplexPair,        ///< A0 + A1 e^{-k1 t} + A2 e^{-bt} cos(st) + (A3/s) e^{-bt} sin(st)
  ThreeDistinctReal,  ///< A0 + A1 e^{-k1 t} + A2 e^{-k2 t} + A3 e^{-k3 t}
  DoubleReal,         ///< A0 + A1 e^{-k1 t} + A2 e^{-k2 t} + A3 t e^{-k2 t}
  TripleReal,         ///< A0 + A1 e^{-k1 t} + A2 t e^{-k1 t} + (A3/2) t^2 e^{-k1 t}
  ZeroComplexPair,    ///< A0 + A1 t + A2 e^{-bt} cos(st) + (A3/s) e^{-bt} sin(st)
  ZeroDistinctReal,   ///< A0 + A1 t + A2 e^{-k2 t} + A3 e^{-k3 t}
  ZeroDoubleReal,     ///< A0 + A1 t + A2 e^{-k2 t} + A3 t e^{-k2 t}
  ZeroDoubleZero,     ///< A0 + A1 t + A2 e^{-k2 t} + (A3/2) t^2, only for gamma_t = delta = Omega = 0
};

const char* to_string(SolutionForm f);

bool is_zero_root(SolutionForm f);

struct Coefficients {
  double a0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
};

/// The close pair (i, j) of a near-degenerate ThreeDistinctReal solution in
/// cancellation-free form. With x = -kappa and g = x_j - x_i the pair
/// contributes e^{x_i t} [rest + (slope - x_i rest) expm1(g t) / g], so A_i and
/// A_j, which grow like 1/g and nearly cancel, are never summed.
struct NearPair {
  std::size_t i = 0;
  std::size_t j = 0;
  std::array<double, 3> rest{};   ///< A_i + A_j per variable
  std::array<double, 3> slope{};  ///< x_i A_i + x_j A_j per variable
  double sum = 0.0;                ///< x_i + x_j, deflated from the cubic
  double product = 0.0;            ///< x_i x_j, deflated from the cubic
};

/// Closed-form solution for all three Bloch variables.
///
/// Decay constants: kappa[0] is kappa1 (0 for the Zero* forms); kappa[1] and
/// kappa[2] are kappa2 and kappa3 where the form uses them. ThreeDistinctReal
/// stores them ascending. b and s are used by the two complex-pair forms.
struct ClosedFormSolution {
  SolutionForm form = SolutionForm::ComplexPair;
  std::array<double, 3> kappa{};
  double b = 0.0;
  double s = 0.0;
  std::array<Coefficients, 3> coeffs{};  ///< indexed by Variable
  BlochParams params;
  BlochState init;
  bool near_degenerate = false;  ///< ThreeDistinctReal assembled via the gap-stable formulas
  NearPair pair;                 ///< valid when near_degenerate
  double value_residual = 0.0;   ///< max |u_l(0) - init_l|
  double derivative_residual = 0.0;  ///< max |u_l'(0) - rhs_l(init)|

  const Coefficients& operator[](Variable l) const { return coeffs[static_cast<int>(l)]; }
};

/// Relative gap |x3 - x2| / a2 below which the gap-stable formulas replace
/// the residue formula for the pair.
inline constexpr double kNearDegenerateGap = 1e-4;
/// Relative gap below which a distinct-real instance is treated as a double root.
inline constexpr double kDegenerateGap = 1e-8;

/// A0 = lim_{p->0} p f_l(p) / a0 for u, v, w. Throws DomainError when a0 == 0.
std::array<double, 3> steady_state(const BlochParams& p);

/// A1 = f_l(x1) / ((x1 - z2)(x1 - z3)) for the simple root x1 = -kappa[which]
/// of `roots`. With ThreeDistinctReal, `which` = 1, 2 gives A2, A3.
/// Throws DomainError when x1 is degenerate (TripleReal, or the double root).
double residue_A1(const BlochParams& p, const BlochState& init, const RootSet& roots, Variable l,
                  std::size_t which = 0);

struct TailCoefficients {
  double first = 0.0;   ///< A2 (TripleReal: A1)
  double second = 0.0;  ///< A3 (TripleReal: A2)
};

/// Solves the triangular value/derivative rows at t = 0 for the two
/// remaining constants:
///   ComplexPair: A2 = u0 - A0 - A1, A3 = u0' + k1 A1 + b A2
///   DoubleReal:  A2 = u0 - A0 - A1, A3 = u0' + k1 A1 + k2 A2
///   TripleReal:  A1 = u0 - A0,      A2 = u0' + k1 A1    (a1 is ignored)
/// Throws DomainError for ThreeDistinctReal.
TailCoefficients coeffs_from_initial(const RootSet& roots, double a0, double a1, double init_value,
                                     double init_derivative);

/// Gap-stable A2, A3 for a close pair x2, x3 of real roots. Throws
/// DomainError when x2 == x3.
TailCoefficients near_degenerate_coeffs(double x2, double x3, double a0, double a1, double x1,
                                        double init_value, double init_derivative);

/// A3 = f_l(-k1) at a triple root k1 = (gamma + 2 gamma_t)/3, evaluated with
/// (p + gamma) -> 2/3 (gamma - gamma_t) and (p + gamma_t) -> -1/3 (gamma - gamma_t).
/// Throws DomainError unless the cubic classifies as TripleReal.
double triple_root_A3(const BlochParams& p, const BlochState& init, Variable l);

/// Closed form for the a0 = 0 family. Throws DomainError when a0 != 0 or a2 == 0.
ClosedFormSolution zero_root_solve(const BlochParams& p, const BlochState& init);

/// Validates inputs, dispatches on the root structure, assembles every
/// coefficient and certifies the t = 0 value and derivative identities.
/// Throws InputError for invalid inputs and CertificationError if the
/// assembled solution fails its own checks.
ClosedFormSolution solve(const BlochParams& p, const BlochState& init);

/// Bloch vector at time t >= 0 (InputError for t < 0).
BlochState evaluate(const ClosedFormSolution& sol, double t);

/// Time derivative of the closed form at t >= 0.
BlochState evaluate_derivative(const ClosedFormSolution& sol, double t);

/// The partial-fraction sum the coefficients encode, evaluated at complex q.
/// Equals f_l(q) / Delta(q) for a correctly assembled solution.
std::complex<double> laplace_image(const ClosedFormSolution& sol, Variable l, std::complex<double> q);

}  // namespace blochform
