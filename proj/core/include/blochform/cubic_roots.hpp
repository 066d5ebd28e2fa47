#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>

namespace blochform {

/// Monic real cubic p^3 + a2 p^2 + a1 p + a0.
struct RealCubic {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  double operator()(double p) const { return ((p + a2) * p + a1) * p + a0; }
  std::complex<double> operator()(std::complex<double> p) const {
    return ((p + a2) * p + a1) * p + a0;
  }
  double derivative(double p) const { return (3.0 * p + 2.0 * a2) * p + a1; }

  /// Characteristic root magnitude max(|a2|, |a1|^(1/2), |a0|^(1/3)). All
  /// degeneracy tolerances are expressed in powers of this so classification
  /// does not depend on the time unit.
  double root_scale() const;
};

/// Intermediate scalars of Cardano's formula.
struct CardanoQuantities {
  double R = 0.0;
  double Q = 0.0;
  double Dc = 0.0;  ///< Q^3 + R^2
  double D = 0.0;   ///< discriminant, Dc == -D/108
  std::complex<double> s_plus;
  std::complex<double> s_minus;
};

enum class RootTag { ComplexPair, ThreeDistinctReal, DoubleReal, TripleReal };

const char* to_string(RootTag tag);

/// Roots of a cubic with positive coefficients, stored as decay constants
/// kappa_j = -x_j > 0.
///
/// Ordering contract:
///  - ComplexPair: kappa = {kappa1}, the real root; b, s describe -b +/- i s.
///  - ThreeDistinctReal: kappa ascending.
///  - DoubleReal: kappa = {kappa1 (simple), kappa2 (double)}.
///  - TripleReal: kappa = {kappa1}.
struct RootSet {
  RootTag tag = RootTag::ComplexPair;
  std::array<double, 3> kappa{};
  std::size_t count = 0;
  double b = 0.0;
  double s = 0.0;

  std::span<const double> decay_constants() const { return {kappa.data(), count}; }

  /// The three roots x_j of the cubic, repeated according to multiplicity.
  std::array<std::complex<double>, 3> roots() const;
};

/// Rounding budget, in units of machine epsilon, for Q and R relative to the
/// magnitude of the terms that cancel in them.
inline constexpr double kRoundingUlps = 64.0;
/// Relative tolerance on |Q| for the triple-root test. Q grows with the
/// square of the root spread and R with its cube, so |R| is held to
/// kTripleTolerance^(3/2) of its scale.
inline constexpr double kTripleTolerance = 1e-9;

double discriminant(const RealCubic& c);

/// Size of the terms that cancel in Q and R. Q and R depend only on root
/// differences, so comparing them against these scales is unit-free.
struct CancellationScale {
  double q = 0.0;  ///< (3|a1| + a2^2) / 9
  double r = 0.0;  ///< (9|a2 a1| + 27|a0| + 2|a2|^3) / 54
};

CancellationScale cancellation_scale(const RealCubic& c);

/// Bound on the rounding error of Dc = Q^3 + R^2 given the rounding budget
/// on Q and R. Dc inside +/- this band has no reliable sign.
double dc_tolerance(const RealCubic& c, double Q, double R);

/// The same band expressed for D (= 108 * dc_tolerance).
double discriminant_tolerance(const RealCubic& c);

/// R, Q, Dc, D and S+/S-. Real cube roots keep the sign of their argument;
/// when Dc < 0, S- is the conjugate of the principal cube root S+.
/// Throws std::logic_error if Dc and -D/108 disagree beyond rounding.
CardanoQuantities cardano_quantities(const RealCubic& c);

/// Which cube root feeds the compensated real-root formula. Every choice
/// yields the same root multiset.
struct CubeRootChoice {
  bool use_minus = false;
  int rotation = 0;  ///< multiply S by exp(2 pi i rotation / 3)
};

/// Real roots x_{l+1} = -a2/3 + 2 Re(exp(2 pi i l/3) S), l = 0,1,2, sorted
/// ascending. Requires Dc <= tolerance; tiny positive Dc is treated as zero.
/// Throws DomainError in the complex-pair regime.
std::array<double, 3> real_roots_compensated(const RealCubic& c, const CardanoQuantities& q,
                                             CubeRootChoice choice = {});

struct ComplexPairRoots {
  double kappa1 = 0.0;
  double b = 0.0;
  double s = 0.0;
  bool degenerate = false;  ///< s clamped to zero within rounding slack
};

/// kappa1 = a2/3 - S+ - S- (refined by Newton on the cubic) and
/// b = (a2 - kappa1)/2. s is taken from sqrt(3) sqrt(Dc) / (S+^2 + S+ S- + S-^2),
/// which equals sqrt(a0/kappa1 - b^2) but does not cancel when the roots
/// cluster. Throws DomainError when Dc is not positive beyond tolerance.
ComplexPairRoots complex_pair(const RealCubic& c, const CardanoQuantities& q);

/// Classifies a cubic with a0 > 0:
///  - TripleReal if |Q| and |R| are both small against their cancellation
///    scales (see kTripleTolerance);
///  - otherwise by the sign of Dc outside dc_tolerance: ComplexPair for
///    Dc > 0, ThreeDistinctReal for Dc < 0, DoubleReal inside the band.
/// Throws DomainError for a0 <= 0 and InputError for non-finite coefficients.
RootSet classify_roots(const RealCubic& c);

double real_cbrt(double x);
std::complex<double> principal_cbrt(std::complex<double> z);

}  // namespace blochform
