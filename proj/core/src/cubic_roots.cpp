#include "blochform/cubic_roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "blochform/errors.hpp"

namespace blochform {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(const RealCubic& c) {
  if (!std::isfinite(c.a2) || !std::isfinite(c.a1) || !std::isfinite(c.a0)) {
    throw InputError("cubic coefficients must be finite");
  }
}

// Newton refinement of a simple real root. A step is kept only if it lowers
// |c(x)| and stays within `max_step` of the starting point, so a root that sits
// close to another one cannot hop over to its neighbour.
double polish_root(const RealCubic& c, double x, double max_step) {
  double fx = c(x);
  for (int iter = 0; iter < 4 && fx != 0.0; ++iter) {
    const double dfx = c.derivative(x);
    if (dfx == 0.0) break;
    const double step = fx / dfx;
    if (!(std::abs(step) <= max_step)) break;
    const double next = x - step;
    const double fnext = c(next);
    if (!(std::abs(fnext) < std::abs(fx))) break;
    x = next;
    fx = fnext;
  }
  return x;
}

}  // namespace

double RealCubic::root_scale() const {
  return std::max({std::abs(a2), std::sqrt(std::abs(a1)), std::cbrt(std::abs(a0))});
}

const char* to_string(RootTag tag) {
  switch (tag) {
    case RootTag::ComplexPair: return "ComplexPair";
    case RootTag::ThreeDistinctReal: return "ThreeDistinctReal";
    case RootTag::DoubleReal: return "DoubleReal";
    case RootTag::TripleReal: return "TripleReal";
  }
  return "Unknown";
}

std::array<std::complex<double>, 3> RootSet::roots() const {
  using C = std::complex<double>;
  switch (tag) {
    case RootTag::ComplexPair:
      return {C(-kappa[0], 0.0), C(-b, s), C(-b, -s)};
    case RootTag::ThreeDistinctReal:
      return {C(-kappa[0]), C(-kappa[1]), C(-kappa[2])};
    case RootTag::DoubleReal:
      return {C(-kappa[0]), C(-kappa[1]), C(-kappa[1])};
    case RootTag::TripleReal:
      return {C(-kappa[0]), C(-kappa[0]), C(-kappa[0])};
  }
  return {};
}

double real_cbrt(double x) { return std::cbrt(x); }

std::complex<double> principal_cbrt(std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0)) return z;
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

double discriminant(const RealCubic& c) {
  const double a2 = c.a2, a1 = c.a1, a0 = c.a0;
  return a1 * a1 * a2 * a2 - 4.0 * a1 * a1 * a1 - 4.0 * a0 * a2 * a2 * a2 - 27.0 * a0 * a0 +
         18.0 * a0 * a1 * a2;
}

CancellationScale cancellation_scale(const RealCubic& c) {
  const double a2 = std::abs(c.a2), a1 = std::abs(c.a1), a0 = std::abs(c.a0);
  return {(3.0 * a1 + a2 * a2) / 9.0, (9.0 * a2 * a1 + 27.0 * a0 + 2.0 * a2 * a2 * a2) / 54.0};
}

double dc_tolerance(const RealCubic& c, double Q, double R) {
  const CancellationScale sc = cancellation_scale(c);
  const double eq = kRoundingUlps * std::numeric_limits<double>::epsilon() * sc.q;
  const double er = kRoundingUlps * std::numeric_limits<double>::epsilon() * sc.r;
  const double aq = std::abs(Q), ar = std::abs(R);
  // |(Q +/- eq)^3 + (R +/- er)^2 - Q^3 - R^2| bounded term by term
  return 3.0 * aq * aq * eq + 3.0 * aq * eq * eq + eq * eq * eq + 2.0 * ar * er + er * er;
}

double discriminant_tolerance(const RealCubic& c) {
  const double R = (9.0 * c.a2 * c.a1 - 27.0 * c.a0 - 2.0 * c.a2 * c.a2 * c.a2) / 54.0;
  const double Q = (3.0 * c.a1 - c.a2 * c.a2) / 9.0;
  return 108.0 * dc_tolerance(c, Q, R);
}

CardanoQuantities cardano_quantities(const RealCubic& c) {
  require_finite(c);
  CardanoQuantities q;
  q.R = (9.0 * c.a2 * c.a1 - 27.0 * c.a0 - 2.0 * c.a2 * c.a2 * c.a2) / 54.0;
  q.Q = (3.0 * c.a1 - c.a2 * c.a2) / 9.0;
  q.Dc = q.Q * q.Q * q.Q + q.R * q.R;
  q.D = discriminant(c);

  const double scale6 = std::pow(c.root_scale(), 6);
  if (std::abs(q.Dc + q.D / 108.0) > 1e-9 * scale6) {
    throw std::logic_error("Cardano Dc disagrees with -D/108: Dc=" + std::to_string(q.Dc) +
                           " D=" + std::to_string(q.D));
  }

  if (q.Dc >= 0.0) {
    const double root = std::sqrt(q.Dc);
    q.s_plus = real_cbrt(q.R + root);
    q.s_minus = real_cbrt(q.R - root);
  } else {
    q.s_plus = principal_cbrt({q.R, std::sqrt(-q.Dc)});
    q.s_minus = std::conj(q.s_plus);
  }
  return q;
}

std::array<double, 3> real_roots_compensated(const RealCubic& c, const CardanoQuantities& q,
                                             CubeRootChoice choice) {
  if (q.Dc > dc_tolerance(c, q.Q, q.R)) {
    throw DomainError("real_roots_compensated: Dc > 0, cubic has a complex pair");
  }
  std::complex<double> s;
  if (q.Dc >= 0.0) {
    s = real_cbrt(q.R);
  } else {
    s = choice.use_minus ? q.s_minus : q.s_plus;
  }
  s *= std::polar(1.0, 2.0 * kPi * choice.rotation / 3.0);

  std::array<double, 3> x{};
  for (int l = 0; l < 3; ++l) {
    x[l] = -c.a2 / 3.0 + 2.0 * (std::polar(1.0, 2.0 * kPi * l / 3.0) * s).real();
  }
  std::sort(x.begin(), x.end());
  return x;
}

ComplexPairRoots complex_pair(const RealCubic& c, const CardanoQuantities& q) {
  if (!(q.Dc > dc_tolerance(c, q.Q, q.R))) {
    throw DomainError("complex_pair: Dc <= 0, all roots are real");
  }
  const double root = std::sqrt(q.Dc);
  const double sp = real_cbrt(q.R + root);
  const double sm = real_cbrt(q.R - root);
  // the real root is simple here, so Newton cannot wander far
  const double x1 = polish_root(c, -(c.a2 / 3.0 - sp - sm), 0.5 * c.root_scale());

  ComplexPairRoots out;
  out.kappa1 = -x1;
  if (!(out.kappa1 > 0.0)) {
    throw DomainError("complex_pair: real root is not negative");
  }
  out.b = 0.5 * (c.a2 - out.kappa1);
  // (sqrt(3)/2)(S+ - S-) with the difference of cube roots rewritten as
  // 2 sqrt(Dc) / (S+^2 + S+ S- + S-^2); the denominator is a sum of squares
  const double denom = sp * sp + sp * sm + sm * sm;
  out.s = denom > 0.0 ? std::sqrt(3.0) * root / denom : 0.0;
  if (!(out.s > 0.0)) {
    out.s = 0.0;
    out.degenerate = true;
  }
  return out;
}

RootSet classify_roots(const RealCubic& c) {
  require_finite(c);
  if (!(c.a0 > 0.0)) {
    throw DomainError("classify_roots: requires a0 > 0 (zero-root family is handled separately)");
  }
  const CardanoQuantities q = cardano_quantities(c);
  const double scale = c.root_scale();
  const CancellationScale sc = cancellation_scale(c);

  RootSet out;
  const double r_tol = kTripleTolerance * std::sqrt(kTripleTolerance) * sc.r;
  if (std::abs(q.Q) <= kTripleTolerance * sc.q && std::abs(q.R) <= r_tol) {
    out.tag = RootTag::TripleReal;
    out.kappa = {c.a2 / 3.0, 0.0, 0.0};
    out.count = 1;
    return out;
  }

  const double tol = dc_tolerance(c, q.Q, q.R);
  if (q.Dc > tol) {
    const ComplexPairRoots cp = complex_pair(c, q);
    if (cp.degenerate) {
      out.tag = RootTag::DoubleReal;
      out.kappa = {cp.kappa1, cp.b, 0.0};
      out.count = 2;
    } else {
      out.tag = RootTag::ComplexPair;
      out.kappa = {cp.kappa1, 0.0, 0.0};
      out.count = 1;
      out.b = cp.b;
      out.s = cp.s;
    }
    return out;
  }

  if (q.Dc < -tol) {
    auto x = real_roots_compensated(c, q);
    std::array<double, 3> refined = x;
    for (int i = 0; i < 3; ++i) {
      double gap = scale;
      for (int j = 0; j < 3; ++j) {
        if (j != i) gap = std::min(gap, std::abs(x[i] - x[j]));
      }
      refined[i] = polish_root(c, x[i], 0.25 * gap);
    }
    out.tag = RootTag::ThreeDistinctReal;
    out.kappa = {-refined[0], -refined[1], -refined[2]};
    std::sort(out.kappa.begin(), out.kappa.end());
    out.count = 3;
    return out;
  }

  // D == 0 with R != 0: S+ = S- = cbrt(R), simple root -a2/3 + 2 cbrt(R).
  const double s = real_cbrt(q.R);
  const double simple = polish_root(c, -c.a2 / 3.0 + 2.0 * s, 0.5 * std::abs(3.0 * s));
  const double twin = 0.5 * (-c.a2 - simple);
  out.tag = RootTag::DoubleReal;
  out.kappa = {-simple, -twin, 0.0};
  out.count = 2;
  return out;
}

}  // namespace blochform
