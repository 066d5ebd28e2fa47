#include "blochform/regime_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "blochform/errors.hpp"

namespace blochform {

namespace {

constexpr double kBranchSlack = 1e-12;
constexpr double kCuspTolerance = 1e-7;

Regime regime_from_h(double alpha, double beta, double h) {
  if (h > h_tolerance(beta)) return Regime::Torrey;
  if (h < -h_tolerance(beta)) return Regime::DistinctReal;
  if (std::abs(alpha - kCuspAlpha) <= kCuspTolerance && std::abs(beta - kCuspBeta) <= kCuspTolerance) {
    return Regime::TripleRoot;
  }
  return Regime::DoubleRoot;
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Torrey: return "Torrey";
    case Regime::DistinctReal: return "DistinctReal";
    case Regime::DoubleRoot: return "DoubleRoot";
    case Regime::TripleRoot: return "TripleRoot";
  }
  return "Unknown";
}

const char* to_string(BoundaryBranch b) {
  return b == BoundaryBranch::OriginToCusp ? "OriginToCusp" : "CuspToQuarter";
}

double h_function(double alpha, double beta) {
  return beta * beta * beta + beta * beta * (3.0 * alpha - 0.25) + beta * alpha * (3.0 * alpha - 5.0) +
         alpha * (alpha + 1.0) * (alpha + 1.0);
}

double h_discriminant(double alpha) {
  const double f = 27.0 * alpha - 1.0;
  return -alpha * f * f * f / 16.0;
}

double h_tolerance(double beta) { return 1e-9 * std::max(1.0, std::abs(beta * beta * beta)); }

RegimePoint classify_regime(double alpha, double beta) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("alpha: must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("beta: must be finite and >= 0");
  const double h = h_function(alpha, beta);
  return {alpha, beta, h / 27.0, regime_from_h(alpha, beta, h), false, false};
}

RegimePoint classify_regime(const BlochParams& p) {
  p.validate();
  if (p.gamma != p.gamma_t) {
    const Dimensionless ab = dimensionless(p);
    return classify_regime(ab.alpha, ab.beta);
  }
  RegimePoint out;
  out.alpha = std::numeric_limits<double>::quiet_NaN();
  out.beta = std::numeric_limits<double>::quiet_NaN();
  out.strong_collision = true;
  const double r2 = p.delta * p.delta + p.omega * p.omega;
  // Q = r2 / 3, R = 0
  out.dc = r2 * r2 * r2 / 27.0;
  out.regime = r2 > 0.0 ? Regime::Torrey : Regime::TripleRoot;
  return out;
}

BoundaryPoint boundary_alpha(double beta, BoundaryBranch branch) {
  const double lo = branch == BoundaryBranch::OriginToCusp ? 0.0 : 0.25;
  if (!(beta >= lo - kBranchSlack && beta <= kCuspBeta + kBranchSlack)) {
    throw InputError("beta: " + std::to_string(beta) + " outside the " + to_string(branch) + " branch");
  }
  beta = std::clamp(beta, lo, kCuspBeta);

  const double root = std::sqrt(1.0 + 27.0 * beta);
  double arg = (8.0 - 27.0 * beta * (20.0 + 27.0 * beta)) / (8.0 * root * root * root);
  if (std::abs(arg) > 1.0 + kBranchSlack) {
    throw DomainError("boundary_alpha: arccos argument " + std::to_string(arg) + " out of range");
  }
  arg = std::clamp(arg, -1.0, 1.0);

  BoundaryPoint out;
  out.beta = beta;
  out.branch = branch;
  out.theta = std::acos(arg) / 3.0;
  const double theta0 = branch == BoundaryBranch::OriginToCusp ? 0.0 : 4.0 * std::numbers::pi / 3.0;
  out.alpha = std::max(0.0, -(2.0 + 3.0 * beta) / 3.0 + (2.0 / 3.0) * root * std::cos(out.theta + theta0));
  return out;
}

std::vector<BoundaryPoint> boundary_curve(std::size_t steps_per_unit) {
  if (steps_per_unit == 0) throw InputError("steps_per_unit: must be positive");
  const double n = static_cast<double>(steps_per_unit);
  std::vector<BoundaryPoint> curve;

  for (std::size_t k = 0;; ++k) {
    const double beta = static_cast<double>(k) / n;
    if (beta >= kCuspBeta) break;
    curve.push_back(boundary_alpha(beta, BoundaryBranch::OriginToCusp));
  }
  curve.push_back(boundary_alpha(kCuspBeta, BoundaryBranch::OriginToCusp));

  std::vector<BoundaryPoint> upper;
  for (std::size_t k = 0;; ++k) {
    const double beta = static_cast<double>(k) / n;
    if (beta >= kCuspBeta) break;
    if (beta >= 0.25) upper.push_back(boundary_alpha(beta, BoundaryBranch::CuspToQuarter));
  }
  if (upper.empty() || upper.front().beta != 0.25) {
    upper.insert(upper.begin(), boundary_alpha(0.25, BoundaryBranch::CuspToQuarter));
  }
  curve.insert(curve.end(), upper.rbegin(), upper.rend());
  return curve;
}

double AxisRange::at(std::size_t i) const {
  if (count < 2) return lo;
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<RegimePoint> scan_grid(const AxisRange& alpha, const AxisRange& beta) {
  if (alpha.count < 2 || beta.count < 2) throw InputError("resolution: need at least 2 points per axis");
  if (!std::isfinite(alpha.lo) || !std::isfinite(alpha.hi) || !std::isfinite(beta.lo) ||
      !std::isfinite(beta.hi)) {
    throw InputError("grid ranges must be finite");
  }
  if (alpha.lo < 0.0 || alpha.hi < 0.0) throw InputError("alpha range: must be >= 0");

  std::vector<RegimePoint> grid;
  grid.reserve(alpha.count * beta.count);
  for (std::size_t i = 0; i < alpha.count; ++i) {
    const double a = alpha.at(i);
    for (std::size_t j = 0; j < beta.count; ++j) {
      const double b = beta.at(j);
      if (b >= 0.0) {
        grid.push_back(classify_regime(a, b));
      } else {
        const double h = h_function(a, b);
        grid.push_back({a, b, h / 27.0, regime_from_h(a, b, h), true, false});
      }
    }
  }
  return grid;
}

}  // namespace blochform
