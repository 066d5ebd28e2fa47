#pragma once

#include <cstddef>
#include <vector>

#include "blochform/bloch_model.hpp"

namespace blochform {

/// Regimes of the (alpha, beta) plane. Torrey is the damped-oscillation
/// (complex pair) regime; the other three are the non-oscillating ones.
enum class Regime { Torrey, DistinctReal, DoubleRoot, TripleRoot };

const char* to_string(Regime r);

inline constexpr double kCuspAlpha = 1.0 / 27.0;
inline constexpr double kCuspBeta = 8.0 / 27.0;

struct RegimePoint {
  double alpha = 0.0;
  double beta = 0.0;
  double dc = 0.0;  ///< Q^3 + R^2 in units of (gamma - gamma_t)^6, i.e. h / 27
  Regime regime = Regime::Torrey;
  /// Set for beta < 0 (imaginary field strength): regime then only reports
  /// the sign of h and carries no physical meaning.
  bool diagnostic = false;
  /// Set by the physical overload when gamma == gamma_t; alpha and beta are
  /// then undefined (NaN) and dc is Q^3 + R^2 in the caller's units.
  bool strong_collision = false;
};

/// h(alpha, beta) with D = -4 (gamma - gamma_t)^6 h.
double h_function(double alpha, double beta);

/// Discriminant of h viewed as a cubic in beta: -alpha (27 alpha - 1)^3 / 16.
double h_discriminant(double alpha);

/// |h| at or below which a point is on the boundary.
double h_tolerance(double beta);

/// Requires alpha >= 0, beta >= 0 (InputError otherwise).
RegimePoint classify_regime(double alpha, double beta);

/// Classifies physical parameters. With gamma == gamma_t the answer is fixed
/// (Torrey, or TripleRoot when delta = Omega = 0) and `strong_collision` is set.
RegimePoint classify_regime(const BlochParams& p);

enum class BoundaryBranch { OriginToCusp, CuspToQuarter };

const char* to_string(BoundaryBranch b);

struct BoundaryPoint {
  double beta = 0.0;
  double alpha = 0.0;
  BoundaryBranch branch = BoundaryBranch::OriginToCusp;
  double theta = 0.0;
};

/// Alpha on the h = 0 boundary at the given beta. OriginToCusp covers
/// beta in [0, 8/27]; CuspToQuarter covers beta in [1/4, 8/27].
/// Throws InputError outside the branch's beta range.
BoundaryPoint boundary_alpha(double beta, BoundaryBranch branch);

/// Both branches sampled at beta = k / steps_per_unit plus the branch
/// endpoints, with the cusp emitted once. The curve runs from the origin to
/// the cusp and then, in decreasing beta, down to (beta, alpha) = (1/4, 0).
std::vector<BoundaryPoint> boundary_curve(std::size_t steps_per_unit = 200);

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 2;

  double at(std::size_t i) const;
};

/// Row-major grid (alpha outer, beta inner). Negative beta values are
/// evaluated in diagnostic mode; negative alpha is rejected.
std::vector<RegimePoint> scan_grid(const AxisRange& alpha, const AxisRange& beta);

}  // namespace blochform
