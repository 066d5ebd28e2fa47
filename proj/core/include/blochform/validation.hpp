#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "blochform/analytic_solver.hpp"
#include "blochform/ode_oracle.hpp"

namespace blochform {

/// How a validation instance was drawn.
enum class Stratum {
  Generic,          ///< unconstrained rates and fields
  StrongCollision,  ///< gamma == gamma_t
  DistinctReal,     ///< strictly inside the h < 0 lobe
  BoundaryDouble,   ///< on the h = 0 boundary, away from the cusp
  ResonanceDouble,  ///< delta = 0, Omega = |gamma - gamma_t| / 2
  Triple,           ///< (alpha, beta) = (1/27, 8/27)
  ZeroRoot,         ///< a0 = 0 family
};

const char* to_string(Stratum s);

struct ValidationInstance {
  Stratum stratum = Stratum::Generic;
  BlochParams params;
  BlochState init;
};

/// Deterministic stratified draw of `n` instances. Rates lie in (0, 10],
/// fields in [0, 10], initial data and w_eq in [-1, 1]. For n >= 200 every
/// stratum is represented, with at least n/20 triple-root, n/20 boundary
/// double-root and n/10 zero-root instances.
std::vector<ValidationInstance> stratified_instances(std::size_t n, std::uint64_t seed);

struct ValidationResult {
  SolutionForm form = SolutionForm::ComplexPair;
  TraceComparison comparison;
};

/// Solves `inst` in closed form and compares against RK4 on [0, t1].
ValidationResult validate_instance(const ValidationInstance& inst, double t1 = 50.0, double step = 1e-3);

}  // namespace blochform
