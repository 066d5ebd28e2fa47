#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "blochform/analytic_solver.hpp"
#include "blochform/bloch_model.hpp"

namespace blochform {

struct TraceSample {
  double t = 0.0;
  BlochState state;
};

/// Samples of a numerical trajectory on [t0, t1]; the last step is shortened
/// when (t1 - t0) is not a multiple of `step`.
struct TraceGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  double step = 0.0;
  std::vector<TraceSample> samples;
};

/// Largest step accepted by rk4_integrate: 0.1 / max(gamma, gamma_t, |delta|, Omega, 1).
double max_rk4_step(const BlochParams& p);

/// Classical fixed-step fourth-order Runge-Kutta on the raw Bloch equations.
/// Throws InputError for step <= 0, step above max_rk4_step, or t1 < t0.
TraceGrid rk4_integrate(const BlochParams& p, const BlochState& init, double t0, double t1, double step);

struct TraceComparison {
  std::array<double, 3> max_abs_error{};
  std::array<double, 3> argmax_t{};

  double max_error() const;
};

/// Sup-norm difference between the closed form and a numerical trace,
/// evaluated on the trace's own sample times.
TraceComparison compare_traces(const ClosedFormSolution& analytic, const TraceGrid& numeric);

/// Sup-norm difference between two traces. Throws InputError unless both
/// carry the same sample times.
TraceComparison compare_traces(const TraceGrid& lhs, const TraceGrid& rhs);

}  // namespace blochform
