#include "blochform/ode_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "blochform/errors.hpp"

namespace blochform {

namespace {

// Written out independently of bloch_rhs so the oracle shares no code with
// the closed-form path.
struct Rates {
  double gt, g, d, om, pump;

  std::array<double, 3> operator()(const std::array<double, 3>& x) const {
    return {-gt * x[0] - d * x[1], -gt * x[1] + d * x[0] + om * x[2], -g * x[2] - om * x[1] + pump};
  }
};

std::array<double, 3> rk4_step(const Rates& f, const std::array<double, 3>& x, double h) {
  auto axpy = [](const std::array<double, 3>& a, double s, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  const auto k1 = f(x);
  const auto k2 = f(axpy(x, 0.5 * h, k1));
  const auto k3 = f(axpy(x, 0.5 * h, k2));
  const auto k4 = f(axpy(x, h, k3));
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

void track(TraceComparison& cmp, double t, const BlochState& a, const BlochState& b) {
  for (int i = 0; i < 3; ++i) {
    const double err = std::abs(a[i] - b[i]);
    if (err > cmp.max_abs_error[i] || std::isnan(err)) {
      cmp.max_abs_error[i] = err;
      cmp.argmax_t[i] = t;
    }
  }
}

}  // namespace

double max_rk4_step(const BlochParams& p) {
  return 0.1 / std::max({p.gamma, p.gamma_t, std::abs(p.delta), p.omega, 1.0});
}

TraceGrid rk4_integrate(const BlochParams& p, const BlochState& init, double t0, double t1, double step) {
  p.validate();
  init.validate();
  if (!(step > 0.0)) throw InputError("step: must be > 0");
  if (step > max_rk4_step(p) * (1.0 + 1e-12)) throw InputError("step: exceeds 0.1 / max rate");
  if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0) throw InputError("t1: must be >= t0");

  const Rates f{p.gamma_t, p.gamma, p.delta, p.coupling(), p.gamma * p.w_eq};
  TraceGrid grid{t0, t1, step, {}};
  const auto n_full = static_cast<std::size_t>(std::floor((t1 - t0) / step * (1.0 + 1e-12)));
  grid.samples.reserve(n_full + 2);

  std::array<double, 3> x{init.u, init.v, init.w};
  grid.samples.push_back({t0, init});
  for (std::size_t i = 1; i <= n_full; ++i) {
    x = rk4_step(f, x, step);
    grid.samples.push_back({t0 + static_cast<double>(i) * step, {x[0], x[1], x[2]}});
  }
  const double t_last = grid.samples.back().t;
  if (t1 - t_last > 1e-12 * std::max(1.0, std::abs(t1))) {
    x = rk4_step(f, x, t1 - t_last);
    grid.samples.push_back({t1, {x[0], x[1], x[2]}});
  } else {
    grid.samples.back().t = t1;
  }
  return grid;
}

double TraceComparison::max_error() const {
  return std::max({max_abs_error[0], max_abs_error[1], max_abs_error[2]});
}

TraceComparison compare_traces(const ClosedFormSolution& analytic, const TraceGrid& numeric) {
  TraceComparison cmp;
  for (const auto& sample : numeric.samples) {
    track(cmp, sample.t, evaluate(analytic, sample.t), sample.state);
  }
  return cmp;
}

TraceComparison compare_traces(const TraceGrid& lhs, const TraceGrid& rhs) {
  if (lhs.samples.size() != rhs.samples.size()) throw InputError("compare_traces: grid sizes differ");
  TraceComparison cmp;
  for (std::size_t i = 0; i < lhs.samples.size(); ++i) {
    if (lhs.samples[i].t != rhs.samples[i].t) throw InputError("compare_traces: sample times differ");
    track(cmp, lhs.samples[i].t, lhs.samples[i].state, rhs.samples[i].state);
  }
  return cmp;
}

}  // namespace blochform
