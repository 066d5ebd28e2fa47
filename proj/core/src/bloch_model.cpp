#include "blochform/bloch_model.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "blochform/errors.hpp"

namespace blochform {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw InputError(std::string(field) + ": " + rule);
}

}  // namespace

void BlochParams::validate() const {
  require(std::isfinite(gamma), "gamma", "must be finite");
  require(std::isfinite(gamma_t), "gamma_t", "must be finite");
  require(std::isfinite(delta), "delta", "must be finite");
  require(std::isfinite(omega), "omega", "must be finite");
  require(std::isfinite(w_eq), "w_eq", "must be finite");
  require(gamma >= 0.0, "gamma", "must be >= 0");
  require(gamma_t >= 0.0, "gamma_t", "must be >= 0");
  require(omega >= 0.0, "omega", "must be >= 0");
  require(gamma > 0.0 || gamma_t > 0.0, "gamma",
          "gamma and gamma_t cannot both vanish (undamped precession is excluded)");
}

void BlochState::validate(bool physical, double tolerance) const {
  require(std::isfinite(u), "u0", "must be finite");
  require(std::isfinite(v), "v0", "must be finite");
  require(std::isfinite(w), "w0", "must be finite");
  if (physical) {
    require(u * u + v * v + w * w <= 1.0 + tolerance, "u0",
            "physical state must satisfy u^2 + v^2 + w^2 <= 1");
  }
}

const char* to_string(Variable l) {
  switch (l) {
    case Variable::U: return "u";
    case Variable::V: return "v";
    case Variable::W: return "w";
  }
  return "?";
}

BlochState bloch_rhs(const BlochParams& p, const BlochState& x) {
  const double om = p.coupling();
  return {-p.gamma_t * x.u - p.delta * x.v,
          -p.gamma_t * x.v + p.delta * x.u + om * x.w,
          -p.gamma * x.w - om * x.v + p.gamma * p.w_eq};
}

RealCubic characteristic_poly(const BlochParams& p) {
  const double g = p.gamma, gt = p.gamma_t, d2 = p.delta * p.delta, o2 = p.omega * p.omega;
  return {g + 2.0 * gt, gt * gt + 2.0 * g * gt + d2 + o2, g * gt * gt + g * d2 + gt * o2};
}

std::complex<double> numerator_poly(const BlochParams& p, const BlochState& init, Variable l,
                                    std::complex<double> q) {
  if (q == std::complex<double>(0.0, 0.0)) {
    throw DomainError("numerator_poly: q = 0 is a pole of W0; use numerator_pole_residue");
  }
  const double d = p.delta, om = p.coupling();
  const auto pg = q + p.gamma;
  const auto pt = q + p.gamma_t;
  const auto w0 = init.w + p.gamma * p.w_eq / q;
  switch (l) {
    case Variable::U:
      return init.u * (pt * pg + om * om) - init.v * d * pg - w0 * d * om;
    case Variable::V:
      return init.u * d * pg + init.v * pt * pg + w0 * om * pt;
    case Variable::W:
      return -init.u * d * om - init.v * om * pt + w0 * (pt * pt + d * d);
  }
  return {};
}

double numerator_pole_residue(const BlochParams& p, Variable l) {
  const double pump = p.gamma * p.w_eq;
  switch (l) {
    case Variable::U: return -pump * p.delta * p.coupling();
    case Variable::V: return pump * p.coupling() * p.gamma_t;
    case Variable::W: return pump * (p.gamma_t * p.gamma_t + p.delta * p.delta);
  }
  return 0.0;
}

Dimensionless dimensionless(const BlochParams& p) {
  const double diff = p.gamma - p.gamma_t;
  if (diff == 0.0) {
    throw DomainError("dimensionless: gamma == gamma_t (strong collisions), alpha and beta undefined");
  }
  const double unit = diff * diff;
  return {p.delta * p.delta / unit, p.omega * p.omega / unit};
}

BlochParams from_dimensionless(double gamma, double gamma_t, double alpha, double beta,
                               double w_eq, double delta_sign) {
  if (gamma == gamma_t) {
    throw DomainError("from_dimensionless: gamma == gamma_t");
  }
  require(alpha >= 0.0, "alpha", "must be >= 0");
  require(beta >= 0.0, "beta", "must be >= 0");
  const double unit = std::abs(gamma - gamma_t);
  BlochParams p;
  p.gamma = gamma;
  p.gamma_t = gamma_t;
  p.delta = std::copysign(std::sqrt(alpha) * unit, delta_sign);
  p.omega = std::sqrt(beta) * unit;
  p.w_eq = w_eq;
  return p;
}

BlochParams from_physical(const PhysicalParams& phys) {
  return std::visit(
      [](const auto& x) -> BlochParams {
        using T = std::decay_t<decltype(x)>;
        require(x.t1 > 0.0, "T1", "must be > 0");
        require(x.t2 > 0.0, "T2", "must be > 0");
        BlochParams p;
        if constexpr (std::is_same_v<T, TwoLevelPhysical>) {
          require(x.coupling >= 0.0, "coupling", "must be >= 0");
          p.gamma = 1.0 / x.t1;
          p.gamma_t = 1.0 / x.t2;
          p.delta = x.omega0 - x.omega_drive;
          p.omega = x.coupling;
          p.w_eq = x.w_eq;
        } else {
          require(x.g >= 0.0, "g", "must be >= 0");
          require(x.h0 >= 0.0, "H0", "must be >= 0");
          require(x.h1 >= 0.0, "H1", "must be >= 0");
          const double unit = x.g * x.h1;
          require(unit > 0.0, "H1", "g * H1 must be > 0");
          p.gamma = 1.0 / (unit * x.t1);
          p.gamma_t = 1.0 / (unit * x.t2);
          p.delta = (x.g * x.h0 - x.omega_drive) / unit;
          p.omega = 1.0;
          p.invert_coupling = true;
          p.w_eq = x.w_eq;
        }
        return p;
      },
      phys);
}

double time_scale(const PhysicalParams& phys) {
  if (const auto* mr = std::get_if<MagneticResonancePhysical>(&phys)) return mr->g * mr->h1;
  return 1.0;
}

}  // namespace blochform
