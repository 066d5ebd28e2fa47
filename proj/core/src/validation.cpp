#include "blochform/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blochform/regime_map.hpp"

namespace blochform {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double rate() { return uniform(1e-3, 10.0); }
  double sign() { return uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }

  // gamma != gamma_t with a usable gap
  std::pair<double, double> distinct_rates() {
    for (;;) {
      const double g = rate(), gt = rate();
      if (std::abs(g - gt) > 0.05) return {g, gt};
    }
  }

  BlochState state() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

 private:
  std::mt19937_64 engine_;
};

ValidationInstance draw_instance(Stratum stratum, Draw& rng) {
  ValidationInstance inst;
  inst.stratum = stratum;
  inst.init = rng.state();
  const double w_eq = rng.uniform(-1.0, 1.0);
  BlochParams& p = inst.params;

  switch (stratum) {
    case Stratum::Generic:
      p = {rng.rate(), rng.rate(), rng.uniform(-10.0, 10.0), rng.uniform(0.0, 10.0), w_eq, false};
      break;
    case Stratum::StrongCollision: {
      const double g = rng.rate();
      p = {g, g, rng.uniform(-10.0, 10.0), rng.uniform(0.0, 10.0), w_eq, false};
      break;
    }
    case Stratum::DistinctReal: {
      const auto [g, gt] = rng.distinct_rates();
      for (;;) {
        const double alpha = rng.uniform(0.0, kCuspAlpha);
        const double beta = rng.uniform(0.0, kCuspBeta);
        if (h_function(alpha, beta) < -1e-5) {
          p = from_dimensionless(g, gt, alpha, beta, w_eq, rng.sign());
          break;
        }
      }
      break;
    }
    case Stratum::BoundaryDouble: {
      const auto [g, gt] = rng.distinct_rates();
      const bool lower = rng.uniform(0.0, 1.0) < 0.7;
      const double beta = lower ? rng.uniform(1e-3, kCuspBeta - 1e-2) : rng.uniform(0.25, kCuspBeta - 1e-2);
      const auto point = boundary_alpha(beta, lower ? BoundaryBranch::OriginToCusp : BoundaryBranch::CuspToQuarter);
      p = from_dimensionless(g, gt, point.alpha, beta, w_eq, rng.sign());
      break;
    }
    case Stratum::ResonanceDouble: {
      const auto [g, gt] = rng.distinct_rates();
      p = {g, gt, 0.0, 0.5 * std::abs(g - gt), w_eq, false};
      break;
    }
    case Stratum::Triple: {
      const auto [g, gt] = rng.distinct_rates();
      p = from_dimensionless(g, gt, kCuspAlpha, kCuspBeta, w_eq, rng.sign());
      break;
    }
    case Stratum::ZeroRoot: {
      // cycle through the sub-cases of Delta(p) = p (p^2 + a2 p + a1)
      const double pick = rng.uniform(0.0, 1.0);
      if (pick < 0.55) {
        p = {rng.rate(), 0.0, 0.0, rng.uniform(0.0, 10.0), w_eq, false};
      } else if (pick < 0.75) {
        const double g = rng.rate();
        p = {g, 0.0, 0.0, 0.5 * g, w_eq, false};
      } else if (pick < 0.85) {
        p = {rng.rate(), 0.0, 0.0, 0.0, w_eq, false};
      } else {
        p = {0.0, rng.rate(), rng.uniform(-10.0, 10.0), 0.0, w_eq, false};
      }
      break;
    }
  }
  return inst;
}

}  // namespace

const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::Generic: return "Generic";
    case Stratum::StrongCollision: return "StrongCollision";
    case Stratum::DistinctReal: return "DistinctReal";
    case Stratum::BoundaryDouble: return "BoundaryDouble";
    case Stratum::ResonanceDouble: return "ResonanceDouble";
    case Stratum::Triple: return "Triple";
    case Stratum::ZeroRoot: return "ZeroRoot";
  }
  return "Unknown";
}

std::vector<ValidationInstance> stratified_instances(std::size_t n, std::uint64_t seed) {
  // per-mille shares; Generic absorbs the rounding remainder
  constexpr std::pair<Stratum, std::size_t> kShares[] = {
      {Stratum::StrongCollision, 100}, {Stratum::DistinctReal, 150}, {Stratum::BoundaryDouble, 100},
      {Stratum::ResonanceDouble, 50},  {Stratum::Triple, 50},        {Stratum::ZeroRoot, 150},
  };
  Draw rng(seed);
  std::vector<ValidationInstance> out;
  out.reserve(n);
  for (const auto& [stratum, share] : kShares) {
    const std::size_t count = n * share / 1000;
    for (std::size_t i = 0; i < count && out.size() < n; ++i) out.push_back(draw_instance(stratum, rng));
  }
  while (out.size() < n) out.push_back(draw_instance(Stratum::Generic, rng));
  return out;
}

ValidationResult validate_instance(const ValidationInstance& inst, double t1, double step) {
  const ClosedFormSolution sol = solve(inst.params, inst.init);
  const double h = std::min(step, max_rk4_step(inst.params));
  const TraceGrid trace = rk4_integrate(inst.params, inst.init, 0.0, t1, h);
  return {sol.form, compare_traces(sol, trace)};
}

}  // namespace blochform
