#include "blochform/analytic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "blochform/errors.hpp"

namespace blochform {

namespace {

using Complex = std::complex<double>;

double f_real(const BlochParams& p, const BlochState& init, Variable l, double x) {
  return numerator_poly(p, init, l, Complex(x, 0.0)).real();
}

// sin(s t) / s, continuous at s = 0
double sin_over_s(double s, double t) { return s > 0.0 ? std::sin(s * t) / s : t; }

double triple_a3_substituted(const BlochParams& p, const BlochState& init, Variable l) {
  const double diff = p.gamma - p.gamma_t;
  const double kappa = (p.gamma + 2.0 * p.gamma_t) / 3.0;
  const double pg = 2.0 * diff / 3.0;
  const double pt = -diff / 3.0;
  const double d = p.delta, om = p.coupling();
  const double w0 = init.w - p.gamma * p.w_eq / kappa;
  switch (l) {
    case Variable::U: return init.u * (pt * pg + om * om) - init.v * d * pg - w0 * d * om;
    case Variable::V: return init.u * d * pg + init.v * pt * pg + w0 * om * pt;
    case Variable::W: return -init.u * d * om - init.v * om * pt + w0 * (pt * pt + d * d);
  }
  return 0.0;
}

void certify(ClosedFormSolution& sol) {
  const BlochState v0 = evaluate(sol, 0.0);
  const BlochState d0 = evaluate_derivative(sol, 0.0);
  const BlochState rhs = bloch_rhs(sol.params, sol.init);

  double magnitude = 1.0;
  for (const auto& c : sol.coeffs) {
    magnitude = std::max({magnitude, std::abs(c.a0), std::abs(c.a1), std::abs(c.a2), std::abs(c.a3)});
  }
  for (int l = 0; l < 3; ++l) magnitude = std::max(magnitude, std::abs(sol.init[l]));
  const double rate = std::max({1.0, characteristic_poly(sol.params).root_scale(), sol.s});

  sol.value_residual = 0.0;
  sol.derivative_residual = 0.0;
  for (int l = 0; l < 3; ++l) {
    sol.value_residual = std::max(sol.value_residual, std::abs(v0[l] - sol.init[l]));
    sol.derivative_residual = std::max(sol.derivative_residual, std::abs(d0[l] - rhs[l]));
  }
  const bool finite = std::isfinite(sol.value_residual) && std::isfinite(sol.derivative_residual);
  if (!finite || sol.value_residual > 1e-9 * magnitude ||
      sol.derivative_residual > 1e-9 * magnitude * rate) {
    throw CertificationError(std::string("solution failed t=0 certification (") + to_string(sol.form) + ")",
                             {sol.value_residual, sol.derivative_residual});
  }
}

ClosedFormSolution make_solution(const BlochParams& p, const BlochState& init, SolutionForm form) {
  ClosedFormSolution sol;
  sol.form = form;
  sol.params = p;
  sol.init = init;
  return sol;
}

ClosedFormSolution assemble_two_tail(const BlochParams& p, const BlochState& init, const RootSet& roots) {
  const auto a0 = steady_state(p);
  const BlochState rhs = bloch_rhs(p, init);
  auto sol = make_solution(p, init, roots.tag == RootTag::ComplexPair ? SolutionForm::ComplexPair
                                                                      : SolutionForm::DoubleReal);
  sol.kappa = roots.kappa;
  sol.b = roots.b;
  sol.s = roots.s;
  for (Variable l : kVariables) {
    const int i = static_cast<int>(l);
    const double a1 = residue_A1(p, init, roots, l);
    const auto tail = coeffs_from_initial(roots, a0[i], a1, init[i], rhs[i]);
    sol.coeffs[i] = {a0[i], a1, tail.first, tail.second};
  }
  return sol;
}

ClosedFormSolution assemble_triple(const BlochParams& p, const BlochState& init, const RootSet& roots) {
  const auto a0 = steady_state(p);
  const BlochState rhs = bloch_rhs(p, init);
  auto sol = make_solution(p, init, SolutionForm::TripleReal);
  sol.kappa = roots.kappa;
  for (Variable l : kVariables) {
    const int i = static_cast<int>(l);
    const auto head = coeffs_from_initial(roots, a0[i], 0.0, init[i], rhs[i]);
    sol.coeffs[i] = {a0[i], head.first, head.second, triple_a3_substituted(p, init, l)};
  }
  return sol;
}

ClosedFormSolution assemble_distinct(const BlochParams& p, const BlochState& init, const RootSet& roots) {
  const RealCubic cubic = characteristic_poly(p);
  const auto& k = roots.kappa;  // ascending
  const double gap_low = k[1] - k[0];
  const double gap_high = k[2] - k[1];
  const double gap = std::min(gap_low, gap_high);
  // isolated root m and the close pair (i, j)
  const std::size_t m = gap_low <= gap_high ? 2 : 0;
  const std::size_t i = gap_low <= gap_high ? 0 : 1;
  const std::size_t j = i + 1;

  if (gap < kDegenerateGap * cubic.a2) {
    RootSet merged;
    merged.tag = RootTag::DoubleReal;
    merged.kappa = {k[m], 0.5 * (k[i] + k[j]), 0.0};
    merged.count = 2;
    return assemble_two_tail(p, init, merged);
  }

  const auto a0 = steady_state(p);
  const BlochState rhs = bloch_rhs(p, init);
  auto sol = make_solution(p, init, SolutionForm::ThreeDistinctReal);
  sol.kappa = k;
  sol.near_degenerate = gap < kNearDegenerateGap * cubic.a2;
  sol.pair.i = i;
  sol.pair.j = j;
  // the pair's roots are individually ill-conditioned; their sum and product are not
  sol.pair.sum = -cubic.a2 + k[m];
  sol.pair.product = cubic.a0 / k[m];
  for (Variable l : kVariables) {
    const int v = static_cast<int>(l);
    std::array<double, 3> amp{};
    if (sol.near_degenerate) {
      // Delta'(x_m) avoids the pair's individually ill-conditioned roots
      amp[m] = f_real(p, init, l, -k[m]) / cubic.derivative(-k[m]);
      const auto pair = near_degenerate_coeffs(-k[i], -k[j], a0[v], amp[m], -k[m], init[v], rhs[v]);
      amp[i] = pair.first;
      amp[j] = pair.second;
      sol.pair.rest[v] = init[v] - a0[v] - amp[m];
      sol.pair.slope[v] = rhs[v] + k[m] * amp[m];
    } else {
      for (std::size_t r = 0; r < 3; ++r) amp[r] = residue_A1(p, init, roots, l, r);
    }
    sol.coeffs[v] = {a0[v], amp[0], amp[1], amp[2]};
  }
  return sol;
}

}  // namespace

const char* to_string(SolutionForm f) {
  switch (f) {
    case SolutionForm::ComplexPair: return "ComplexPair";
    case SolutionForm::ThreeDistinctReal: return "ThreeDistinctReal";
    case SolutionForm::DoubleReal: return "DoubleReal";
    case SolutionForm::TripleReal: return "TripleReal";
    case SolutionForm::ZeroComplexPair: return "ZeroComplexPair";
    case SolutionForm::ZeroDistinctReal: return "ZeroDistinctReal";
    case SolutionForm::ZeroDoubleReal: return "ZeroDoubleReal";
    case SolutionForm::ZeroDoubleZero: return "ZeroDoubleZero";
  }
  return "Unknown";
}

bool is_zero_root(SolutionForm f) {
  return f == SolutionForm::ZeroComplexPair || f == SolutionForm::ZeroDistinctReal ||
         f == SolutionForm::ZeroDoubleReal || f == SolutionForm::ZeroDoubleZero;
}

std::array<double, 3> steady_state(const BlochParams& p) {
  const double a0 = characteristic_poly(p).a0;
  if (a0 == 0.0) throw DomainError("steady_state: a0 = 0, use zero_root_solve");
  return {numerator_pole_residue(p, Variable::U) / a0, numerator_pole_residue(p, Variable::V) / a0,
          numerator_pole_residue(p, Variable::W) / a0};
}

double residue_A1(const BlochParams& p, const BlochState& init, const RootSet& roots, Variable l,
                  std::size_t which) {
  if (which >= roots.count) throw DomainError("residue_A1: root index out of range");
  const double x = -roots.kappa[which];
  double denom = 0.0;
  switch (roots.tag) {
    case RootTag::ComplexPair: {
      const double re = x + roots.b;
      denom = re * re + roots.s * roots.s;
      break;
    }
    case RootTag::ThreeDistinctReal: {
      denom = 1.0;
      for (std::size_t r = 0; r < 3; ++r) {
        if (r != which) denom *= x + roots.kappa[r];
      }
      break;
    }
    case RootTag::DoubleReal: {
      if (which != 0) throw DomainError("residue_A1: the double root has no simple residue");
      const double d = x + roots.kappa[1];
      denom = d * d;
      break;
    }
    case RootTag::TripleReal:
      throw DomainError("residue_A1: triple root has no simple residue");
  }
  if (denom == 0.0) throw DomainError("residue_A1: degenerate root");
  return f_real(p, init, l, x) / denom;
}

TailCoefficients coeffs_from_initial(const RootSet& roots, double a0, double a1, double init_value,
                                     double init_derivative) {
  const double k1 = roots.kappa[0];
  switch (roots.tag) {
    case RootTag::ComplexPair: {
      const double a2 = init_value - a0 - a1;
      return {a2, init_derivative + k1 * a1 + roots.b * a2};
    }
    case RootTag::DoubleReal: {
      const double a2 = init_value - a0 - a1;
      return {a2, init_derivative + k1 * a1 + roots.kappa[1] * a2};
    }
    case RootTag::TripleReal: {
      const double head = init_value - a0;
      return {head, init_derivative + k1 * head};
    }
    case RootTag::ThreeDistinctReal:
      break;
  }
  throw DomainError("coeffs_from_initial: distinct real roots use residues");
}

TailCoefficients near_degenerate_coeffs(double x2, double x3, double a0, double a1, double x1,
                                        double init_value, double init_derivative) {
  if (x2 == x3) throw DomainError("near_degenerate_coeffs: x2 == x3, use the double-root form");
  const double rest = init_value - a0 - a1;
  const double slope = init_derivative - x1 * a1;
  const double gap = x3 - x2;
  return {(x3 * rest - slope) / gap, (-x2 * rest + slope) / gap};
}

double triple_root_A3(const BlochParams& p, const BlochState& init, Variable l) {
  p.validate();
  const RealCubic cubic = characteristic_poly(p);
  if (!(cubic.a0 > 0.0) || classify_roots(cubic).tag != RootTag::TripleReal) {
    throw DomainError("triple_root_A3: parameters are not at a triple root");
  }
  return triple_a3_substituted(p, init, l);
}

ClosedFormSolution zero_root_solve(const BlochParams& p, const BlochState& init) {
  p.validate();
  init.validate();
  const RealCubic cubic = characteristic_poly(p);
  if (cubic.a0 != 0.0) throw DomainError("zero_root_solve: requires a0 = 0");
  if (cubic.a2 == 0.0) throw DomainError("zero_root_solve: undamped case a2 = 0 is excluded");

  const double a2 = cubic.a2, a1 = cubic.a1;
  const BlochState rhs = bloch_rhs(p, init);

  if (a1 == 0.0) {
    // Delta = p^2 (p + a2)
    auto sol = make_solution(p, init, SolutionForm::ZeroDoubleZero);
    sol.kappa = {0.0, a2, 0.0};
    for (Variable l : kVariables) {
      const int i = static_cast<int>(l);
      const double decay = f_real(p, init, l, -a2) / (a2 * a2);
      const double quad = numerator_pole_residue(p, l) / a2;
      sol.coeffs[i] = {init[i] - decay, rhs[i] + a2 * decay, decay, quad};
    }
    certify(sol);
    return sol;
  }

  const double disc = a2 * a2 - 4.0 * a1;
  // merging the pair perturbs a1 by disc/4, i.e. by at most 2.5e-10 a2^2
  const double disc_tol = 1e-9 * a2 * a2;
  std::array<double, 3> secular{};
  for (Variable l : kVariables) secular[static_cast<int>(l)] = numerator_pole_residue(p, l) / a1;

  if (std::abs(disc) <= disc_tol) {
    auto sol = make_solution(p, init, SolutionForm::ZeroDoubleReal);
    const double k2 = 0.5 * a2;
    sol.kappa = {0.0, k2, 0.0};
    for (Variable l : kVariables) {
      const int i = static_cast<int>(l);
      const double a3 = f_real(p, init, l, -k2) / -k2;
      const double a2c = (secular[i] + a3 - rhs[i]) / k2;
      sol.coeffs[i] = {init[i] - a2c, secular[i], a2c, a3};
    }
    certify(sol);
    return sol;
  }

  if (disc < 0.0) {
    auto sol = make_solution(p, init, SolutionForm::ZeroComplexPair);
    sol.b = 0.5 * a2;
    sol.s = 0.5 * std::sqrt(-disc);
    const Complex z(-sol.b, sol.s);
    for (Variable l : kVariables) {
      const int i = static_cast<int>(l);
      // f(z)/z = A3 + i s A2
      const Complex ratio = numerator_poly(p, init, l, z) / z;
      const double a3 = ratio.real();
      const double a2c = ratio.imag() / sol.s;
      sol.coeffs[i] = {init[i] - a2c, secular[i], a2c, a3};
    }
    certify(sol);
    return sol;
  }

  auto sol = make_solution(p, init, SolutionForm::ZeroDistinctReal);
  const double k_big = 0.5 * (a2 + std::sqrt(disc));
  const double k_small = a1 / k_big;
  sol.kappa = {0.0, k_small, k_big};
  const double x2 = -k_small, x3 = -k_big;
  for (Variable l : kVariables) {
    const int i = static_cast<int>(l);
    const double c2 = f_real(p, init, l, x2) / (x2 * (x2 - x3));
    const double c3 = f_real(p, init, l, x3) / (x3 * (x3 - x2));
    sol.coeffs[i] = {init[i] - c2 - c3, secular[i], c2, c3};
  }
  certify(sol);
  return sol;
}

ClosedFormSolution solve(const BlochParams& p, const BlochState& init) {
  p.validate();
  init.validate();
  const RealCubic cubic = characteristic_poly(p);
  if (cubic.a0 == 0.0) return zero_root_solve(p, init);

  const RootSet roots = classify_roots(cubic);
  ClosedFormSolution sol;
  switch (roots.tag) {
    case RootTag::ComplexPair:
    case RootTag::DoubleReal:
      sol = assemble_two_tail(p, init, roots);
      break;
    case RootTag::TripleReal:
      sol = assemble_triple(p, init, roots);
      break;
    case RootTag::ThreeDistinctReal:
      sol = assemble_distinct(p, init, roots);
      break;
  }
  certify(sol);
  return sol;
}

namespace {

double amplitude(const Coefficients& c, std::size_t r) { return r == 0 ? c.a1 : r == 1 ? c.a2 : c.a3; }

// expm1(g t) / g, continuous at g = 0
double expm1_over(double g, double t) { return g == 0.0 ? t : std::expm1(g * t) / g; }

// value and rate of the isolated root plus the near pair, for variable v
std::pair<double, double> near_distinct_terms(const ClosedFormSolution& sol, int v, double t) {
  const NearPair& np = sol.pair;
  const std::size_t m = 3 - np.i - np.j;
  const double am = amplitude(sol.coeffs[v], m);
  const double xm = -sol.kappa[m], xi = -sol.kappa[np.i], g = sol.kappa[np.i] - sol.kappa[np.j];
  const double lead = std::exp(xm * t), base = std::exp(xi * t);
  const double rest = np.rest[v], tilt = np.slope[v] - xi * rest;
  const double value = am * lead + base * (rest + tilt * expm1_over(g, t));
  const double rate = xm * am * lead + base * (xi * rest + tilt * (xi * expm1_over(g, t) + std::exp(g * t)));
  return {value, rate};
}

}  // namespace

BlochState evaluate(const ClosedFormSolution& sol, double t) {
  if (!(t >= 0.0)) throw InputError("t: must be >= 0");
  const auto& k = sol.kappa;
  BlochState out;
  for (int i = 0; i < 3; ++i) {
    const Coefficients& c = sol.coeffs[i];
    double value = c.a0;
    switch (sol.form) {
      case SolutionForm::ComplexPair: {
        const double damp = std::exp(-sol.b * t);
        value += c.a1 * std::exp(-k[0] * t) + damp * (c.a2 * std::cos(sol.s * t) + c.a3 * sin_over_s(sol.s, t));
        break;
      }
      case SolutionForm::ThreeDistinctReal:
        if (sol.near_degenerate) {
          value += near_distinct_terms(sol, i, t).first;
        } else {
          value += c.a1 * std::exp(-k[0] * t) + c.a2 * std::exp(-k[1] * t) + c.a3 * std::exp(-k[2] * t);
        }
        break;
      case SolutionForm::DoubleReal:
        value += c.a1 * std::exp(-k[0] * t) + (c.a2 + c.a3 * t) * std::exp(-k[1] * t);
        break;
      case SolutionForm::TripleReal:
        value += (c.a1 + c.a2 * t + 0.5 * c.a3 * t * t) * std::exp(-k[0] * t);
        break;
      case SolutionForm::ZeroComplexPair: {
        const double damp = std::exp(-sol.b * t);
        value += c.a1 * t + damp * (c.a2 * std::cos(sol.s * t) + c.a3 * sin_over_s(sol.s, t));
        break;
      }
      case SolutionForm::ZeroDistinctReal:
        value += c.a1 * t + c.a2 * std::exp(-k[1] * t) + c.a3 * std::exp(-k[2] * t);
        break;
      case SolutionForm::ZeroDoubleReal:
        value += c.a1 * t + (c.a2 + c.a3 * t) * std::exp(-k[1] * t);
        break;
      case SolutionForm::ZeroDoubleZero:
        value += c.a1 * t + 0.5 * c.a3 * t * t + c.a2 * std::exp(-k[1] * t);
        break;
    }
    out[i] = value;
  }
  return out;
}

BlochState evaluate_derivative(const ClosedFormSolution& sol, double t) {
  if (!(t >= 0.0)) throw InputError("t: must be >= 0");
  const auto& k = sol.kappa;
  BlochState out;
  for (int i = 0; i < 3; ++i) {
    const Coefficients& c = sol.coeffs[i];
    double rate = 0.0;
    auto pair_term = [&] {
      const double damp = std::exp(-sol.b * t);
      const double cs = std::cos(sol.s * t);
      const double sn = std::sin(sol.s * t);
      return damp * ((-sol.b * c.a2 + c.a3) * cs - sol.s * c.a2 * sn - sol.b * c.a3 * sin_over_s(sol.s, t));
    };
    switch (sol.form) {
      case SolutionForm::ComplexPair:
        rate = -k[0] * c.a1 * std::exp(-k[0] * t) + pair_term();
        break;
      case SolutionForm::ThreeDistinctReal:
        if (sol.near_degenerate) {
          rate = near_distinct_terms(sol, i, t).second;
        } else {
          rate = -k[0] * c.a1 * std::exp(-k[0] * t) - k[1] * c.a2 * std::exp(-k[1] * t) -
                 k[2] * c.a3 * std::exp(-k[2] * t);
        }
        break;
      case SolutionForm::DoubleReal:
        rate = -k[0] * c.a1 * std::exp(-k[0] * t) + (c.a3 - k[1] * (c.a2 + c.a3 * t)) * std::exp(-k[1] * t);
        break;
      case SolutionForm::TripleReal:
        rate = (c.a2 + c.a3 * t - k[0] * (c.a1 + c.a2 * t + 0.5 * c.a3 * t * t)) * std::exp(-k[0] * t);
        break;
      case SolutionForm::ZeroComplexPair:
        rate = c.a1 + pair_term();
        break;
      case SolutionForm::ZeroDistinctReal:
        rate = c.a1 - k[1] * c.a2 * std::exp(-k[1] * t) - k[2] * c.a3 * std::exp(-k[2] * t);
        break;
      case SolutionForm::ZeroDoubleReal:
        rate = c.a1 + (c.a3 - k[1] * (c.a2 + c.a3 * t)) * std::exp(-k[1] * t);
        break;
      case SolutionForm::ZeroDoubleZero:
        rate = c.a1 + c.a3 * t - k[1] * c.a2 * std::exp(-k[1] * t);
        break;
    }
    out[i] = rate;
  }
  return out;
}

std::complex<double> laplace_image(const ClosedFormSolution& sol, Variable l, std::complex<double> q) {
  const Coefficients& c = sol[l];
  const auto& k = sol.kappa;
  Complex value = c.a0 / q;
  auto pair_term = [&] {
    const Complex shifted = q + sol.b;
    return (c.a2 * shifted + c.a3) / (shifted * shifted + sol.s * sol.s);
  };
  switch (sol.form) {
    case SolutionForm::ComplexPair:
      value += c.a1 / (q + k[0]) + pair_term();
      break;
    case SolutionForm::ThreeDistinctReal:
      if (sol.near_degenerate) {
        const NearPair& np = sol.pair;
        const std::size_t m = 3 - np.i - np.j;
        const int v = static_cast<int>(l);
        const Complex pair_poly = (q - np.sum) * q + np.product;
        value += amplitude(c, m) / (q + k[m]) + (np.rest[v] * (q - np.sum) + np.slope[v]) / pair_poly;
      } else {
        value += c.a1 / (q + k[0]) + c.a2 / (q + k[1]) + c.a3 / (q + k[2]);
      }
      break;
    case SolutionForm::DoubleReal:
      value += c.a1 / (q + k[0]) + c.a2 / (q + k[1]) + c.a3 / ((q + k[1]) * (q + k[1]));
      break;
    case SolutionForm::TripleReal: {
      const Complex r = 1.0 / (q + k[0]);
      value += c.a1 * r + c.a2 * r * r + c.a3 * r * r * r;
      break;
    }
    case SolutionForm::ZeroComplexPair:
      value += c.a1 / (q * q) + pair_term();
      break;
    case SolutionForm::ZeroDistinctReal:
      value += c.a1 / (q * q) + c.a2 / (q + k[1]) + c.a3 / (q + k[2]);
      break;
    case SolutionForm::ZeroDoubleReal:
      value += c.a1 / (q * q) + c.a2 / (q + k[1]) + c.a3 / ((q + k[1]) * (q + k[1]));
      break;
    case SolutionForm::ZeroDoubleZero:
      value += c.a1 / (q * q) + c.a3 / (q * q * q) + c.a2 / (q + k[1]);
      break;
  }
  return value;
}

}  // namespace blochform
