#include "cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

namespace blochform::cli {

namespace {

using json = nlohmann::json;

const std::map<std::string, Command> kCommands = {
    {"solve", Command::Solve}, {"trace", Command::Trace},       {"classify", Command::Classify},
    {"map", Command::Map},     {"boundary", Command::Boundary}, {"validate", Command::Validate},
};

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double x) { return format_double(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(std::size_t n) { return std::to_string(n); }
  static std::string cell(int n) { return std::to_string(n); }
  static std::string cell(bool b) { return b ? "true" : "false"; }

  std::ostream& out_;
};

void write_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

// key,value rows for flat reports rendered as CSV
void flatten(const json& node, const std::string& prefix, CsvWriter& csv) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, csv);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], prefix + "." + std::to_string(i), csv);
  } else if (node.is_number_float()) {
    csv.row(prefix, node.get<double>());
  } else if (node.is_null()) {
    csv.row(prefix, "nan");
  } else if (node.is_string()) {
    csv.row(prefix, node.get<std::string>());
  } else {
    csv.row(prefix, node.dump());
  }
}

int emit_report(const RunConfig& cfg, const json& report, std::ostream& out) {
  if (cfg.effective_format() == Format::Json) {
    write_json(out, report);
  } else {
    CsvWriter csv(out);
    csv.row("key", "value");
    flatten(report, "", csv);
  }
  return kExitOk;
}

json state_json(const BlochState& s) { return {{"u", s.u}, {"v", s.v}, {"w", s.w}}; }

json params_json(const BlochParams& p) {
  return {{"gamma", p.gamma}, {"gamma_t", p.gamma_t}, {"delta", p.delta},
          {"omega", p.omega}, {"w_eq", p.w_eq},       {"invert_coupling", p.invert_coupling}};
}

json regime_point_json(const RegimePoint& r) {
  return {{"alpha", r.alpha},
          {"beta", r.beta},
          {"dc", r.dc},
          {"regime", to_string(r.regime)},
          {"diagnostic", r.diagnostic},
          {"strong_collision", r.strong_collision}};
}

std::size_t sample_count(double t0, double t1, double dt) {
  return static_cast<std::size_t>(std::floor((t1 - t0) / dt * (1.0 + 1e-12)));
}

}  // namespace

Format RunConfig::effective_format() const {
  if (format) return *format;
  switch (command) {
    case Command::Solve:
    case Command::Classify:
    case Command::Validate:
      return Format::Json;
    default:
      return Format::Csv;
  }
}

bool RunConfig::dimensionless_input() const { return alpha || alpha_r || beta; }

BlochParams RunConfig::bloch_params() const {
  if (!gamma) throw InputError("gamma: required");
  if (!gamma_t) throw InputError("gamma_t: required");
  BlochParams p;
  if (dimensionless_input()) {
    if (delta || omega) throw InputError("delta/omega: cannot be combined with alpha/alpha_r/beta");
    if (alpha && alpha_r) throw InputError("alpha_r: mutually exclusive with alpha");
    if (!beta) throw InputError("beta: required with alpha/alpha_r");
    const double a = alpha ? *alpha : (alpha_r ? *alpha_r / 27.0 : 0.0);
    if (*gamma == *gamma_t) throw InputError("alpha: undefined for gamma == gamma_t, give delta/omega");
    if (!(a >= 0.0)) throw InputError("alpha: must be >= 0");
    if (!(*beta >= 0.0)) throw InputError("beta: must be >= 0");
    if (!(*gamma >= 0.0)) throw InputError("gamma: must be >= 0");
    if (!(*gamma_t >= 0.0)) throw InputError("gamma_t: must be >= 0");
    p = from_dimensionless(*gamma, *gamma_t, a, *beta, w_eq);
  } else {
    p.gamma = *gamma;
    p.gamma_t = *gamma_t;
    p.delta = delta.value_or(0.0);
    p.omega = omega.value_or(0.0);
    p.w_eq = w_eq;
  }
  p.validate();
  return p;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

RunConfig parse_command_line(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Closed-form solutions of the driven two-level Bloch equations", "blochform"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "flat key=value file; flags override its values");

  std::string command;
  app.add_option("command", command, "solve | trace | classify | map | boundary | validate")
      ->required()
      ->check(CLI::IsMember({"solve", "trace", "classify", "map", "boundary", "validate"}));

  app.add_option("--gamma", cfg.gamma, "population relaxation rate");
  app.add_option("--gamma-t,--gamma_t", cfg.gamma_t, "coherence decay rate");
  app.add_option("--delta", cfg.delta, "detuning (signed)");
  app.add_option("--omega", cfg.omega, "field coupling");
  app.add_option("--w-eq,--w_eq", cfg.w_eq, "equilibrium inversion")->capture_default_str();
  app.add_option("--u0", cfg.init.u)->capture_default_str();
  app.add_option("--v0", cfg.init.v)->capture_default_str();
  app.add_option("--w0", cfg.init.w)->capture_default_str();

  auto* alpha = app.add_option("--alpha", cfg.alpha, "delta^2 / (gamma - gamma_t)^2");
  auto* alpha_r = app.add_option("--alpha-r,--alpha_r", cfg.alpha_r, "27 alpha");
  alpha->excludes(alpha_r);
  app.add_option("--beta", cfg.beta, "Omega^2 / (gamma - gamma_t)^2");

  app.add_option("--t0", cfg.t0)->capture_default_str();
  app.add_option("--t1", cfg.t1)->capture_default_str();
  app.add_option("--dt", cfg.dt)->capture_default_str();
  app.add_flag("--with-oracle,--with_oracle", cfg.with_oracle, "add RK4 columns to trace output");

  app.add_option("--alpha-min,--alpha_min", cfg.alpha_range.lo)->capture_default_str();
  app.add_option("--alpha-max,--alpha_max", cfg.alpha_range.hi)->capture_default_str();
  app.add_option("--n-alpha,--n_alpha", cfg.alpha_range.count)->capture_default_str();
  app.add_option("--beta-min,--beta_min", cfg.beta_range.lo)->capture_default_str();
  app.add_option("--beta-max,--beta_max", cfg.beta_range.hi)->capture_default_str();
  app.add_option("--n-beta,--n_beta", cfg.beta_range.count)->capture_default_str();
  app.add_option("--steps-per-unit,--steps_per_unit", cfg.steps_per_unit, "boundary sampling density in beta")
      ->capture_default_str();

  app.add_option("--samples", cfg.samples, "validate: number of random instances")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "validate: max allowed oracle gap")->capture_default_str();
  app.add_option("--oracle-step,--oracle_step", cfg.oracle_step, "RK4 step")->capture_default_str();

  std::string format;
  app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output path (default: stdout)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("blochform");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  }

  cfg.command = kCommands.at(command);
  if (!format.empty()) cfg.format = format == "json" ? Format::Json : Format::Csv;

  if (const char* env = std::getenv("BLOCHFORM_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t seed = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, seed);
    if (res.ec != std::errc() || res.ptr != end) throw InputError("BLOCHFORM_SEED: not an unsigned integer");
    cfg.seed = seed;
  }

  if (!std::isfinite(cfg.t0) || cfg.t0 < 0.0) throw InputError("t0: must be finite and >= 0");
  if (!std::isfinite(cfg.t1) || cfg.t1 < cfg.t0) throw InputError("t1: must be >= t0");
  if (!(cfg.dt > 0.0)) throw InputError("dt: must be > 0");
  if (!(cfg.oracle_step > 0.0)) throw InputError("oracle_step: must be > 0");
  if (!(cfg.tolerance > 0.0)) throw InputError("tolerance: must be > 0");
  cfg.init.validate();
  return cfg;
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
  const BlochParams p = cfg.bloch_params();
  const ClosedFormSolution sol = solve(p, cfg.init);
  const RealCubic cubic = characteristic_poly(p);
  const CardanoQuantities q = cardano_quantities(cubic);

  json coeffs;
  json steady;
  for (Variable l : kVariables) {
    const Coefficients& c = sol[l];
    coeffs[to_string(l)] = {{"A0", c.a0}, {"A1", c.a1}, {"A2", c.a2}, {"A3", c.a3}};
    steady[to_string(l)] = c.a0;
  }
  json kappa = json::array();
  switch (sol.form) {
    case SolutionForm::ComplexPair:
    case SolutionForm::TripleReal:
      kappa.push_back(sol.kappa[0]);
      break;
    case SolutionForm::DoubleReal:
      kappa = {sol.kappa[0], sol.kappa[1]};
      break;
    case SolutionForm::ThreeDistinctReal:
      kappa = {sol.kappa[0], sol.kappa[1], sol.kappa[2]};
      break;
    case SolutionForm::ZeroDistinctReal:
      kappa = {0.0, sol.kappa[1], sol.kappa[2]};
      break;
    case SolutionForm::ZeroComplexPair:
      kappa.push_back(0.0);
      break;
    case SolutionForm::ZeroDoubleReal:
    case SolutionForm::ZeroDoubleZero:
      kappa = {0.0, sol.kappa[1]};
      break;
  }

  json report;
  report["regime"] = to_string(sol.form);
  report["params"] = params_json(p);
  report["init"] = state_json(cfg.init);
  report["cubic"] = {{"a2", cubic.a2}, {"a1", cubic.a1}, {"a0", cubic.a0}};
  report["D"] = q.D;
  report["Dc"] = q.Dc;
  report["R"] = q.R;
  report["Q"] = q.Q;
  report["roots"] = {{"kappa", kappa}, {"b", sol.b}, {"s", sol.s}};
  report["near_degenerate"] = sol.near_degenerate;
  report["coefficients"] = coeffs;
  report["steady_state"] = steady;
  report["certification"] = {{"value_residual", sol.value_residual},
                             {"derivative_residual", sol.derivative_residual}};
  return emit_report(cfg, report, out);
}

int run_trace(const RunConfig& cfg, std::ostream& out) {
  const BlochParams p = cfg.bloch_params();
  const ClosedFormSolution sol = solve(p, cfg.init);

  std::vector<double> times;
  const std::size_t n = sample_count(cfg.t0, cfg.t1, cfg.dt);
  for (std::size_t j = 0; j <= n; ++j) times.push_back(cfg.t0 + static_cast<double>(j) * cfg.dt);
  if (cfg.t1 - times.back() > 1e-12 * std::max(1.0, cfg.t1)) {
    times.push_back(cfg.t1);
  } else {
    times.back() = cfg.t1;
  }

  std::vector<BlochState> numeric;
  if (cfg.with_oracle) {
    const double h_max = std::min(cfg.oracle_step, max_rk4_step(p));
    const auto substeps = static_cast<std::size_t>(std::ceil(cfg.dt / h_max - 1e-9));
    const double h = cfg.dt / static_cast<double>(std::max<std::size_t>(1, substeps));
    BlochState start = cfg.init;
    if (cfg.t0 > 0.0) start = rk4_integrate(p, cfg.init, 0.0, cfg.t0, std::min(h, cfg.t0)).samples.back().state;
    const TraceGrid grid = rk4_integrate(p, start, cfg.t0, cfg.t1, h);
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
      numeric.push_back(grid.samples[std::min(j * substeps, grid.samples.size() - 1)].state);
    }
    numeric.push_back(grid.samples.back().state);
  }

  std::vector<std::string> columns = {"t", "u", "v", "w"};
  if (cfg.with_oracle) columns.insert(columns.end(), {"u_num", "v_num", "w_num", "err_max"});

  if (cfg.effective_format() == Format::Json) {
    json rows = json::array();
    for (std::size_t j = 0; j < times.size(); ++j) {
      const BlochState x = evaluate(sol, times[j]);
      json row = {times[j], x.u, x.v, x.w};
      if (cfg.with_oracle) {
        const BlochState& y = numeric[j];
        const double err = std::max({std::abs(x.u - y.u), std::abs(x.v - y.v), std::abs(x.w - y.w)});
        row.insert(row.end(), {y.u, y.v, y.w, err});
      }
      rows.push_back(std::move(row));
    }
    write_json(out, {{"regime", to_string(sol.form)}, {"columns", columns}, {"rows", rows}});
    return kExitOk;
  }

  std::string header;
  for (const auto& c : columns) header += (header.empty() ? "" : ",") + c;
  out << header << '\n';
  CsvWriter csv(out);
  for (std::size_t j = 0; j < times.size(); ++j) {
    const BlochState x = evaluate(sol, times[j]);
    if (cfg.with_oracle) {
      const BlochState& y = numeric[j];
      const double err = std::max({std::abs(x.u - y.u), std::abs(x.v - y.v), std::abs(x.w - y.w)});
      csv.row(times[j], x.u, x.v, x.w, y.u, y.v, y.w, err);
    } else {
      csv.row(times[j], x.u, x.v, x.w);
    }
  }
  return kExitOk;
}

int run_classify(const RunConfig& cfg, std::ostream& out) {
  json report;
  if (cfg.dimensionless_input() && !cfg.gamma && !cfg.gamma_t) {
    if (!cfg.beta) throw InputError("beta: required with alpha/alpha_r");
    if (cfg.alpha && cfg.alpha_r) throw InputError("alpha_r: mutually exclusive with alpha");
    const double a = cfg.alpha ? *cfg.alpha : cfg.alpha_r.value_or(0.0) / 27.0;
    report = regime_point_json(classify_regime(a, *cfg.beta));
  } else {
    const BlochParams p = cfg.bloch_params();
    report = regime_point_json(classify_regime(p));
    const RealCubic cubic = characteristic_poly(p);
    report["D"] = discriminant(cubic);
    if (cubic.a0 > 0.0) {
      const RootSet roots = classify_roots(cubic);
      const auto k = roots.decay_constants();
      report["roots"] = {{"tag", to_string(roots.tag)},
                         {"kappa", std::vector<double>(k.begin(), k.end())},
                         {"b", roots.b},
                         {"s", roots.s}};
    } else {
      report["roots"] = {{"tag", "ZeroRoot"}};
    }
  }
  return emit_report(cfg, report, out);
}

int run_map(const RunConfig& cfg, std::ostream& out) {
  const auto grid = scan_grid(cfg.alpha_range, cfg.beta_range);
  if (cfg.effective_format() == Format::Json) {
    json rows = json::array();
    for (const auto& r : grid) rows.push_back(regime_point_json(r));
    write_json(out, rows);
    return kExitOk;
  }
  out << "alpha,beta,dc,regime\n";
  CsvWriter csv(out);
  for (const auto& r : grid) {
    const std::string label = r.diagnostic ? std::string("Diagnostic:") + to_string(r.regime) : to_string(r.regime);
    csv.row(r.alpha, r.beta, r.dc, label);
  }
  return kExitOk;
}

int run_boundary(const RunConfig& cfg, std::ostream& out) {
  const auto curve = boundary_curve(cfg.steps_per_unit);
  if (cfg.effective_format() == Format::Json) {
    json rows = json::array();
    for (const auto& b : curve) {
      rows.push_back({{"beta", b.beta}, {"alpha", b.alpha}, {"branch", to_string(b.branch)}, {"theta", b.theta}});
    }
    write_json(out, rows);
    return kExitOk;
  }
  out << "beta,alpha,branch,theta\n";
  CsvWriter csv(out);
  for (const auto& b : curve) csv.row(b.beta, b.alpha, to_string(b.branch), b.theta);
  return kExitOk;
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
  const auto instances = stratified_instances(cfg.samples, cfg.seed);

  struct Tally {
    std::size_t count = 0;
    double max_error = 0.0;
  };
  std::map<std::string, Tally> by_stratum;
  std::map<std::string, Tally> by_form;
  std::size_t failures = 0;
  std::size_t errors = 0;
  double worst = 0.0;
  json worst_case;

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    auto& st = by_stratum[to_string(inst.stratum)];
    ++st.count;
    try {
      const ValidationResult res = validate_instance(inst, cfg.t1, cfg.oracle_step);
      const double err = res.comparison.max_error();
      auto& fm = by_form[to_string(res.form)];
      ++fm.count;
      fm.max_error = std::max(fm.max_error, err);
      st.max_error = std::max(st.max_error, err);
      if (!(err <= cfg.tolerance)) ++failures;
      if (!(err <= worst)) {
        worst = err;
        worst_case = {{"index", i},
                      {"stratum", to_string(inst.stratum)},
                      {"form", to_string(res.form)},
                      {"params", params_json(inst.params)},
                      {"init", state_json(inst.init)},
                      {"max_error", err}};
      }
    } catch (const std::exception&) {
      ++errors;
    }
  }

  json strata;
  for (const auto& [name, t] : by_stratum) strata[name] = {{"count", t.count}, {"max_error", t.max_error}};
  json forms;
  for (const auto& [name, t] : by_form) forms[name] = {{"count", t.count}, {"max_error", t.max_error}};
  const bool passed = failures == 0 && errors == 0;
  json report = {{"seed", cfg.seed},
                 {"samples", instances.size()},
                 {"t1", cfg.t1},
                 {"oracle_step", cfg.oracle_step},
                 {"tolerance", cfg.tolerance},
                 {"by_stratum", strata},
                 {"by_form", forms},
                 {"failures", failures},
                 {"errors", errors},
                 {"worst", worst_case},
                 {"passed", passed}};
  emit_report(cfg, report, out);
  return passed ? kExitOk : kExitCertificationFailure;
}

int run(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& err) {
  std::ofstream file;
  std::ostream* out = &stdout_stream;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: out: cannot open '" << cfg.out << "' for writing\n";
      return kExitInputError;
    }
    out = &file;
  }
  // buffer so a failed run leaves no partial data product behind
  std::ostringstream buffer;
  int code = kExitOk;
  try {
    switch (cfg.command) {
      case Command::Solve: code = run_solve(cfg, buffer); break;
      case Command::Trace: code = run_trace(cfg, buffer); break;
      case Command::Classify: code = run_classify(cfg, buffer); break;
      case Command::Map: code = run_map(cfg, buffer); break;
      case Command::Boundary: code = run_boundary(cfg, buffer); break;
      case Command::Validate: code = run_validate(cfg, buffer); break;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const CertificationError& e) {
    err << "certification failure: " << e.what();
    for (double r : e.residuals()) err << ' ' << format_double(r);
    err << '\n';
    return kExitCertificationFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitCertificationFailure;
  }
  *out << buffer.str();
  out->flush();
  if (!*out) {
    err << "error: out: write failed\n";
    return kExitInputError;
  }
  return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_command_line(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  }
  return run(cfg, out, err);
}

}  // namespace blochform::cli
