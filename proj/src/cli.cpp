#include "cachecraft/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cachecraft/delivery.hpp"
#include "cachecraft/errors.hpp"
#include "cachecraft/evaluator.hpp"
#include "cachecraft/formulations.hpp"
#include "cachecraft/io.hpp"
#include "cachecraft/probability.hpp"

namespace cachecraft {

namespace {

constexpr double kPlacementTolerance = 1e-6;

double parse_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw ValidationError("grid", "malformed grid \"" + spec + "\"");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string format_number(double x, bool raw) {
  char buf[64];
  if (raw) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
  } else {
    const double r = std::round(x * 1e6) / 1e6;
    std::snprintf(buf, sizeof buf, "%.6f", r == 0.0 ? 0.0 : r);
  }
  return buf;
}

// Rounds every floating-point number in j to 6 decimal places.
void round_json(Json& j) {
  if (j.is_number_float()) {
    const double r = std::round(j.get<double>() * 1e6) / 1e6;
    j = r == 0.0 ? 0.0 : r;
  } else if (j.is_structured()) {
    for (auto& item : j) round_json(item);
  }
}

// Placements stay at full precision so they can be fed back to eval and
// simulate without tripping the feasibility tolerance.
void emit(const Json& j, bool raw, std::ostream& out) {
  Json copy = j;
  if (!raw) {
    Json placement;
    if (copy.contains("placement")) placement = std::move(copy["placement"]);
    round_json(copy);
    if (!placement.is_null()) copy["placement"] = std::move(placement);
  }
  out << copy.dump(2) << '\n';
}

// Writes to `path`, or to `out` when path is empty.
void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

Json error_json(const std::string& kind, const std::string& message,
                const std::string& field = {}) {
  Json e = {{"kind", kind}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return {{"error", std::move(e)}};
}

Json report_json(const FeasibilityReport& report) {
  Json list = Json::array();
  for (const auto& v : report.violations) {
    list.push_back({{"constraint", v.constraint}, {"amount", v.amount}});
  }
  return {{"feasible", report.feasible()},
          {"max_violation", report.max_violation()},
          {"violations", std::move(list)}};
}

struct Options {
  std::string config;
  std::string placement;
  std::string method = "general";
  std::string out;
  std::string grid;
  std::string methods = "general";
  std::string demand;
  double tol = kPlacementTolerance;
  bool percent = false;
  bool raw = false;
  bool payloads = false;
  std::int64_t unit_bits = kDefaultUnitBits;
  std::uint64_t seed = 0;
};

int cmd_solve(const Options& o, std::ostream& out) {
  const SystemConfig cfg = load_config(o.config);
  const BuiltProblem bp = build(cfg, parse_formulation(o.method));
  const SolvedProblem s = solve_problem(bp);
  Json vars = Json::object();
  for (int i = 0; i < bp.vars.size(); ++i) {
    const VarLabel& lab = bp.vars.label(i);
    const double scale = lab.role == VarRole::weight ? 1.0 : bp.unit;
    vars[lab.name] = scale * s.solution.x[i];
  }
  const ResidualReport residual = check_solution(bp.lp, s.solution.x, 1e-7);
  const FeasibilityReport feas = validate_placement(cfg, s.placement, kPlacementTolerance);
  Json result = {
      {"method", to_string(bp.requested)},
      {"objective", s.objective},
      {"variables", std::move(vars)},
      {"placement", placement_to_json(s.placement)},
      {"diagnostics",
       {{"status", to_string(s.solution.status)},
        {"formulation", to_string(bp.built)},
        {"iterations", s.solution.iterations},
        {"num_variables", bp.lp.num_vars()},
        {"num_constraints", bp.lp.num_constraints()},
        {"max_constraint_violation", residual.max_constraint_violation},
        {"placement_feasible", feas.feasible()}}},
  };
  if (s.grouped) result["grouped"] = grouped_to_json(*s.grouped);
  std::ostringstream text;
  emit(result, o.raw, text);
  emit_text(text.str(), o.out, out);
  return kExitOk;
}

int cmd_curve(const Options& o, std::ostream& out) {
  const SystemConfig tmpl = load_config(o.config);
  const std::vector<double> grid = parse_grid(o.grid);
  std::vector<std::string> methods;
  for (const auto& m : split(o.methods, ',')) {
    if (m.empty()) throw ValidationError("methods", "empty method name");
    methods.push_back(m);
  }
  if (methods.empty()) throw ValidationError("methods", "no methods given");
  std::vector<std::vector<CurvePoint>> curves;
  for (const auto& m : methods) curves.push_back(sweep_curve(tmpl, grid, m));

  std::ostringstream csv;
  csv << "M,method,expected_rate";
  if (o.percent) csv << ",percent_increase";
  csv << '\n';
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const CurvePoint& pt = curves[m][g];
      csv << format_number(pt.cache_size, o.raw) << ',' << pt.method << ','
          << format_number(pt.expected_rate, o.raw);
      if (o.percent) {
        csv << ',' << format_number(percent_increase(pt.expected_rate, curves[0][g].expected_rate),
                                    o.raw);
      }
      csv << '\n';
    }
  }
  emit_text(csv.str(), o.out, out);
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const SystemConfig cfg = load_config(o.config);
  const Placement pl = load_placement(o.placement);
  const FeasibilityReport report = validate_placement(cfg, pl, o.tol);
  Json result = report_json(report);
  if (report.feasible()) result["expected_rate"] = expected_rate(cfg, pl).expected_rate;
  std::ostringstream text;
  emit(result, o.raw, text);
  emit_text(text.str(), o.out, out);
  return report.feasible() ? kExitOk : kExitFailure;
}

DemandVector parse_demand(const std::string& text, const SystemConfig& cfg) {
  DemandVector d;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    int f = 0;
    try {
      f = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ValidationError("demand", "malformed demand \"" + text + "\"");
    }
    d.files.push_back(f - 1);
  }
  check_demand(cfg, d);
  return d;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const SystemConfig cfg = load_config(o.config);
  const Placement pl = load_placement(o.placement);
  Json result;
  bool ok = true;
  if (!o.demand.empty()) {
    const DemandVector d = parse_demand(o.demand, cfg);
    const BitCatalog cat = materialize(cfg, pl, o.unit_bits, o.seed);
    const TransmissionLog log = deliver(cat, d);
    const DecodeReport report = decode_all(cat, log, d);
    ok = report.all_decoded();
    result = {{"summary", "decoded " + std::to_string(report.decoded_count()) + "/" +
                              std::to_string(cfg.num_users()) + " users"},
              {"rate_bits", rate_for_demand(pl, d) * static_cast<double>(o.unit_bits)},
              {"log", log_to_json(log, o.payloads)},
              {"report", report_to_json(report)}};
  } else {
    const SimulationSummary s = simulate_all(cfg, pl, o.unit_bits, o.seed);
    ok = s.fully_decoded == s.demands;
    result = {{"demands", s.demands},
              {"fully_decoded", s.fully_decoded},
              {"decode_rate", s.demands ? static_cast<double>(s.fully_decoded) /
                                              static_cast<double>(s.demands)
                                        : 1.0},
              {"expected_bits", s.expected_bits},
              {"expected_rate_bits",
               expected_rate(cfg, pl).expected_rate * static_cast<double>(o.unit_bits)},
              {"max_slack_bits", s.max_slack_bits}};
  }
  result["unit_bits"] = o.unit_bits;
  result["seed"] = o.seed;
  std::ostringstream text;
  emit(result, o.raw, text);
  emit_text(text.str(), o.out, out);
  return ok ? kExitOk : kExitFailure;
}

int cmd_pmf(const Options& o, std::ostream& out) {
  const SystemConfig cfg = load_config(o.config);
  const OrderStatTable table = order_stat_pmf(cfg.popularities(), cfg.num_users());
  std::ostringstream csv;
  csv << 'm';
  for (int i = 0; i < table.num_files(); ++i) csv << ",file_" << i + 1;
  csv << '\n';
  for (int m = 0; m < table.num_users(); ++m) {
    csv << m;
    for (int i = 0; i < table.num_files(); ++i) csv << ',' << format_number(table(m, i), o.raw);
    csv << '\n';
  }
  emit_text(csv.str(), o.out, out);
  return kExitOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) throw ValidationError("grid", "grid is empty");
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ValidationError("grid", "grid must be start:stop:step");
    const double start = parse_number(parts[0], spec);
    const double stop = parse_number(parts[1], spec);
    const double step = parse_number(parts[2], spec);
    if (!(step > 0.0) || stop < start) {
      throw ValidationError("grid", "grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& item : split(spec, ',')) grid.push_back(parse_number(item, spec));
  }
  if (grid.empty()) throw ValidationError("grid", "grid is empty");
  return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coded-caching placement optimizer and delivery simulator", "cachecraft"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Solve one formulation and write the optimum as JSON");
  solve->add_option("config", o.config, "Config JSON")->required();
  solve->add_option("--method", o.method,
                    "general|homogeneous|simplex|pop-first|length-first|two-tier|full-het");
  solve->add_option("--out", o.out, "Output path (default stdout)");
  solve->add_flag("--raw", o.raw, "Full precision output");

  auto* curve = app.add_subcommand("curve", "Sweep cache sizes and write a rate-memory CSV");
  curve->add_option("config", o.config, "Config JSON template")->required();
  curve->add_option("--grid", o.grid, "start:stop:step or a comma list")->required();
  curve->add_option("--methods", o.methods, "Comma-separated method ids");
  curve->add_flag("--percent", o.percent, "Add the increase over the first method, in percent");
  curve->add_option("--out", o.out, "Output path (default stdout)");
  curve->add_flag("--raw", o.raw, "Full precision output");

  auto* eval = app.add_subcommand("eval", "Check a placement and compute its expected rate");
  eval->add_option("config", o.config, "Config JSON")->required();
  eval->add_option("placement", o.placement, "Placement JSON")->required();
  eval->add_option("--tol", o.tol, "Feasibility tolerance");
  eval->add_option("--out", o.out, "Output path (default stdout)");
  eval->add_flag("--raw", o.raw, "Full precision output");

  auto* simulate = app.add_subcommand("simulate", "Run bit-level delivery and decoding");
  simulate->add_option("config", o.config, "Config JSON")->required();
  simulate->add_option("placement", o.placement, "Placement JSON")->required();
  simulate->add_option("--unit-bits", o.unit_bits, "Bits per unit of file length");
  simulate->add_option("--seed", o.seed, "Seed for file contents");
  simulate->add_option("--demand", o.demand, "Single demand, e.g. 1,2,3,4 (default: all)");
  simulate->add_flag("--payloads", o.payloads, "Include payload hex in the log");
  simulate->add_option("--out", o.out, "Output path (default stdout)");
  simulate->add_flag("--raw", o.raw, "Full precision output");

  auto* pmf = app.add_subcommand("pmf", "Write the order-statistic PMF table as CSV");
  pmf->add_option("config", o.config, "Config JSON")->required();
  pmf->add_option("--out", o.out, "Output path (default stdout)");
  pmf->add_flag("--raw", o.raw, "Full precision output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what()).dump() << '\n';
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out);
    if (curve->parsed()) return cmd_curve(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (pmf->parsed()) return cmd_pmf(o, out);
  } catch (const ValidationError& e) {
    err << error_json("validation", e.what(), e.field()).dump() << '\n';
    return kExitUsage;
  } catch (const LimitError& e) {
    err << error_json("limit", e.what()).dump() << '\n';
    return kExitLimit;
  } catch (const NumericError& e) {
    err << error_json("numeric", e.what()).dump() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << error_json("error", e.what()).dump() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cachecraft
