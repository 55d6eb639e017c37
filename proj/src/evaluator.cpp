#include "cachecraft/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cachecraft/enumeration.hpp"
#include "cachecraft/errors.hpp"
#include "cachecraft/formulations.hpp"
#include "cachecraft/schemes.hpp"

namespace cachecraft {

double rate_for_demand(const Placement& pl, const std::vector<int>& demand) {
  const int K = pl.num_users();
  const Eigen::MatrixXd& sizes = pl.sizes();
  double rate = 0.0;
  for (UserSet s = 1; s < static_cast<UserSet>(num_subsets(K)); ++s) {
    double best = 0.0;
    for (UserSet rest = s; rest != 0; rest &= rest - 1) {
      const int k = std::countr_zero(rest);
      best = std::max(best, sizes(demand[k], s & ~singleton(k)));
    }
    rate += best;
  }
  return rate;
}

double rate_for_demand(const Placement& pl, const DemandVector& d) {
  if (static_cast<int>(d.files.size()) != pl.num_users()) {
    throw ValidationError("d", "demand must have one entry per user");
  }
  return rate_for_demand(pl, d.files);
}

namespace {

std::uint64_t checked_demand_total(const SystemConfig& cfg, const Placement& pl) {
  if (pl.num_users() != cfg.num_users() || pl.num_files() != cfg.num_files()) {
    throw ValidationError("placement", "placement dimensions do not match the configuration");
  }
  const double count = demand_count(cfg.num_files(), cfg.num_users());
  if (count > enumeration_cap()) {
    throw LimitError("N^K = " + std::to_string(count) + " exceeds the enumeration cap");
  }
  return static_cast<std::uint64_t>(count);
}

double rate_block(const SystemConfig& cfg, const Placement& pl, std::uint64_t begin,
                  std::uint64_t end, std::vector<std::pair<DemandVector, double>>* dump) {
  double acc = 0.0;
  for_each_demand(cfg.popularities(), cfg.num_users(), begin, end,
                  [&](const std::vector<int>& d, double prob) {
                    const double r = rate_for_demand(pl, d);
                    acc += prob * r;
                    if (dump) dump->emplace_back(DemandVector{d}, r);
                  });
  return acc;
}

}  // namespace

RateResult expected_rate_serial(const SystemConfig& cfg, const Placement& pl,
                                bool keep_per_demand) {
  const std::uint64_t total = checked_demand_total(cfg, pl);
  const std::uint64_t blocks = block_count(total);
  RateResult result;
  std::vector<std::pair<DemandVector, double>> dump;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    result.expected_rate += rate_block(cfg, pl, block_begin(total, blocks, b),
                                       block_begin(total, blocks, b + 1),
                                       keep_per_demand ? &dump : nullptr);
  }
  if (keep_per_demand) result.per_demand = std::move(dump);
  return result;
}

RateResult expected_rate(const SystemConfig& cfg, const Placement& pl, bool keep_per_demand) {
  const std::uint64_t total = checked_demand_total(cfg, pl);
  const std::uint64_t blocks = block_count(total);
  std::vector<double> partial(blocks, 0.0);
  std::vector<std::vector<std::pair<DemandVector, double>>> dumps(keep_per_demand ? blocks : 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    partial[ub] = rate_block(cfg, pl, block_begin(total, blocks, ub),
                             block_begin(total, blocks, ub + 1),
                             keep_per_demand ? &dumps[ub] : nullptr);
  }
  RateResult result;
  for (double v : partial) result.expected_rate += v;
  if (keep_per_demand) {
    std::vector<std::pair<DemandVector, double>> all;
    all.reserve(total);
    for (auto& d : dumps) std::move(d.begin(), d.end(), std::back_inserter(all));
    result.per_demand = std::move(all);
  }
  return result;
}

const std::vector<std::string>& curve_methods() {
  static const std::vector<std::string> ids = {
      "general", "homogeneous", "simplex", "pop-first", "length-first", "two-tier", "full-het",
      "theorem1", "decentralized", "random-popularity", "random-length", "random-class"};
  return ids;
}

SystemConfig config_at(const SystemConfig& tmpl, double cache_size) {
  const int K = tmpl.num_users();
  if (!tmpl.classes()) return tmpl.with_cache_sizes(std::vector<double>(K, cache_size));
  CacheClasses c = *tmpl.classes();
  const double mean =
      (c.small_users * c.small_size + (K - c.small_users) * c.large_size) / K;
  if (mean > 0.0) {
    c.small_size = cache_size * c.small_size / mean;
    c.large_size = cache_size * c.large_size / mean;
  } else {
    c.small_size = c.large_size = cache_size;
  }
  return SystemConfig::with_classes(K, tmpl.file_lengths(), tmpl.popularities(), c);
}

namespace {

Placement placement_for(const SystemConfig& cfg, const std::string& method) {
  if (method == "theorem1") {
    if (!cfg.uniform_lengths() || !cfg.uniform_cache()) {
      throw ValidationError("method", "theorem1 requires equal file lengths and cache sizes");
    }
    return expand_to_placement(cfg, theorem1_scheme(cfg.num_users(), cfg.num_files(),
                                                    cfg.cache_sizes()[0], cfg.file_lengths()[0]));
  }
  if (method == "decentralized") {
    if (!cfg.uniform_lengths() || !cfg.uniform_cache()) {
      throw ValidationError("method", "decentralized requires equal file lengths and cache sizes");
    }
    const double F = cfg.file_lengths()[0];
    const double q = std::min(1.0, cfg.cache_sizes()[0] / (cfg.num_files() * F));
    return expand_to_placement(cfg, decentralized_scheme(cfg.num_users(), q, F));
  }
  if (method == "random-popularity") return random_popularity_baseline(cfg);
  if (method == "random-length") return random_length_baseline(cfg);
  if (method == "random-class") return random_class_baseline(cfg);
  const Formulation f = parse_formulation(method);
  const BuiltProblem bp = build(cfg, f);
  const SolvedProblem sp = solve_problem(bp);
  return sp.placement;
}

}  // namespace

std::vector<CurvePoint> sweep_curve(const SystemConfig& tmpl, const std::vector<double>& grid,
                                    const std::string& method) {
  if (grid.empty()) throw ValidationError("grid", "grid is empty");
  if (std::find(curve_methods().begin(), curve_methods().end(), method) == curve_methods().end()) {
    throw ValidationError("method", "unknown method \"" + method + "\"");
  }
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double M : grid) {
    try {
      const SystemConfig cfg = config_at(tmpl, M);
      const Placement pl = placement_for(cfg, method);
      out.push_back({M, method, expected_rate(cfg, pl).expected_rate});
    } catch (const ValidationError& e) {
      std::ostringstream os;
      os << "M=" << M << ", " << method << ": " << e.what();
      throw ValidationError(e.field(), os.str());
    } catch (const LimitError& e) {
      std::ostringstream os;
      os << "M=" << M << ", " << method << ": " << e.what();
      throw LimitError(os.str());
    } catch (const NumericError& e) {
      std::ostringstream os;
      os << "M=" << M << ", " << method << ": " << e.what();
      throw NumericError(os.str());
    } catch (const Error& e) {
      std::ostringstream os;
      os << "M=" << M << ", " << method << ": " << e.what();
      throw Error(os.str());
    }
  }
  return out;
}

double percent_increase(double rate, double reference) {
  if (reference == 0.0) return rate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * (rate - reference) / reference;
}

}  // namespace cachecraft
