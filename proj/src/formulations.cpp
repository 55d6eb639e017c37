#include "cachecraft/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cachecraft/errors.hpp"
#include "cachecraft/probability.hpp"
#include "cachecraft/schemes.hpp"

namespace cachecraft {

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::general: return "general";
    case Formulation::homogeneous: return "homogeneous";
    case Formulation::simplex_form: return "simplex";
    case Formulation::popularity_first: return "pop-first";
    case Formulation::length_first: return "length-first";
    case Formulation::two_tier: return "two-tier";
    case Formulation::full_het: return "full-het";
  }
  return "unknown";
}

Formulation parse_formulation(std::string_view id) {
  for (Formulation f : {Formulation::general, Formulation::homogeneous, Formulation::simplex_form,
                        Formulation::popularity_first, Formulation::length_first,
                        Formulation::two_tier, Formulation::full_het}) {
    if (id == to_string(f)) return f;
  }
  throw ValidationError("method", "unknown method \"" + std::string(id) + "\"");
}

int VarMap::add(VarLabel label) {
  const int idx = size();
  if (!by_name_.emplace(label.name, idx).second) {
    throw Error("duplicate variable name " + label.name);
  }
  labels_.push_back(std::move(label));
  return idx;
}

int VarMap::index(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ValidationError("variable", "no variable named " + name);
  return it->second;
}

std::optional<int> VarMap::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string bracket(std::initializer_list<std::string> parts) {
  std::string out = "[";
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out += ",";
    out += p;
    first = false;
  }
  return out + "]";
}

std::string num(int i) { return std::to_string(i); }

BuiltProblem start(const SystemConfig& cfg, Formulation f) {
  BuiltProblem bp{f, f, cfg, {}, {}, {}, 1.0};
  bp.file_order.resize(cfg.num_files());
  std::iota(bp.file_order.begin(), bp.file_order.end(), 0);
  return bp;
}

int add_var(BuiltProblem& bp, VarLabel label, double cost) {
  const int j = bp.lp.add_variable(label.name, cost);
  const int k = bp.vars.add(std::move(label));
  if (j != k) throw Error("variable map out of sync");
  return j;
}

void require_uniform(const SystemConfig& cfg, bool lengths, bool popularity, bool cache,
                     const char* who) {
  if (lengths && !cfg.uniform_lengths()) {
    throw ValidationError("F", std::string(who) + " requires equal file lengths");
  }
  if (popularity && !cfg.uniform_popularity()) {
    throw ValidationError("p", std::string(who) + " requires equal popularities");
  }
  if (cache && !cfg.uniform_cache()) {
    throw ValidationError("M", std::string(who) + " requires equal cache sizes");
  }
}

void require_classes(const SystemConfig& cfg) {
  if (!cfg.classes()) throw ValidationError("classes", "cache classes required");
}

// Ranks files by decreasing popularity, ties by index.
std::vector<int> popularity_order(const SystemConfig& cfg) {
  std::vector<int> order(cfg.num_files());
  std::iota(order.begin(), order.end(), 0);
  const auto& p = cfg.popularities();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p[a] > p[b]; });
  return order;
}

// Ranks files by decreasing length, then decreasing popularity, then index.
std::vector<int> length_order(const SystemConfig& cfg) {
  std::vector<int> order(cfg.num_files());
  std::iota(order.begin(), order.end(), 0);
  const auto& F = cfg.file_lengths();
  const auto& p = cfg.popularities();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (F[a] != F[b]) return F[a] > F[b];
    return p[a] > p[b];
  });
  return order;
}

std::vector<double> permuted(const std::vector<double>& v, const std::vector<int>& order) {
  std::vector<double> out(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[r] = v[order[r]];
  return out;
}

// Total is renormalized after permuting so round-off cannot trip validation.
std::vector<double> ranked_popularities(const SystemConfig& cfg, const std::vector<int>& order) {
  std::vector<double> p = permuted(cfg.popularities(), order);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

double min_cache(const SystemConfig& cfg) {
  return *std::min_element(cfg.cache_sizes().begin(), cfg.cache_sizes().end());
}

}  // namespace

BuiltProblem build_general(const SystemConfig& cfg) {
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  const double guard = demand_count(N, K) * (std::pow(2.0, K) - 1.0);
  if (guard > enumeration_cap()) {
    throw LimitError("general formulation too large: N^K (2^K - 1) = " + std::to_string(guard));
  }
  BuiltProblem bp = start(cfg, Formulation::general);
  const int subsets = num_subsets(K);
  const auto& p = cfg.popularities();

  std::vector<int> w(static_cast<std::size_t>(N) * subsets);
  for (int l = 0; l < N; ++l) {
    for (int s = 0; s < subsets; ++s) {
      VarLabel lab{VarRole::subfile, "W" + bracket({num(l + 1), "{" + subset_key(s) + "}"})};
      lab.file = l;
      lab.subset = static_cast<UserSet>(s);
      lab.size = set_size(static_cast<UserSet>(s));
      // Singleton subsets always send W^{(d_k)}_{empty}.
      w[l * subsets + s] = add_var(bp, std::move(lab), s == 0 ? K * p[l] : 0.0);
    }
  }
  std::vector<int> mu(static_cast<std::size_t>(K) * N);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < N; ++l) {
      VarLabel lab{VarRole::cache_share, "mu" + bracket({num(k + 1), num(l + 1)})};
      lab.user = k;
      lab.file = l;
      mu[k * N + l] = add_var(bp, std::move(lab), 0.0);
    }
  }

  for (int l = 0; l < N; ++l) {
    std::vector<LinearTerm> row;
    for (int s = 0; s < subsets; ++s) row.push_back({w[l * subsets + s], 1.0});
    bp.lp.add_constraint(std::move(row), Relation::equal, cfg.file_lengths()[l],
                         "recon" + bracket({num(l + 1)}));
  }
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < N; ++l) {
      std::vector<LinearTerm> row;
      for (int s = 0; s < subsets; ++s) {
        if (contains(static_cast<UserSet>(s), k)) row.push_back({w[l * subsets + s], 1.0});
      }
      row.push_back({mu[k * N + l], -1.0});
      bp.lp.add_constraint(std::move(row), Relation::less_equal, 0.0,
                           "cache" + bracket({num(k + 1), num(l + 1)}));
    }
    std::vector<LinearTerm> row;
    for (int l = 0; l < N; ++l) row.push_back({mu[k * N + l], 1.0});
    bp.lp.add_constraint(std::move(row), Relation::equal, cfg.cache_sizes()[k],
                         "memory" + bracket({num(k + 1)}));
  }

  // One epigraph variable per subset T (|T| >= 2) and per assignment of
  // files to the users of T; its probability is the product over T.
  for (int t = 1; t < subsets; ++t) {
    const UserSet T = static_cast<UserSet>(t);
    const std::vector<int> users = members(T);
    const int size = static_cast<int>(users.size());
    if (size < 2) continue;
    std::vector<int> e(size, 0);
    while (true) {
      double prob = 1.0;
      std::string tag;
      for (int i = 0; i < size; ++i) {
        prob *= p[e[i]];
        tag += (i ? "," : "") + num(e[i] + 1);
      }
      VarLabel lab{VarRole::epigraph, "t[{" + subset_key(T) + "};" + tag + "]"};
      lab.subset = T;
      lab.size = size;
      const int tv = add_var(bp, std::move(lab), prob);
      for (int i = 0; i < size; ++i) {
        const UserSet rest = T & ~singleton(users[i]);
        bp.lp.add_constraint({{tv, 1.0}, {w[e[i] * subsets + rest], -1.0}},
                             Relation::greater_equal, 0.0);
      }
      int pos = size - 1;
      while (pos >= 0 && ++e[pos] == N) e[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return bp;
}

BuiltProblem build_homogeneous(const SystemConfig& cfg) {
  require_uniform(cfg, true, true, true, "homogeneous formulation");
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  const double F = cfg.file_lengths()[0];
  BuiltProblem bp = start(cfg, Formulation::homogeneous);
  bp.unit = F;
  std::vector<LinearTerm> recon, cache;
  for (int j = 0; j <= K; ++j) {
    VarLabel lab{VarRole::grouped, "v" + bracket({num(j)})};
    lab.size = j;
    const int v = add_var(bp, std::move(lab), choose(K, j + 1));
    recon.push_back({v, choose(K, j)});
    if (j >= 1) cache.push_back({v, choose(K - 1, j - 1)});
  }
  bp.lp.add_constraint(std::move(recon), Relation::equal, 1.0, "recon");
  bp.lp.add_constraint(std::move(cache), Relation::less_equal, cfg.cache_sizes()[0] / (N * F),
                       "cache");
  return bp;
}

BuiltProblem build_simplex_form(const SystemConfig& cfg) {
  require_uniform(cfg, true, true, true, "simplex formulation");
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  const double F = cfg.file_lengths()[0];
  BuiltProblem bp = start(cfg, Formulation::simplex_form);
  bp.unit = F;
  std::vector<LinearTerm> total, cache;
  for (int j = 0; j <= K; ++j) {
    VarLabel lab{VarRole::weight, "a" + bracket({num(j)})};
    lab.size = j;
    const int a = add_var(bp, std::move(lab), static_cast<double>(K - j) / (j + 1));
    total.push_back({a, 1.0});
    if (j >= 1) cache.push_back({a, static_cast<double>(j)});
  }
  bp.lp.add_constraint(std::move(total), Relation::equal, 1.0, "simplex");
  bp.lp.add_constraint(std::move(cache), Relation::less_equal,
                       K * cfg.cache_sizes()[0] / (N * F), "cache");
  return bp;
}

namespace {

// Shared body of the popularity-first and length-first programs: per-file
// variables v_{l,j}, per-file memory mu_l, monotone ordering over ranks for
// j in [j_lo, j_hi], objective sum_j sum_i C(K-1-i, j) Pr[Y_i = l] v_{l,j}.
BuiltProblem build_per_file(const SystemConfig& cfg, Formulation f, std::vector<int> order,
                            int j_lo, int j_hi) {
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  BuiltProblem bp = start(cfg, f);
  bp.file_order = std::move(order);
  const OrderStatTable Y = order_stat_pmf(ranked_popularities(cfg, bp.file_order), K);

  std::vector<std::vector<int>> v(N, std::vector<int>(K + 1));
  std::vector<int> mu(N);
  for (int r = 0; r < N; ++r) {
    const int l = bp.file_order[r];
    for (int j = 0; j <= K; ++j) {
      double cost = 0.0;
      if (j < K) {
        for (int i = 0; i < K; ++i) cost += choose(K - 1 - i, j) * Y(i, r);
      }
      VarLabel lab{VarRole::grouped, "v" + bracket({num(l + 1), num(j)})};
      lab.file = l;
      lab.size = j;
      v[r][j] = add_var(bp, std::move(lab), cost);
    }
    VarLabel lab{VarRole::cache_share, "mu" + bracket({num(l + 1)})};
    lab.file = l;
    mu[r] = add_var(bp, std::move(lab), 0.0);
  }
  for (int r = 0; r < N; ++r) {
    const int l = bp.file_order[r];
    std::vector<LinearTerm> recon, cache;
    for (int j = 0; j <= K; ++j) {
      recon.push_back({v[r][j], choose(K, j)});
      if (j >= 1) cache.push_back({v[r][j], choose(K - 1, j - 1)});
    }
    cache.push_back({mu[r], -1.0});
    bp.lp.add_constraint(std::move(recon), Relation::equal, cfg.file_lengths()[l],
                         "recon" + bracket({num(l + 1)}));
    bp.lp.add_constraint(std::move(cache), Relation::less_equal, 0.0,
                         "cache" + bracket({num(l + 1)}));
  }
  std::vector<LinearTerm> memory;
  for (int r = 0; r < N; ++r) memory.push_back({mu[r], 1.0});
  bp.lp.add_constraint(std::move(memory), Relation::equal, min_cache(cfg), "memory");
  for (int r1 = 0; r1 < N; ++r1) {
    for (int r2 = r1 + 1; r2 < N; ++r2) {
      for (int j = j_lo; j <= j_hi; ++j) {
        bp.lp.add_constraint({{v[r1][j], 1.0}, {v[r2][j], -1.0}}, Relation::greater_equal, 0.0,
                             "order" + bracket({num(bp.file_order[r1] + 1),
                                                num(bp.file_order[r2] + 1), num(j)}));
      }
    }
  }
  return bp;
}

}  // namespace

BuiltProblem build_popularity_first(const SystemConfig& cfg) {
  require_uniform(cfg, true, false, false, "popularity-first formulation");
  const int K = cfg.num_users();
  return build_per_file(cfg, Formulation::popularity_first, popularity_order(cfg), 1, K);
}

BuiltProblem build_length_first(const SystemConfig& cfg) {
  const int K = cfg.num_users();
  return build_per_file(cfg, Formulation::length_first, length_order(cfg), 0, K - 1);
}

BuiltProblem build_two_tier(const SystemConfig& cfg) {
  require_classes(cfg);
  require_uniform(cfg, true, true, false, "two-tier formulation");
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  const int ks = cfg.small_users();
  const int kl = cfg.large_users();
  if (ks == 0 || kl == 0) {
    BuiltProblem bp = build_homogeneous(cfg);
    bp.requested = Formulation::two_tier;
    return bp;
  }
  const double F = cfg.file_lengths()[0];
  BuiltProblem bp = start(cfg, Formulation::two_tier);

  auto grouped = [&](const std::string& name, int j, SubsetClass c, double cost) {
    VarLabel lab{VarRole::grouped, name};
    lab.size = j;
    lab.cls = c;
    return add_var(bp, std::move(lab), cost);
  };
  const int v0 = grouped("v0", 0, SubsetClass::empty, K);
  std::vector<int> vs(K + 1, -1), vl(K + 1, -1), vm(K + 1, -1);
  for (int j = 1; j <= ks; ++j) {
    vs[j] = grouped("vS" + bracket({num(j)}), j, SubsetClass::small_only, choose(ks, j + 1));
  }
  for (int j = 1; j <= kl; ++j) {
    vl[j] = grouped("vL" + bracket({num(j)}), j, SubsetClass::large_only,
                    choose(kl, j + 1) + ks * choose(kl, j));
  }
  for (int j = 2; j <= K; ++j) {
    const double cost =
        choose(K, j + 1) - choose(ks, j + 1) - choose(kl, j + 1) - ks * choose(kl, j);
    vm[j] = grouped("vM" + bracket({num(j)}), j, SubsetClass::mixed, cost);
  }

  std::vector<LinearTerm> recon{{v0, 1.0}}, small, large;
  for (int j = 1; j <= K; ++j) {
    if (vs[j] >= 0) {
      recon.push_back({vs[j], choose(ks, j)});
      small.push_back({vs[j], choose(ks - 1, j - 1)});
    }
    if (vl[j] >= 0) {
      recon.push_back({vl[j], choose(kl, j)});
      large.push_back({vl[j], choose(kl - 1, j - 1)});
    }
    if (vm[j] >= 0) {
      recon.push_back({vm[j], choose(K, j) - choose(ks, j) - choose(kl, j)});
      small.push_back({vm[j], choose(K - 1, j - 1) - choose(ks - 1, j - 1)});
      large.push_back({vm[j], choose(K - 1, j - 1) - choose(kl - 1, j - 1)});
    }
  }
  bp.lp.add_constraint(std::move(recon), Relation::equal, F, "recon");
  bp.lp.add_constraint(std::move(small), Relation::less_equal, cfg.classes()->small_size / N,
                       "cache_small");
  bp.lp.add_constraint(std::move(large), Relation::less_equal, cfg.classes()->large_size / N,
                       "cache_large");
  for (int j = 2; j <= kl; ++j) {
    bp.lp.add_constraint({{vl[j], 1.0}, {vm[j], -1.0}}, Relation::greater_equal, 0.0,
                         "large_over_mixed" + bracket({num(j)}));
  }
  for (int j = 2; j <= ks; ++j) {
    bp.lp.add_constraint({{vm[j], 1.0}, {vs[j], -1.0}}, Relation::greater_equal, 0.0,
                         "mixed_over_small" + bracket({num(j)}));
  }
  for (int j = 1; j <= std::min(kl, ks); ++j) {
    bp.lp.add_constraint({{vl[j], 1.0}, {vs[j], -1.0}}, Relation::greater_equal, 0.0,
                         "large_over_small" + bracket({num(j)}));
  }
  return bp;
}

namespace {

// Weight of the mixed-subset family with at least two users of each class,
// for the order statistic at 1-based position n and subset size j + 1.
double nu(int K, int ks, int kl, int n, int j) {
  double total = 0.0;
  const double below_ways = choose(K, n - 1);
  for (int m = 0; m <= n - 1; ++m) {
    const double arrangement = choose(ks, m) * choose(kl, n - 1 - m) / below_ways;
    if (arrangement == 0.0) continue;
    const double rest = K - n + 1;
    double nu1 = 0.0;
    for (int i = 1; i <= j - 2; ++i) {
      nu1 += choose(ks - m - 1, i) * choose(kl - n + 1 + m, j - i);
    }
    double nu2 = 0.0;
    for (int i = 2; i <= j - 1; ++i) {
      nu2 += choose(ks - m, i) * choose(kl - n + m, j - i);
    }
    total += arrangement * ((ks - m) / rest * nu1 + (kl - n + 1 + m) / rest * nu2);
  }
  return total;
}

}  // namespace

BuiltProblem build_full_het(const SystemConfig& cfg) {
  require_classes(cfg);
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  const int ks = cfg.small_users();
  const int kl = cfg.large_users();
  if (ks == 0 || kl == 0) {
    BuiltProblem bp = build_length_first(cfg);
    bp.requested = Formulation::full_het;
    return bp;
  }
  BuiltProblem bp = start(cfg, Formulation::full_het);
  bp.file_order = length_order(cfg);
  const std::vector<double> p = ranked_popularities(cfg, bp.file_order);
  const OrderStatTable Y = order_stat_pmf(p, K);
  const OrderStatTable YS = group_order_stat_pmf(p, ks);
  const OrderStatTable YL = group_order_stat_pmf(p, kl);
  const int kmax = std::max(ks, kl);

  struct FileVars {
    int v0;
    std::vector<int> s, l, m;
    int mus, mul;
  };
  std::vector<FileVars> fv(N);
  for (int r = 0; r < N; ++r) {
    const int f = bp.file_order[r];
    auto grouped = [&](const std::string& prefix, int j, SubsetClass c) {
      VarLabel lab{VarRole::grouped, prefix + bracket({num(f + 1), num(j)})};
      lab.file = f;
      lab.size = j;
      lab.cls = c;
      return add_var(bp, std::move(lab), 0.0);
    };
    FileVars& x = fv[r];
    x.s.assign(K + 1, -1);
    x.l.assign(K + 1, -1);
    x.m.assign(K + 1, -1);
    x.v0 = grouped("v0", 0, SubsetClass::empty);
    for (int j = 1; j <= ks; ++j) x.s[j] = grouped("vS", j, SubsetClass::small_only);
    for (int j = 1; j <= kl; ++j) x.l[j] = grouped("vL", j, SubsetClass::large_only);
    for (int j = 2; j <= K; ++j) x.m[j] = grouped("vM", j, SubsetClass::mixed);
    auto share = [&](const std::string& prefix, SubsetClass c) {
      VarLabel lab{VarRole::cache_share, prefix + bracket({num(f + 1)})};
      lab.file = f;
      lab.cls = c;
      return add_var(bp, std::move(lab), 0.0);
    };
    x.mus = share("muS", SubsetClass::small_only);
    x.mul = share("muL", SubsetClass::large_only);

    // Singletons.
    for (int i = 0; i < K; ++i) bp.lp.add_cost(x.v0, Y(i, r));
    // Subsets inside one class.
    for (int j = 1; j <= kl - 1; ++j) {
      for (int i = 0; i < kl; ++i) bp.lp.add_cost(x.l[j], choose(kl - 1 - i, j) * YL(i, r));
    }
    for (int j = 1; j <= ks - 1; ++j) {
      for (int i = 0; i < ks; ++i) bp.lp.add_cost(x.s[j], choose(ks - 1 - i, j) * YS(i, r));
    }
    // One small user with j large users: the small user's file decides.
    for (int j = 1; j <= kl; ++j) {
      for (int i = 0; i < ks; ++i) bp.lp.add_cost(x.l[j], choose(kl, j) * YS(i, r));
    }
    // One large user with j small users: the earliest small file decides.
    for (int j = 2; j <= ks; ++j) {
      for (int i = 0; i < ks; ++i) {
        bp.lp.add_cost(x.m[j], choose(ks - 1 - i, j - 1) * kl * YS(i, r));
      }
    }
    // Subsets too large to miss either class twice.
    for (int j = kmax + 1; j <= K - 1; ++j) {
      for (int i = 0; i < K; ++i) bp.lp.add_cost(x.m[j], choose(K - 1 - i, j) * Y(i, r));
    }
    // Remaining mixed subsets with at least two users of each class.
    for (int j = 3; j <= std::min(kmax, K - 1); ++j) {
      for (int n = 1; n <= K; ++n) bp.lp.add_cost(x.m[j], Y(n - 1, r) * nu(K, ks, kl, n, j));
    }
  }

  for (int r = 0; r < N; ++r) {
    const int f = bp.file_order[r];
    const FileVars& x = fv[r];
    std::vector<LinearTerm> recon{{x.v0, 1.0}}, small, large;
    for (int j = 1; j <= K; ++j) {
      if (x.s[j] >= 0) {
        recon.push_back({x.s[j], choose(ks, j)});
        small.push_back({x.s[j], choose(ks - 1, j - 1)});
      }
      if (x.l[j] >= 0) {
        recon.push_back({x.l[j], choose(kl, j)});
        large.push_back({x.l[j], choose(kl - 1, j - 1)});
      }
      if (x.m[j] >= 0) {
        recon.push_back({x.m[j], choose(K, j) - choose(ks, j) - choose(kl, j)});
        small.push_back({x.m[j], choose(K - 1, j - 1) - choose(ks - 1, j - 1)});
        large.push_back({x.m[j], choose(K - 1, j - 1) - choose(kl - 1, j - 1)});
      }
    }
    small.push_back({x.mus, -1.0});
    large.push_back({x.mul, -1.0});
    bp.lp.add_constraint(std::move(recon), Relation::equal, cfg.file_lengths()[f],
                         "recon" + bracket({num(f + 1)}));
    bp.lp.add_constraint(std::move(small), Relation::less_equal, 0.0,
                         "cache_small" + bracket({num(f + 1)}));
    bp.lp.add_constraint(std::move(large), Relation::less_equal, 0.0,
                         "cache_large" + bracket({num(f + 1)}));
  }
  {
    std::vector<LinearTerm> small, large;
    for (int r = 0; r < N; ++r) {
      small.push_back({fv[r].mus, 1.0});
      large.push_back({fv[r].mul, 1.0});
    }
    bp.lp.add_constraint(std::move(small), Relation::equal, cfg.classes()->small_size,
                         "memory_small");
    bp.lp.add_constraint(std::move(large), Relation::equal, cfg.classes()->large_size,
                         "memory_large");
  }

  auto order_row = [&](int a, int b, const char* what, int r1, int r2, int j) {
    bp.lp.add_constraint({{a, 1.0}, {b, -1.0}}, Relation::greater_equal, 0.0,
                         std::string(what) + bracket({num(bp.file_order[r1] + 1),
                                                      num(bp.file_order[r2] + 1), num(j)}));
  };
  for (int r1 = 0; r1 < N; ++r1) {
    for (int r2 = r1 + 1; r2 < N; ++r2) {
      order_row(fv[r1].v0, fv[r2].v0, "order", r1, r2, 0);
      for (int j = 1; j <= K - 1; ++j) {
        if (fv[r1].s[j] >= 0) order_row(fv[r1].s[j], fv[r2].s[j], "order_small", r1, r2, j);
        if (fv[r1].l[j] >= 0) order_row(fv[r1].l[j], fv[r2].l[j], "order_large", r1, r2, j);
        if (fv[r1].m[j] >= 0) order_row(fv[r1].m[j], fv[r2].m[j], "order_mixed", r1, r2, j);
      }
    }
  }
  for (int r1 = 0; r1 < N; ++r1) {
    for (int r2 = 0; r2 < N; ++r2) {
      for (int j = 2; j <= kl; ++j) {
        order_row(fv[r1].l[j], fv[r2].m[j], "large_over_mixed", r1, r2, j);
      }
      for (int j = 2; j <= ks; ++j) {
        order_row(fv[r1].m[j], fv[r2].s[j], "mixed_over_small", r1, r2, j);
      }
      for (int j = 1; j <= std::min(kl, ks); ++j) {
        order_row(fv[r1].l[j], fv[r2].s[j], "large_over_small", r1, r2, j);
      }
    }
  }
  return bp;
}

BuiltProblem build(const SystemConfig& cfg, Formulation f) {
  switch (f) {
    case Formulation::general: return build_general(cfg);
    case Formulation::homogeneous: return build_homogeneous(cfg);
    case Formulation::simplex_form: return build_simplex_form(cfg);
    case Formulation::popularity_first: return build_popularity_first(cfg);
    case Formulation::length_first: return build_length_first(cfg);
    case Formulation::two_tier: return build_two_tier(cfg);
    case Formulation::full_het: return build_full_het(cfg);
  }
  throw ValidationError("method", "unknown formulation");
}

double objective_value(const BuiltProblem& bp, const Eigen::VectorXd& x) {
  return bp.unit * bp.lp.objective_value(x);
}

GroupedScheme to_grouped(const BuiltProblem& bp, const Eigen::VectorXd& x) {
  const int K = bp.cfg.num_users();
  const int N = bp.cfg.num_files();
  auto at = [&](const std::string& name) { return bp.unit * x[bp.vars.index(name)]; };
  switch (bp.built) {
    case Formulation::general:
      throw ValidationError("method", "the general formulation has no grouped form");
    case Formulation::homogeneous: {
      std::vector<double> v(K + 1);
      for (int j = 0; j <= K; ++j) v[j] = at("v" + bracket({num(j)}));
      return GroupedScheme::homogeneous(std::move(v));
    }
    case Formulation::simplex_form: {
      std::vector<double> v(K + 1);
      for (int j = 0; j <= K; ++j) v[j] = at("a" + bracket({num(j)})) / choose(K, j);
      return GroupedScheme::homogeneous(std::move(v));
    }
    case Formulation::popularity_first:
    case Formulation::length_first: {
      Eigen::MatrixXd v(N, K + 1);
      for (int l = 0; l < N; ++l) {
        for (int j = 0; j <= K; ++j) v(l, j) = at("v" + bracket({num(l + 1), num(j)}));
      }
      return GroupedScheme::per_file(std::move(v));
    }
    case Formulation::two_tier: {
      const int ks = bp.cfg.small_users();
      const int kl = bp.cfg.large_users();
      std::vector<double> s(K + 1, 0.0), l(K + 1, 0.0), m(K + 1, 0.0);
      s[0] = l[0] = m[0] = at("v0");
      for (int j = 1; j <= ks; ++j) s[j] = at("vS" + bracket({num(j)}));
      for (int j = 1; j <= kl; ++j) l[j] = at("vL" + bracket({num(j)}));
      for (int j = 2; j <= K; ++j) m[j] = at("vM" + bracket({num(j)}));
      return GroupedScheme::two_tier(ks, std::move(s), std::move(l), std::move(m));
    }
    case Formulation::full_het: {
      const int ks = bp.cfg.small_users();
      const int kl = bp.cfg.large_users();
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(N, K + 1), l = s, m = s;
      for (int f = 0; f < N; ++f) {
        const std::string id = num(f + 1);
        s(f, 0) = l(f, 0) = m(f, 0) = at("v0" + bracket({id, "0"}));
        for (int j = 1; j <= ks; ++j) s(f, j) = at("vS" + bracket({id, num(j)}));
        for (int j = 1; j <= kl; ++j) l(f, j) = at("vL" + bracket({id, num(j)}));
        for (int j = 2; j <= K; ++j) m(f, j) = at("vM" + bracket({id, num(j)}));
      }
      return GroupedScheme::full_het(ks, std::move(s), std::move(l), std::move(m));
    }
  }
  throw ValidationError("method", "unknown formulation");
}

Placement to_placement(const BuiltProblem& bp, const Eigen::VectorXd& x) {
  if (x.size() != bp.lp.num_vars()) throw ValidationError("x", "solution has the wrong dimension");
  if (bp.built != Formulation::general) return expand_to_placement(bp.cfg, to_grouped(bp, x));
  const int K = bp.cfg.num_users();
  const int N = bp.cfg.num_files();
  Placement pl(K, N);
  for (int i = 0; i < bp.vars.size(); ++i) {
    const VarLabel& lab = bp.vars.label(i);
    if (lab.role == VarRole::subfile) pl.set_size(lab.file, lab.subset, std::max(0.0, x[i]));
    if (lab.role == VarRole::cache_share) pl.set_cache_share(lab.user, lab.file, x[i]);
  }
  return pl;
}

namespace {

// Pads the first share so the memory rows hold with equality.
void absorb_unused(Eigen::VectorXd& x, const std::vector<int>& shares, double memory) {
  double used = 0.0;
  for (int v : shares) used += x[v];
  if (!shares.empty() && used < memory) x[shares.front()] += memory - used;
}

}  // namespace

Eigen::VectorXd from_grouped(const BuiltProblem& bp, const GroupedScheme& gs) {
  if (bp.built == Formulation::general) {
    return from_placement(bp, expand_to_placement(bp.cfg, gs));
  }
  const int K = bp.cfg.num_users();
  const int N = bp.cfg.num_files();
  if (gs.num_users() != K) throw ValidationError("scheme", "grouped scheme has the wrong size");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(bp.lp.num_vars());
  switch (bp.built) {
    case Formulation::homogeneous:
    case Formulation::simplex_form: {
      if (gs.kind() != SchemeKind::homogeneous) {
        throw ValidationError("scheme", "homogeneous scheme expected");
      }
      for (int j = 0; j <= K; ++j) {
        const double v = gs.value(0, j, SubsetClass::empty) / bp.unit;
        if (bp.built == Formulation::homogeneous) {
          x[bp.vars.index("v" + bracket({num(j)}))] = v;
        } else {
          x[bp.vars.index("a" + bracket({num(j)}))] = v * choose(K, j);
        }
      }
      return x;
    }
    case Formulation::popularity_first:
    case Formulation::length_first: {
      if (gs.has_classes()) throw ValidationError("scheme", "per-file scheme expected");
      std::vector<int> shares;
      for (int l = 0; l < N; ++l) {
        double stored = 0.0;
        for (int j = 0; j <= K; ++j) {
          const double v = gs.value(l, j, SubsetClass::empty);
          x[bp.vars.index("v" + bracket({num(l + 1), num(j)}))] = v;
          if (j >= 1) stored += choose(K - 1, j - 1) * v;
        }
        const int mu = bp.vars.index("mu" + bracket({num(l + 1)}));
        x[mu] = stored;
        shares.push_back(mu);
      }
      absorb_unused(x, shares, min_cache(bp.cfg));
      return x;
    }
    case Formulation::two_tier: {
      if (gs.kind() != SchemeKind::two_tier) throw ValidationError("scheme", "two-tier scheme expected");
      x[bp.vars.index("v0")] = gs.small()(0, 0);
      for (int j = 1; j <= K; ++j) {
        if (auto i = bp.vars.find("vS" + bracket({num(j)}))) x[*i] = gs.small()(0, j);
        if (auto i = bp.vars.find("vL" + bracket({num(j)}))) x[*i] = gs.large()(0, j);
        if (auto i = bp.vars.find("vM" + bracket({num(j)}))) x[*i] = gs.mixed()(0, j);
      }
      return x;
    }
    case Formulation::full_het: {
      if (gs.kind() != SchemeKind::full_het) throw ValidationError("scheme", "full-het scheme expected");
      const int ks = bp.cfg.small_users();
      const int kl = bp.cfg.large_users();
      std::vector<int> small_shares, large_shares;
      for (int f = 0; f < N; ++f) {
        const std::string id = num(f + 1);
        x[bp.vars.index("v0" + bracket({id, "0"}))] = gs.small()(f, 0);
        double small_use = 0.0, large_use = 0.0;
        for (int j = 1; j <= K; ++j) {
          if (auto i = bp.vars.find("vS" + bracket({id, num(j)}))) {
            x[*i] = gs.small()(f, j);
            small_use += choose(ks - 1, j - 1) * gs.small()(f, j);
          }
          if (auto i = bp.vars.find("vL" + bracket({id, num(j)}))) {
            x[*i] = gs.large()(f, j);
            large_use += choose(kl - 1, j - 1) * gs.large()(f, j);
          }
          if (auto i = bp.vars.find("vM" + bracket({id, num(j)}))) {
            x[*i] = gs.mixed()(f, j);
            small_use += (choose(K - 1, j - 1) - choose(ks - 1, j - 1)) * gs.mixed()(f, j);
            large_use += (choose(K - 1, j - 1) - choose(kl - 1, j - 1)) * gs.mixed()(f, j);
          }
        }
        const int mus = bp.vars.index("muS" + bracket({id}));
        const int mul = bp.vars.index("muL" + bracket({id}));
        x[mus] = small_use;
        x[mul] = large_use;
        small_shares.push_back(mus);
        large_shares.push_back(mul);
      }
      absorb_unused(x, small_shares, bp.cfg.classes()->small_size);
      absorb_unused(x, large_shares, bp.cfg.classes()->large_size);
      return x;
    }
    case Formulation::general: break;
  }
  throw ValidationError("method", "unknown formulation");
}

Eigen::VectorXd from_placement(const BuiltProblem& bp, const Placement& pl) {
  if (bp.built != Formulation::general) {
    throw ValidationError("method", "placements map only onto the general formulation");
  }
  const int K = bp.cfg.num_users();
  const int N = bp.cfg.num_files();
  if (pl.num_users() != K || pl.num_files() != N) {
    throw ValidationError("placement", "placement dimensions do not match the configuration");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(bp.lp.num_vars());
  std::vector<std::vector<int>> shares(K);
  for (int i = 0; i < bp.vars.size(); ++i) {
    const VarLabel& lab = bp.vars.label(i);
    switch (lab.role) {
      case VarRole::subfile: x[i] = pl.size(lab.file, lab.subset); break;
      case VarRole::cache_share:
        x[i] = pl.cache_share(lab.user, lab.file);
        shares[lab.user].push_back(i);
        break;
      default: break;
    }
  }
  for (int k = 0; k < K; ++k) absorb_unused(x, shares[k], bp.cfg.cache_sizes()[k]);
  // Epigraph values are the maxima they bound.
  for (int r = 0; r < bp.lp.num_constraints(); ++r) {
    const Constraint& row = bp.lp.constraints()[r];
    if (row.terms.size() != 2 || bp.vars.label(row.terms[0].var).role != VarRole::epigraph) continue;
    const int t = row.terms[0].var;
    x[t] = std::max(x[t], x[row.terms[1].var]);
  }
  return x;
}

SolveOptions default_solve_options(const BuiltProblem& bp) {
  SolveOptions opts;
  if (bp.lp.num_vars() > 300) opts.pricing = Pricing::dantzig;
  return opts;
}

SolvedProblem solve_problem(const BuiltProblem& bp, const std::optional<SolveOptions>& opts) {
  const SolveOptions o = opts ? *opts : default_solve_options(bp);
  LpSolution sol = cachecraft::solve(bp.lp, o);
  if (sol.status != LpStatus::optimal) {
    throw Error(std::string(to_string(bp.requested)) + " formulation: solver returned " +
                to_string(sol.status));
  }
  SolvedProblem out{sol, objective_value(bp, sol.x), to_placement(bp, sol.x), std::nullopt};
  if (bp.built != Formulation::general) out.grouped = to_grouped(bp, sol.x);
  return out;
}

}  // namespace cachecraft
