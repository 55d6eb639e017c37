#include "cachecraft/schemes.hpp"

#include <cmath>
#include <numeric>

#include "cachecraft/errors.hpp"
#include "cachecraft/probability.hpp"

namespace cachecraft {

GroupedScheme theorem1_scheme(int num_users, int num_files, double cache_size,
                              double file_length) {
  if (num_users < 1) throw ValidationError("K", "K must be a positive integer");
  if (num_files < 1) throw ValidationError("N", "N must be a positive integer");
  if (!(file_length > 0.0)) throw ValidationError("F", "file length must be positive");
  const double capacity = num_files * file_length;
  if (!(cache_size >= 0.0) || cache_size > capacity * (1.0 + 1e-12)) {
    throw ValidationError("M", "cache size must lie in [0, N*F]");
  }
  const int K = num_users;
  const double t = std::min(static_cast<double>(K), K * cache_size / capacity);
  std::vector<double> v(K + 1, 0.0);
  const double nearest = std::round(t);
  if (std::abs(t - nearest) <= 1e-12) {
    const int ti = static_cast<int>(nearest);
    v[ti] = file_length / choose(K, ti);
  } else {
    const int lo = static_cast<int>(std::floor(t));
    const int hi = lo + 1;
    const double theorem1_s = hi - t;
    v[lo] = file_length * theorem1_s / choose(K, lo);
    v[hi] = file_length * (1.0 - theorem1_s) / choose(K, hi);
  }
  return GroupedScheme::homogeneous(std::move(v));
}

GroupedScheme decentralized_scheme(int num_users, double q, double file_length) {
  if (num_users < 1) throw ValidationError("K", "K must be a positive integer");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("q", "q must lie in [0,1]");
  std::vector<double> v(num_users + 1);
  for (int j = 0; j <= num_users; ++j) {
    v[j] = file_length * std::pow(q, j) * std::pow(1.0 - q, num_users - j);
  }
  return GroupedScheme::homogeneous(std::move(v));
}

namespace {

std::vector<int> resolve_order(const std::optional<TopUpOrder>& order, int num_files) {
  std::vector<int> files(num_files);
  std::iota(files.begin(), files.end(), 0);
  if (!order) return files;
  std::vector<int> seen(num_files, 0);
  for (int f : order->files) {
    if (f < 0 || f >= num_files || seen[f]++) {
      throw ValidationError("order", "top-up order must be a permutation of the files");
    }
  }
  if (static_cast<int>(order->files.size()) != num_files) {
    throw ValidationError("order", "top-up order must be a permutation of the files");
  }
  return order->files;
}

// Tops fractions up to 1 in the given order until `memory` is used.
void top_up(std::vector<double>& fraction, const std::vector<double>& lengths, double memory,
            const std::vector<int>& order) {
  double used = 0.0;
  for (std::size_t l = 0; l < fraction.size(); ++l) used += fraction[l] * lengths[l];
  double left = memory - used;
  for (int l : order) {
    if (left <= 0.0) break;
    const double add = std::min(left, (1.0 - fraction[l]) * lengths[l]);
    fraction[l] += add / lengths[l];
    left -= add;
  }
}

void require_uniform_cache(const SystemConfig& cfg) {
  if (!cfg.uniform_cache()) throw ValidationError("M", "baseline requires equal cache sizes");
}

std::vector<double> length_fractions(const SystemConfig& cfg, double memory,
                                     const std::vector<int>& order) {
  const auto& F = cfg.file_lengths();
  const double total = std::accumulate(F.begin(), F.end(), 0.0);
  std::vector<double> q(F.size());
  for (std::size_t l = 0; l < F.size(); ++l) q[l] = std::min(memory / total, 1.0);
  top_up(q, F, memory, order);
  return q;
}

}  // namespace

Placement product_form_placement(const SystemConfig& cfg, const Eigen::MatrixXd& q) {
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  if (q.rows() != K || q.cols() != N) throw ValidationError("q", "q must be K x N");
  Placement pl(K, N);
  for (int l = 0; l < N; ++l) {
    for (UserSet s = 0; s < static_cast<UserSet>(num_subsets(K)); ++s) {
      double frac = 1.0;
      for (int k = 0; k < K; ++k) frac *= contains(s, k) ? q(k, l) : 1.0 - q(k, l);
      pl.set_size(l, s, cfg.file_lengths()[l] * frac);
    }
  }
  pl.set_shares_from_sizes();
  return pl;
}

Placement random_popularity_baseline(const SystemConfig& cfg,
                                     const std::optional<TopUpOrder>& order) {
  if (!cfg.uniform_lengths()) {
    throw ValidationError("F", "popularity baseline requires equal file lengths");
  }
  require_uniform_cache(cfg);
  const int N = cfg.num_files();
  const double F = cfg.file_lengths()[0];
  const double M = cfg.cache_sizes()[0];
  std::vector<double> q(N);
  for (int l = 0; l < N; ++l) q[l] = std::min(M * cfg.popularities()[l] / F, 1.0);
  top_up(q, cfg.file_lengths(), M, resolve_order(order, N));
  Eigen::MatrixXd Q(cfg.num_users(), N);
  for (int l = 0; l < N; ++l) Q.col(l).setConstant(q[l]);
  return product_form_placement(cfg, Q);
}

Placement random_length_baseline(const SystemConfig& cfg, const std::optional<TopUpOrder>& order) {
  require_uniform_cache(cfg);
  return random_class_baseline(cfg, order);
}

Placement random_class_baseline(const SystemConfig& cfg, const std::optional<TopUpOrder>& order) {
  const int N = cfg.num_files();
  const std::vector<int> ord = resolve_order(order, N);
  Eigen::MatrixXd Q(cfg.num_users(), N);
  for (int k = 0; k < cfg.num_users(); ++k) {
    const std::vector<double> q = length_fractions(cfg, cfg.cache_sizes()[k], ord);
    for (int l = 0; l < N; ++l) Q(k, l) = q[l];
  }
  return product_form_placement(cfg, Q);
}

namespace {

void check_fits(const SystemConfig& cfg, const GroupedScheme& gs) {
  if (gs.num_users() != cfg.num_users()) {
    throw ValidationError("scheme", "grouped scheme has the wrong number of users");
  }
  if (gs.rows() != 1 && gs.rows() != cfg.num_files()) {
    throw ValidationError("scheme", "grouped scheme has the wrong number of files");
  }
  if (gs.has_classes() && gs.small_users() != cfg.small_users()) {
    throw ValidationError("scheme", "grouped scheme classes disagree with the configuration");
  }
  const auto errors = gs.structural_errors();
  if (!errors.empty()) throw ValidationError("scheme", "structural violation: " + errors.front());
}

}  // namespace

Placement expand_to_placement(const SystemConfig& cfg, const GroupedScheme& gs) {
  check_fits(cfg, gs);
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  Placement pl(K, N);
  for (int l = 0; l < N; ++l) {
    for (UserSet s = 0; s < static_cast<UserSet>(num_subsets(K)); ++s) {
      pl.set_size(l, s, gs.value_for(l, s));
    }
  }
  pl.set_shares_from_sizes();
  return pl;
}

GroupedScheme extract_grouped(const SystemConfig& cfg, const Placement& pl, SchemeKind kind,
                              double tol) {
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  if (pl.num_users() != K || pl.num_files() != N) {
    throw ValidationError("placement", "placement dimensions do not match the configuration");
  }
  const bool classes = kind == SchemeKind::two_tier || kind == SchemeKind::full_het;
  const bool shared = kind == SchemeKind::homogeneous || kind == SchemeKind::two_tier;
  if (classes && !cfg.classes()) throw ValidationError("classes", "cache classes required");
  const int ks = classes ? cfg.small_users() : 0;
  const UserSet small = full_set(ks);
  const int rows = shared ? 1 : N;

  Eigen::MatrixXd tables[3] = {Eigen::MatrixXd::Zero(rows, K + 1), Eigen::MatrixXd::Zero(rows, K + 1),
                               Eigen::MatrixXd::Zero(rows, K + 1)};
  Eigen::MatrixXd seen[3] = {Eigen::MatrixXd::Zero(rows, K + 1), Eigen::MatrixXd::Zero(rows, K + 1),
                             Eigen::MatrixXd::Zero(rows, K + 1)};
  auto slot = [&](UserSet s) {
    if (!classes) return 0;
    switch (classify_subset(s, small)) {
      case SubsetClass::empty:
      case SubsetClass::small_only: return 0;
      case SubsetClass::large_only: return 1;
      case SubsetClass::mixed: return 2;
    }
    return 0;
  };
  for (int l = 0; l < N; ++l) {
    const int r = shared ? 0 : l;
    for (UserSet s = 0; s < static_cast<UserSet>(num_subsets(K)); ++s) {
      const int c = slot(s);
      const int j = set_size(s);
      const double x = pl.size(l, s);
      if (seen[c](r, j) == 0.0) {
        tables[c](r, j) = x;
        seen[c](r, j) = 1.0;
      } else if (std::abs(tables[c](r, j) - x) > tol) {
        throw ValidationError("placement", "placement is not symmetric: file " +
                                               std::to_string(l + 1) + ", subset {" +
                                               subset_key(s) + "}");
      }
    }
  }
  if (classes) {
    tables[1].col(0) = tables[0].col(0);
    tables[2].col(0) = tables[0].col(0);
  }
  switch (kind) {
    case SchemeKind::homogeneous: {
      std::vector<double> v(tables[0].data(), tables[0].data() + K + 1);
      return GroupedScheme::homogeneous(std::move(v));
    }
    case SchemeKind::per_file: return GroupedScheme::per_file(tables[0]);
    case SchemeKind::two_tier: {
      auto row = [&](int c) {
        std::vector<double> v(K + 1);
        for (int j = 0; j <= K; ++j) v[j] = tables[c](0, j);
        return v;
      };
      return GroupedScheme::two_tier(ks, row(0), row(1), row(2));
    }
    case SchemeKind::full_het: return GroupedScheme::full_het(ks, tables[0], tables[1], tables[2]);
  }
  throw ValidationError("kind", "unknown scheme kind");
}

}  // namespace cachecraft
