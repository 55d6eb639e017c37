#include "cachecraft/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "cachecraft/errors.hpp"

namespace cachecraft {

namespace {

bool all_close(const std::vector<double>& v, double tol) {
  if (v.empty()) return true;
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= tol;
}

std::string index_label(const char* what, int i) {
  return std::string(what) + "[" + std::to_string(i + 1) + "]";
}

}  // namespace

double enumeration_cap() {
  if (const char* env = std::getenv("CACHECRAFT_ENUM_CAP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return kDefaultEnumerationCap;
}

double demand_count(int num_files, int num_users) {
  return std::pow(static_cast<double>(num_files), num_users);
}

SystemConfig::SystemConfig(int num_users, std::vector<double> file_lengths,
                           std::vector<double> popularities, std::vector<double> cache_sizes,
                           std::optional<CacheClasses> classes)
    : num_users_(num_users),
      file_lengths_(std::move(file_lengths)),
      popularities_(std::move(popularities)),
      cache_sizes_(std::move(cache_sizes)),
      classes_(classes) {
  if (num_users_ < 1) throw ValidationError("K", "K must be a positive integer");
  if (num_users_ > kMaxUsers) {
    throw ValidationError("K", "K must be at most " + std::to_string(kMaxUsers));
  }
  if (file_lengths_.empty()) throw ValidationError("N", "N must be a positive integer");
  const int n = num_files();
  if (static_cast<int>(popularities_.size()) != n) {
    throw ValidationError("p", "p must have N entries");
  }
  if (static_cast<int>(cache_sizes_.size()) != num_users_) {
    throw ValidationError("M", "M must have K entries");
  }
  for (int l = 0; l < n; ++l) {
    if (!std::isfinite(file_lengths_[l]) || file_lengths_[l] <= 0.0) {
      throw ValidationError("F", "file lengths must be positive");
    }
    if (!std::isfinite(popularities_[l]) || popularities_[l] <= 0.0 || popularities_[l] > 1.0) {
      throw ValidationError("p", "popularities must lie in (0,1]");
    }
  }
  const double total = std::accumulate(popularities_.begin(), popularities_.end(), 0.0);
  if (std::abs(total - 1.0) > kPopularityRenormTolerance) {
    throw ValidationError("p", "popularities must sum to 1");
  }
  // Sums already within rounding of 1 are kept as given, so that renormalized
  // vectors survive a save and reload unchanged.
  if (std::abs(total - 1.0) > 1e-12) {
    for (double& p : popularities_) p /= total;
  }
  for (double m : cache_sizes_) {
    if (!std::isfinite(m) || m < 0.0) throw ValidationError("M", "cache sizes must be non-negative");
  }
  if (classes_) {
    const CacheClasses& c = *classes_;
    if (c.small_users < 0 || c.small_users > num_users_) {
      throw ValidationError("classes.K_S", "K_S must lie in [0, K]");
    }
    if (!std::isfinite(c.small_size) || c.small_size < 0.0) {
      throw ValidationError("classes.M_S", "M_S must be non-negative");
    }
    if (!std::isfinite(c.large_size) || c.large_size < c.small_size) {
      throw ValidationError("classes.M_L", "M_L must be at least M_S");
    }
    for (int k = 0; k < num_users_; ++k) {
      const double want = k < c.small_users ? c.small_size : c.large_size;
      if (std::abs(cache_sizes_[k] - want) > 1e-12 * std::max(1.0, want)) {
        throw ValidationError("M", "cache sizes disagree with the class annotation");
      }
    }
  }
}

SystemConfig SystemConfig::uniform(int num_users, int num_files, double cache_size,
                                   double file_length) {
  if (num_files < 1) throw ValidationError("N", "N must be a positive integer");
  return SystemConfig(num_users, std::vector<double>(num_files, file_length),
                      std::vector<double>(num_files, 1.0 / num_files),
                      std::vector<double>(std::max(num_users, 0), cache_size));
}

SystemConfig SystemConfig::with_classes(int num_users, std::vector<double> file_lengths,
                                        std::vector<double> popularities, CacheClasses classes) {
  std::vector<double> sizes(std::max(num_users, 0));
  for (int k = 0; k < num_users; ++k) {
    sizes[k] = k < classes.small_users ? classes.small_size : classes.large_size;
  }
  return SystemConfig(num_users, std::move(file_lengths), std::move(popularities),
                      std::move(sizes), classes);
}

bool SystemConfig::uniform_lengths(double tol) const { return all_close(file_lengths_, tol); }
bool SystemConfig::uniform_popularity(double tol) const { return all_close(popularities_, tol); }
bool SystemConfig::uniform_cache(double tol) const { return all_close(cache_sizes_, tol); }

double SystemConfig::expected_request_length() const {
  double acc = 0.0;
  for (int l = 0; l < num_files(); ++l) acc += popularities_[l] * file_lengths_[l];
  return acc;
}

SystemConfig SystemConfig::with_cache_sizes(std::vector<double> cache_sizes,
                                            std::optional<CacheClasses> classes) const {
  return SystemConfig(num_users_, file_lengths_, popularities_, std::move(cache_sizes), classes);
}

std::vector<double> zipf_popularities(int num_files, double zipf_s) {
  if (num_files < 1) throw ValidationError("N", "N must be a positive integer");
  if (!(zipf_s >= 0.0)) throw ValidationError("zipf_s", "Zipf parameter must be non-negative");
  std::vector<double> p(num_files);
  for (int l = 0; l < num_files; ++l) p[l] = std::pow(static_cast<double>(l + 1), -zipf_s);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

Placement::Placement(int num_users, int num_files)
    : num_users_(num_users),
      sizes_(Eigen::MatrixXd::Zero(num_files, num_subsets(num_users))),
      shares_(Eigen::MatrixXd::Zero(num_users, num_files)) {
  if (num_users < 1 || num_users > kMaxUsers) throw ValidationError("K", "invalid user count");
  if (num_files < 1) throw ValidationError("N", "invalid file count");
}

double Placement::stored_amount(int user, int file) const {
  double acc = 0.0;
  const UserSet bit = singleton(user);
  for (Eigen::Index s = 0; s < sizes_.cols(); ++s) {
    if (static_cast<UserSet>(s) & bit) acc += sizes_(file, s);
  }
  return acc;
}

void Placement::set_shares_from_sizes() {
  for (int k = 0; k < num_users_; ++k) {
    for (int l = 0; l < num_files(); ++l) shares_(k, l) = stored_amount(k, l);
  }
}

double FeasibilityReport::max_violation() const {
  double worst = 0.0;
  for (const auto& v : violations) worst = std::max(worst, v.amount);
  return worst;
}

FeasibilityReport validate_placement(const SystemConfig& cfg, const Placement& pl, double tol) {
  if (pl.num_users() != cfg.num_users() || pl.num_files() != cfg.num_files()) {
    throw ValidationError("placement", "placement dimensions do not match the configuration");
  }
  FeasibilityReport report;
  auto flag = [&](std::string name, double amount) {
    if (amount > tol) report.violations.push_back({std::move(name), amount});
  };
  const int K = cfg.num_users();
  const int N = cfg.num_files();
  const int subsets = num_subsets(K);
  for (int l = 0; l < N; ++l) {
    double sum = 0.0;
    for (int s = 0; s < subsets; ++s) {
      const double x = pl.size(l, static_cast<UserSet>(s));
      sum += x;
      if (x < -tol) {
        flag("nonnegative[file " + std::to_string(l + 1) + ", {" +
                 subset_key(static_cast<UserSet>(s)) + "}]",
             -x);
      }
    }
    flag("reconstruction[file " + std::to_string(l + 1) + "]", std::abs(sum - cfg.file_lengths()[l]));
  }
  for (int k = 0; k < K; ++k) {
    double total = 0.0;
    for (int l = 0; l < N; ++l) {
      const double mu = pl.cache_share(k, l);
      total += mu;
      flag("cache[user " + std::to_string(k + 1) + ", file " + std::to_string(l + 1) + "]",
           pl.stored_amount(k, l) - mu);
    }
    flag(index_label("memory", k), total - cfg.cache_sizes()[k]);
  }
  return report;
}

SubsetClass classify_subset(UserSet subset, UserSet small_users) {
  if (subset == 0) return SubsetClass::empty;
  const bool has_small = (subset & small_users) != 0;
  const bool has_large = (subset & ~small_users) != 0;
  if (has_small && has_large) return SubsetClass::mixed;
  return has_small ? SubsetClass::small_only : SubsetClass::large_only;
}

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::homogeneous: return "homogeneous";
    case SchemeKind::per_file: return "per_file";
    case SchemeKind::two_tier: return "two_tier";
    case SchemeKind::full_het: return "full_het";
  }
  return "unknown";
}

GroupedScheme::GroupedScheme(SchemeKind kind, int num_users, int small_users,
                             Eigen::MatrixXd small, Eigen::MatrixXd large, Eigen::MatrixXd mixed)
    : kind_(kind),
      num_users_(num_users),
      small_users_(small_users),
      small_(std::move(small)),
      large_(std::move(large)),
      mixed_(std::move(mixed)) {
  if (num_users_ < 1 || num_users_ > kMaxUsers) {
    throw ValidationError("K", "grouped scheme needs between 1 and " +
                                   std::to_string(kMaxUsers) + " users");
  }
  if (small_users_ < 0 || small_users_ > num_users_) {
    throw ValidationError("classes.K_S", "K_S must lie in [0, K]");
  }
  auto check = [&](const Eigen::MatrixXd& m, const char* name) {
    if (m.cols() != num_users_ + 1 || m.rows() != small_.rows() || m.rows() < 1) {
      throw ValidationError(name, std::string("grouped table ") + name + " has the wrong shape");
    }
  };
  check(small_, "small");
  if (has_classes()) {
    check(large_, "large");
    check(mixed_, "mixed");
  }
}

namespace {

Eigen::MatrixXd row_of(const std::vector<double>& v) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) m(0, static_cast<Eigen::Index>(j)) = v[j];
  return m;
}

}  // namespace

GroupedScheme GroupedScheme::homogeneous(std::vector<double> values) {
  const int K = static_cast<int>(values.size()) - 1;
  return GroupedScheme(SchemeKind::homogeneous, K, 0, row_of(values), {}, {});
}

GroupedScheme GroupedScheme::per_file(Eigen::MatrixXd values) {
  const int K = static_cast<int>(values.cols()) - 1;
  return GroupedScheme(SchemeKind::per_file, K, 0, std::move(values), {}, {});
}

GroupedScheme GroupedScheme::two_tier(int small_users, std::vector<double> small,
                                      std::vector<double> large, std::vector<double> mixed) {
  const int K = static_cast<int>(small.size()) - 1;
  return GroupedScheme(SchemeKind::two_tier, K, small_users, row_of(small), row_of(large),
                       row_of(mixed));
}

GroupedScheme GroupedScheme::full_het(int small_users, Eigen::MatrixXd small,
                                      Eigen::MatrixXd large, Eigen::MatrixXd mixed) {
  const int K = static_cast<int>(small.cols()) - 1;
  return GroupedScheme(SchemeKind::full_het, K, small_users, std::move(small), std::move(large),
                       std::move(mixed));
}

double GroupedScheme::value(int file, int j, SubsetClass c) const {
  const int row = rows() == 1 ? 0 : file;
  if (!has_classes()) return small_(row, j);
  switch (c) {
    case SubsetClass::empty:
    case SubsetClass::small_only: return small_(row, j);
    case SubsetClass::large_only: return large_(row, j);
    case SubsetClass::mixed: return mixed_(row, j);
  }
  return 0.0;
}

double GroupedScheme::value_for(int file, UserSet subset) const {
  return value(file, set_size(subset), classify_subset(subset, full_set(small_users_)));
}

std::vector<std::string> GroupedScheme::structural_errors(double tol) const {
  std::vector<std::string> errors;
  auto where = [](const char* table, int row, int j) {
    std::ostringstream os;
    os << table << "[" << row + 1 << "][" << j << "]";
    return os.str();
  };
  auto nonneg = [&](const Eigen::MatrixXd& m, const char* name) {
    for (int r = 0; r < m.rows(); ++r) {
      for (int j = 0; j < m.cols(); ++j) {
        if (m(r, j) < -tol) errors.push_back(where(name, r, j) + " is negative");
      }
    }
  };
  nonneg(small_, has_classes() ? "small" : "v");
  if (!has_classes()) return errors;
  nonneg(large_, "large");
  nonneg(mixed_, "mixed");
  const int ks = small_users_;
  const int kl = large_users();
  for (int r = 0; r < rows(); ++r) {
    for (int j = ks + 1; j <= num_users_; ++j) {
      if (std::abs(small_(r, j)) > tol) errors.push_back(where("small", r, j) + " must be zero");
    }
    for (int j = kl + 1; j <= num_users_; ++j) {
      if (std::abs(large_(r, j)) > tol) errors.push_back(where("large", r, j) + " must be zero");
    }
    if (std::abs(mixed_(r, 1)) > tol) errors.push_back(where("mixed", r, 1) + " must be zero");
    if (std::abs(small_(r, 0) - large_(r, 0)) > tol ||
        std::abs(small_(r, 0) - mixed_(r, 0)) > tol) {
      errors.push_back("row " + std::to_string(r + 1) + " has unequal j=0 entries");
    }
  }
  return errors;
}

GroupedScheme GroupedScheme::scaled(double factor) const {
  GroupedScheme out = *this;
  out.small_ *= factor;
  if (has_classes()) {
    out.large_ *= factor;
    out.mixed_ *= factor;
  }
  return out;
}

void check_demand(const SystemConfig& cfg, const DemandVector& d) {
  if (static_cast<int>(d.files.size()) != cfg.num_users()) {
    throw ValidationError("d", "demand must have one entry per user");
  }
  for (int f : d.files) {
    if (f < 0 || f >= cfg.num_files()) throw ValidationError("d", "demand entry out of range");
  }
}

}  // namespace cachecraft
