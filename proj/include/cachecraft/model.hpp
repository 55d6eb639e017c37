#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cachecraft/subsets.hpp"

namespace cachecraft {

// Popularity vectors whose sum is within this distance of 1 are renormalized;
// anything further off is rejected.
inline constexpr double kPopularityRenormTolerance = 1e-3;

inline constexpr double kDefaultEnumerationCap = 1e7;

// Guard on exhaustive demand enumeration and epigraph size. Reads
// CACHECRAFT_ENUM_CAP when set, otherwise kDefaultEnumerationCap.
double enumeration_cap();

// N^K as a double, or +inf on overflow.
double demand_count(int num_files, int num_users);

// Two cache-size classes. Users 1..small_users hold small_size, the remaining
// users hold large_size.
struct CacheClasses {
  int small_users = 0;
  double small_size = 0.0;
  double large_size = 0.0;

  friend bool operator==(const CacheClasses&, const CacheClasses&) = default;
};

// A problem instance: K users with cache sizes M_k, and N files with lengths
// F_l and request probabilities p_l. File lengths and cache sizes share one
// arbitrary unit. Immutable once constructed.
class SystemConfig {
 public:
  SystemConfig(int num_users, std::vector<double> file_lengths,
               std::vector<double> popularities, std::vector<double> cache_sizes,
               std::optional<CacheClasses> classes = std::nullopt);

  // K users of cache size M, N unit-popularity files of length F.
  static SystemConfig uniform(int num_users, int num_files, double cache_size,
                              double file_length = 1.0);

  // Per-user sizes are derived from the class annotation.
  static SystemConfig with_classes(int num_users, std::vector<double> file_lengths,
                                   std::vector<double> popularities, CacheClasses classes);

  int num_users() const noexcept { return num_users_; }
  int num_files() const noexcept { return static_cast<int>(file_lengths_.size()); }
  const std::vector<double>& file_lengths() const noexcept { return file_lengths_; }
  const std::vector<double>& popularities() const noexcept { return popularities_; }
  const std::vector<double>& cache_sizes() const noexcept { return cache_sizes_; }
  const std::optional<CacheClasses>& classes() const noexcept { return classes_; }

  int small_users() const noexcept { return classes_ ? classes_->small_users : 0; }
  int large_users() const noexcept { return num_users_ - small_users(); }
  UserSet small_user_set() const noexcept { return full_set(small_users()); }

  bool uniform_lengths(double tol = 1e-12) const;
  bool uniform_popularity(double tol = 1e-12) const;
  bool uniform_cache(double tol = 1e-12) const;

  // Sum over files of p_l * F_l.
  double expected_request_length() const;

  // Same files and users with new cache sizes; the class annotation is kept
  // only when `classes` is supplied.
  SystemConfig with_cache_sizes(std::vector<double> cache_sizes,
                                std::optional<CacheClasses> classes = std::nullopt) const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;

 private:
  int num_users_;
  std::vector<double> file_lengths_;
  std::vector<double> popularities_;
  std::vector<double> cache_sizes_;
  std::optional<CacheClasses> classes_;
};

// p_l proportional to l^(-zipf_s), normalized; rank 1 is the most popular.
std::vector<double> zipf_popularities(int num_files, double zipf_s);

// Subfile sizes |W_S^(l)| for every file and every user subset, plus the
// per-user, per-file cache allotment mu_{k,l}.
class Placement {
 public:
  Placement(int num_users, int num_files);

  int num_users() const noexcept { return num_users_; }
  int num_files() const noexcept { return static_cast<int>(sizes_.rows()); }

  double size(int file, UserSet subset) const { return sizes_(file, subset); }
  void set_size(int file, UserSet subset, double value) { sizes_(file, subset) = value; }

  double cache_share(int user, int file) const { return shares_(user, file); }
  void set_cache_share(int user, int file, double value) { shares_(user, file) = value; }

  // Sets mu_{k,l} to the exact amount of file l held by user k.
  void set_shares_from_sizes();

  // Amount of file l stored by user k: sum of |W_S^(l)| over S containing k.
  double stored_amount(int user, int file) const;

  const Eigen::MatrixXd& sizes() const noexcept { return sizes_; }
  const Eigen::MatrixXd& shares() const noexcept { return shares_; }

 private:
  int num_users_;
  Eigen::MatrixXd sizes_;   // N x 2^K, column index is the UserSet mask
  Eigen::MatrixXd shares_;  // K x N
};

struct Violation {
  std::string constraint;  // e.g. "reconstruction[file 2]"
  double amount;           // how far outside the constraint, always > tol
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const noexcept { return violations.empty(); }
  double max_violation() const;
};

// Checks non-negativity, file reconstruction, per-file cache usage against
// mu_{k,l}, and total allotment against M_k. Throws ValidationError on a
// dimension mismatch.
FeasibilityReport validate_placement(const SystemConfig& cfg, const Placement& pl, double tol);

// Which users a subset contains, relative to the two cache classes.
enum class SubsetClass { empty, small_only, large_only, mixed };

SubsetClass classify_subset(UserSet subset, UserSet small_users);

enum class SchemeKind { homogeneous, per_file, two_tier, full_het };

const char* to_string(SchemeKind kind);

// Symmetric placement parameterizations. Every table has K+1 columns indexed
// by subset size j. Homogeneous and two-tier schemes have one row shared by
// all files; per-file and full-het schemes have one row per file.
class GroupedScheme {
 public:
  static GroupedScheme homogeneous(std::vector<double> values);
  static GroupedScheme per_file(Eigen::MatrixXd values);
  static GroupedScheme two_tier(int small_users, std::vector<double> small,
                                std::vector<double> large, std::vector<double> mixed);
  static GroupedScheme full_het(int small_users, Eigen::MatrixXd small, Eigen::MatrixXd large,
                                Eigen::MatrixXd mixed);

  SchemeKind kind() const noexcept { return kind_; }
  int num_users() const noexcept { return num_users_; }
  int small_users() const noexcept { return small_users_; }
  int large_users() const noexcept { return num_users_ - small_users_; }
  int rows() const noexcept { return static_cast<int>(small_.rows()); }
  bool has_classes() const noexcept {
    return kind_ == SchemeKind::two_tier || kind_ == SchemeKind::full_het;
  }

  // Size of a subfile of `file` stored on subsets of size j and class c.
  // For schemes without classes c is ignored. `file` is ignored when rows()==1.
  double value(int file, int j, SubsetClass c) const;

  // Value for a concrete subset, classifying it against the small users.
  double value_for(int file, UserSet subset) const;

  // Raw tables. Schemes without classes keep their values in `small()`.
  const Eigen::MatrixXd& small() const noexcept { return small_; }
  const Eigen::MatrixXd& large() const noexcept { return large_; }
  const Eigen::MatrixXd& mixed() const noexcept { return mixed_; }

  // Negative entries, nonzero structural zeros, and unequal j=0 entries.
  std::vector<std::string> structural_errors(double tol = 1e-12) const;

  GroupedScheme scaled(double factor) const;

 private:
  GroupedScheme(SchemeKind kind, int num_users, int small_users, Eigen::MatrixXd small,
                Eigen::MatrixXd large, Eigen::MatrixXd mixed);

  SchemeKind kind_;
  int num_users_;
  int small_users_;
  Eigen::MatrixXd small_;
  Eigen::MatrixXd large_;
  Eigen::MatrixXd mixed_;
};

// One requested file per user, 0-based file indices.
struct DemandVector {
  std::vector<int> files;

  friend bool operator==(const DemandVector&, const DemandVector&) = default;
  friend auto operator<=>(const DemandVector&, const DemandVector&) = default;
};

// Throws ValidationError unless the demand has K entries in [0, N).
void check_demand(const SystemConfig& cfg, const DemandVector& d);

struct RateResult {
  double expected_rate = 0.0;
  std::optional<std::vector<std::pair<DemandVector, double>>> per_demand;
};

}  // namespace cachecraft
