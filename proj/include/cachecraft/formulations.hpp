#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cachecraft/lp.hpp"
#include "cachecraft/model.hpp"

namespace cachecraft {

enum class Formulation {
  general,
  homogeneous,
  simplex_form,
  popularity_first,
  length_first,
  two_tier,
  full_het,
};

// Command-line ids: general, homogeneous, simplex, pop-first, length-first,
// two-tier, full-het.
const char* to_string(Formulation f);
Formulation parse_formulation(std::string_view id);

enum class VarRole {
  subfile,      // |W_S^(l)|
  cache_share,  // mu_{k,l}, or per-file mu_l / mu_l^S / mu_l^L
  epigraph,     // max over one subset for one restricted demand
  grouped,      // v_j, v_{l,j} or a class-specific variant
  weight,       // a_j of the simplex form
};

struct VarLabel {
  VarRole role;
  std::string name;
  int file = -1;  // original 0-based file index, -1 if shared by all files
  int user = -1;
  int size = -1;  // subset size j
  UserSet subset = 0;
  SubsetClass cls = SubsetClass::empty;
};

// LP column index <-> semantic label.
class VarMap {
 public:
  int add(VarLabel label);
  const VarLabel& label(int index) const { return labels_.at(index); }
  int index(const std::string& name) const;
  std::optional<int> find(const std::string& name) const;
  int size() const noexcept { return static_cast<int>(labels_.size()); }

 private:
  std::vector<VarLabel> labels_;
  std::unordered_map<std::string, int> by_name_;
};

struct BuiltProblem {
  Formulation requested;
  Formulation built;  // differs when a degenerate class split collapses
  SystemConfig cfg;
  LinearProgram lp;
  VarMap vars;
  std::vector<int> file_order;  // file_order[rank] = original file index
  double unit = 1.0;            // LP values and objective are in units of `unit`
};

// Size guard: N^K (2^K - 1) <= enumeration_cap(), else LimitError.
BuiltProblem build_general(const SystemConfig& cfg);
BuiltProblem build_homogeneous(const SystemConfig& cfg);
BuiltProblem build_simplex_form(const SystemConfig& cfg);
BuiltProblem build_popularity_first(const SystemConfig& cfg);
BuiltProblem build_length_first(const SystemConfig& cfg);
BuiltProblem build_two_tier(const SystemConfig& cfg);
BuiltProblem build_full_het(const SystemConfig& cfg);
BuiltProblem build(const SystemConfig& cfg, Formulation f);

// Objective of an LP point in file-length units.
double objective_value(const BuiltProblem& bp, const Eigen::VectorXd& x);

// Grouped scheme in original file order and file-length units. Throws
// ValidationError for the general formulation.
GroupedScheme to_grouped(const BuiltProblem& bp, const Eigen::VectorXd& x);
Placement to_placement(const BuiltProblem& bp, const Eigen::VectorXd& x);

// LP point for a grouped scheme (grouped formulations) or a placement
// (general formulation). Cache-share variables take the stored amounts, with
// any unused memory added to the first file; epigraph variables take their
// maxima.
Eigen::VectorXd from_grouped(const BuiltProblem& bp, const GroupedScheme& gs);
Eigen::VectorXd from_placement(const BuiltProblem& bp, const Placement& pl);

// Bland pricing for small programs; Dantzig with a Bland fallback on
// degenerate runs once the program has more than a few hundred columns.
SolveOptions default_solve_options(const BuiltProblem& bp);

struct SolvedProblem {
  LpSolution solution;
  double objective = 0.0;  // file-length units
  Placement placement;
  std::optional<GroupedScheme> grouped;
};

// Throws Error unless the solver reports optimal.
SolvedProblem solve_problem(const BuiltProblem& bp,
                            const std::optional<SolveOptions>& opts = std::nullopt);

}  // namespace cachecraft
