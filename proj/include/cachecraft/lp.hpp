#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace cachecraft {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { less_equal, equal, greater_equal };

const char* to_string(Relation rel);

struct LinearTerm {
  int var;
  double coef;
};

struct Constraint {
  std::vector<LinearTerm> terms;
  Relation relation;
  double rhs;
  std::string name;
};

// minimize  objective . x + objective_constant
// subject to each constraint and lower <= x <= upper.
class LinearProgram {
 public:
  int add_variable(std::string name, double cost = 0.0, double lower = 0.0, double upper = kInf);
  int add_constraint(std::vector<LinearTerm> terms, Relation relation, double rhs,
                     std::string name = {});

  void set_cost(int var, double cost) { cost_.at(var) = cost; }
  void add_cost(int var, double cost) { cost_.at(var) += cost; }
  void set_bounds(int var, double lower, double upper);
  void set_objective_constant(double c) { constant_ = c; }

  int num_vars() const noexcept { return static_cast<int>(cost_.size()); }
  int num_constraints() const noexcept { return static_cast<int>(rows_.size()); }
  const std::vector<double>& costs() const noexcept { return cost_; }
  double cost(int var) const { return cost_.at(var); }
  double lower(int var) const { return lower_.at(var); }
  double upper(int var) const { return upper_.at(var); }
  const std::string& name(int var) const { return names_.at(var); }
  const std::vector<Constraint>& constraints() const noexcept { return rows_; }
  double objective_constant() const noexcept { return constant_; }

  double objective_value(const Eigen::VectorXd& x) const;
  double row_activity(int row, const Eigen::VectorXd& x) const;

  // Throws ValidationError if an index is out of range, a coefficient or rhs
  // is not finite, or a lower bound exceeds its upper bound.
  void validate() const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Constraint> rows_;
  double constant_ = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective_value = 0.0;
  Eigen::VectorXd x;
  // One multiplier per constraint, sign convention of certified_dual_bound.
  Eigen::VectorXd duals;
  long iterations = 0;
};

enum class Pricing {
  bland,    // smallest-index entering and leaving variable
  dantzig,  // most negative reduced cost; switches to Bland on long degenerate runs
};

struct SolveOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  long max_iters = 1'000'000;
  Pricing pricing = Pricing::bland;
  int refactor_interval = 64;
};

// Two-phase revised primal simplex.
LpSolution solve(const LinearProgram& lp, const SolveOptions& opts = {});

// Plug-in point for other solvers. The bundled simplex is the default.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual std::string name() const = 0;
  virtual LpSolution solve(const LinearProgram& lp, const SolveOptions& opts) const = 0;
};

class SimplexSolver final : public LpSolver {
 public:
  std::string name() const override { return "simplex"; }
  LpSolution solve(const LinearProgram& lp, const SolveOptions& opts) const override {
    return cachecraft::solve(lp, opts);
  }
};

struct ResidualReport {
  double max_constraint_violation = 0.0;
  double max_bound_violation = 0.0;
  double objective = 0.0;
  std::string worst;  // name of the most violated constraint or bound, if any
  std::vector<std::pair<std::string, double>> violations;  // entries above tol

  bool feasible() const noexcept { return violations.empty(); }
};

// Throws ValidationError if x has the wrong length.
ResidualReport check_solution(const LinearProgram& lp, const Eigen::VectorXd& x, double tol);

// Lagrangian lower bound min over the bound box of
//   c.x + const - sum_i y_i (a_i.x - b_i)
// after projecting y_i to >= 0 on >= rows and <= 0 on <= rows. Returns -inf
// when the box is unbounded in a direction of negative reduced cost.
double certified_dual_bound(const LinearProgram& lp, const Eigen::VectorXd& y);

// CPLEX LP text, one constraint per line. Variable names are sanitized to
// the format's identifier rules.
std::string export_lp(const LinearProgram& lp);

}  // namespace cachecraft
