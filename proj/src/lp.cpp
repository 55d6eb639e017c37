#include "cachecraft/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "cachecraft/errors.hpp"

namespace cachecraft {

const char* to_string(Relation rel) {
  switch (rel) {
    case Relation::less_equal: return "<=";
    case Relation::equal: return "=";
    case Relation::greater_equal: return ">=";
  }
  return "?";
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

int LinearProgram::add_variable(std::string name, double cost, double lower, double upper) {
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(std::move(name));
  return num_vars() - 1;
}

int LinearProgram::add_constraint(std::vector<LinearTerm> terms, Relation relation, double rhs,
                                  std::string name) {
  rows_.push_back({std::move(terms), relation, rhs, std::move(name)});
  return num_constraints() - 1;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

double LinearProgram::objective_value(const Eigen::VectorXd& x) const {
  double v = constant_;
  for (int j = 0; j < num_vars(); ++j) v += cost_[j] * x[j];
  return v;
}

double LinearProgram::row_activity(int row, const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& t : rows_.at(row).terms) v += t.coef * x[t.var];
  return v;
}

void LinearProgram::validate() const {
  for (int j = 0; j < num_vars(); ++j) {
    if (!std::isfinite(cost_[j])) throw ValidationError("lp", "non-finite cost on " + names_[j]);
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j] ||
        lower_[j] == kInf || upper_[j] == -kInf) {
      throw ValidationError("lp", "invalid bounds on " + names_[j]);
    }
  }
  for (const auto& row : rows_) {
    if (!std::isfinite(row.rhs)) throw ValidationError("lp", "non-finite rhs in " + row.name);
    for (const auto& t : row.terms) {
      if (t.var < 0 || t.var >= num_vars()) {
        throw ValidationError("lp", "variable index out of range in " + row.name);
      }
      if (!std::isfinite(t.coef)) throw ValidationError("lp", "non-finite coefficient in " + row.name);
    }
  }
}

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Standard form: min c.z  s.t.  A z = b, z >= 0, b >= 0. Each original
// variable maps to x = offset + sign * z[col] (+ minus-part for free vars).
struct StandardForm {
  int rows = 0;
  int cols = 0;
  SpMat A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double constant = 0.0;

  std::vector<int> pos_col;  // per original variable
  std::vector<int> neg_col;  // -1 unless the variable is free
  std::vector<double> offset;
  std::vector<double> sign;

  std::vector<double> row_sign;  // +1 or -1 for original rows; extra rows follow
  int original_rows = 0;
  std::vector<int> initial_basis;  // slack column or -1 (needs artificial)
};

StandardForm to_standard_form(const LinearProgram& lp) {
  StandardForm sf;
  const int n = lp.num_vars();
  sf.pos_col.assign(n, -1);
  sf.neg_col.assign(n, -1);
  sf.offset.assign(n, 0.0);
  sf.sign.assign(n, 1.0);

  std::vector<double> cost;
  std::vector<int> upper_rows;  // original variables needing an upper-bound row
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower(j);
    const double hi = lp.upper(j);
    sf.pos_col[j] = static_cast<int>(cost.size());
    if (std::isfinite(lo)) {
      sf.offset[j] = lo;
      cost.push_back(lp.cost(j));
      if (std::isfinite(hi)) upper_rows.push_back(j);
    } else if (std::isfinite(hi)) {
      sf.offset[j] = hi;
      sf.sign[j] = -1.0;
      cost.push_back(-lp.cost(j));
    } else {
      cost.push_back(lp.cost(j));
      sf.neg_col[j] = static_cast<int>(cost.size());
      cost.push_back(-lp.cost(j));
    }
    sf.constant += lp.cost(j) * sf.offset[j];
  }
  sf.constant += lp.objective_constant();
  const int structural = static_cast<int>(cost.size());

  sf.original_rows = lp.num_constraints();
  sf.rows = sf.original_rows + static_cast<int>(upper_rows.size());

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> rhs(sf.rows, 0.0);
  std::vector<double> slack_sign(sf.rows, 0.0);  // 0 for equality rows
  for (int i = 0; i < sf.original_rows; ++i) {
    const Constraint& row = lp.constraints()[i];
    double r = row.rhs;
    for (const auto& t : row.terms) r -= t.coef * sf.offset[t.var];
    rhs[i] = r;
    if (row.relation == Relation::less_equal) slack_sign[i] = 1.0;
    if (row.relation == Relation::greater_equal) slack_sign[i] = -1.0;
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const int j = upper_rows[u];
    const int i = sf.original_rows + static_cast<int>(u);
    rhs[i] = lp.upper(j) - lp.lower(j);
    slack_sign[i] = 1.0;
  }

  // Flip rows so that b >= 0, preferring a +1 slack when b == 0.
  sf.row_sign.assign(sf.rows, 1.0);
  for (int i = 0; i < sf.rows; ++i) {
    if (rhs[i] < 0.0 || (rhs[i] == 0.0 && slack_sign[i] < 0.0)) sf.row_sign[i] = -1.0;
  }

  for (int i = 0; i < sf.original_rows; ++i) {
    const double s = sf.row_sign[i];
    for (const auto& t : lp.constraints()[i].terms) {
      if (t.coef == 0.0) continue;
      trip.emplace_back(i, sf.pos_col[t.var], s * sf.sign[t.var] * t.coef);
      if (sf.neg_col[t.var] >= 0) trip.emplace_back(i, sf.neg_col[t.var], -s * t.coef);
    }
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const int i = sf.original_rows + static_cast<int>(u);
    trip.emplace_back(i, sf.pos_col[upper_rows[u]], sf.row_sign[i]);
  }

  sf.initial_basis.assign(sf.rows, -1);
  int col = structural;
  for (int i = 0; i < sf.rows; ++i) {
    if (slack_sign[i] == 0.0) continue;
    const double coef = sf.row_sign[i] * slack_sign[i];
    trip.emplace_back(i, col, coef);
    cost.push_back(0.0);
    if (coef > 0.0) sf.initial_basis[i] = col;
    ++col;
  }
  sf.cols = col;
  sf.A.resize(sf.rows, sf.cols);
  sf.A.setFromTriplets(trip.begin(), trip.end());
  sf.A.makeCompressed();
  sf.b.resize(sf.rows);
  for (int i = 0; i < sf.rows; ++i) sf.b[i] = sf.row_sign[i] * rhs[i];
  sf.c = Eigen::Map<Eigen::VectorXd>(cost.data(), static_cast<Eigen::Index>(cost.size()));
  return sf;
}

// Revised simplex over columns of [A | I_art], where artificial columns are
// unit vectors appended for rows without a usable slack.
class Simplex {
 public:
  Simplex(const StandardForm& sf, const SolveOptions& opts) : sf_(sf), opts_(opts) {
    m_ = sf.rows;
    n_ = sf.cols;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      if (sf.initial_basis[i] >= 0) {
        basis_[i] = sf.initial_basis[i];
      } else {
        basis_[i] = n_ + static_cast<int>(art_row_.size());
        art_row_.push_back(i);
      }
    }
    total_ = n_ + static_cast<int>(art_row_.size());
    in_basis_.assign(total_, -1);
    for (int i = 0; i < m_; ++i) in_basis_[basis_[i]] = i;
    barred_.assign(total_, false);
  }

  LpStatus run(long& iterations) {
    iterations_ = 0;
    if (!art_row_.empty()) {
      cost_.setZero(total_);
      for (int a = n_; a < total_; ++a) cost_[a] = 1.0;
      refactor();
      LpStatus st = iterate();
      iterations = iterations_;
      if (st == LpStatus::iteration_limit) return st;
      double infeas = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] >= n_) infeas += std::max(0.0, xb_[i]);
      }
      const double scale = 1.0 + sf_.b.lpNorm<Eigen::Infinity>();
      if (infeas > opts_.feas_tol * scale * std::max(1, static_cast<int>(art_row_.size()))) {
        return LpStatus::infeasible;
      }
      drive_out_artificials();
      for (int a = n_; a < total_; ++a) barred_[a] = true;
    }
    cost_.setZero(total_);
    cost_.head(n_) = sf_.c;
    refactor();
    LpStatus st = iterate();
    iterations = iterations_;
    return st;
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) z[basis_[i]] = std::max(0.0, xb_[i]);
    }
    return z;
  }

  // Row multipliers for the standard-form rows: y^T B = c_B.
  Eigen::VectorXd row_duals() {
    refactor();
    return btran_cost();
  }

 private:
  Eigen::SparseVector<double> column(int j) const {
    if (j < n_) return sf_.A.col(j);
    Eigen::SparseVector<double> e(m_);
    e.insert(art_row_[j - n_]) = 1.0;
    return e;
  }

  void refactor() {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < n_) {
        for (SpMat::InnerIterator it(sf_.A, j); it; ++it) trip.emplace_back(it.row(), i, it.value());
      } else {
        trip.emplace_back(art_row_[j - n_], i, 1.0);
      }
    }
    SpMat B(m_, m_);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    lu_.analyzePattern(B);
    lu_.factorize(B);
    if (lu_.info() != Eigen::Success) throw NumericError("simplex basis became singular");
    etas_.clear();
    xb_ = lu_.solve(sf_.b);
  }

  Eigen::VectorXd ftran(const Eigen::VectorXd& a) const {
    Eigen::VectorXd y = lu_.solve(a);
    for (const auto& eta : etas_) {
      const double yr = y[eta.row] / eta.pivot;
      if (yr != 0.0) y -= yr * eta.alpha;
      y[eta.row] = yr;
    }
    return y;
  }

  Eigen::VectorXd btran_cost() const {
    Eigen::VectorXd w(m_);
    for (int i = 0; i < m_; ++i) w[i] = cost_[basis_[i]];
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      // Row vector times the eta matrix changes only component `row`.
      const double dot = w.dot(it->alpha) - w[it->row] * it->alpha[it->row];
      w[it->row] = (w[it->row] - dot) / it->pivot;
    }
    return lu_.transpose().solve(w);
  }

  double reduced_cost(int j, const Eigen::VectorXd& y) const {
    if (j < n_) {
      double d = cost_[j];
      for (SpMat::InnerIterator it(sf_.A, j); it; ++it) d -= y[it.row()] * it.value();
      return d;
    }
    return cost_[j] - y[art_row_[j - n_]];
  }

  int choose_entering(const Eigen::VectorXd& y, bool bland) const {
    int best = -1;
    double best_d = -opts_.opt_tol;
    for (int j = 0; j < total_; ++j) {
      if (in_basis_[j] >= 0 || barred_[j]) continue;
      const double d = reduced_cost(j, y);
      if (d < best_d) {
        best = j;
        if (bland) return best;
        best_d = d;
      }
    }
    return best;
  }

  // Returns the leaving row, -1 if the direction is unbounded.
  int choose_leaving(const Eigen::VectorXd& alpha, bool bland) const {
    const double piv_tol = 1e-9;
    int leave = -1;
    // Artificials kept basic after phase 1 must stay at zero.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ && barred_[basis_[i]] && std::abs(alpha[i]) > piv_tol) {
        if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
      }
    }
    if (leave >= 0) return leave;
    if (bland) {
      double best = kInf;
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] > piv_tol) best = std::min(best, std::max(0.0, xb_[i]) / alpha[i]);
      }
      if (best == kInf) return -1;
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] > piv_tol && std::max(0.0, xb_[i]) / alpha[i] <= best + 1e-12 &&
            (leave < 0 || basis_[i] < basis_[leave])) {
          leave = i;
        }
      }
      return leave;
    }
    // Harris: widest step with a tolerance, then the largest pivot within it.
    double bound = kInf;
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] > piv_tol) bound = std::min(bound, (std::max(0.0, xb_[i]) + opts_.feas_tol) / alpha[i]);
    }
    if (bound == kInf) return -1;
    double best_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] > piv_tol && std::max(0.0, xb_[i]) / alpha[i] <= bound && alpha[i] > best_pivot) {
        best_pivot = alpha[i];
        leave = i;
      }
    }
    return leave;
  }

  LpStatus iterate() {
    int degenerate_run = 0;
    const int bland_switch = 50;
    bool bland = opts_.pricing == Pricing::bland;
    while (true) {
      if (iterations_ >= opts_.max_iters) return LpStatus::iteration_limit;
      const Eigen::VectorXd y = btran_cost();
      const bool use_bland = bland || degenerate_run >= bland_switch;
      const int q = choose_entering(y, use_bland);
      if (q < 0) {
        if (!etas_.empty()) {
          // Confirm optimality on a fresh factorization.
          refactor();
          if (choose_entering(btran_cost(), use_bland) >= 0) continue;
        }
        return LpStatus::optimal;
      }
      Eigen::VectorXd alpha = ftran(Eigen::VectorXd(column(q)));
      const int r = choose_leaving(alpha, use_bland);
      if (r < 0) return LpStatus::unbounded;
      const double step = std::max(0.0, xb_[r]) / alpha[r];
      if (step > 0.0) {
        xb_ -= step * alpha;
        degenerate_run = 0;
      } else {
        ++degenerate_run;
      }
      xb_[r] = step;
      in_basis_[basis_[r]] = -1;
      basis_[r] = q;
      in_basis_[q] = r;
      etas_.push_back({r, alpha[r], std::move(alpha)});
      ++iterations_;
      if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) refactor();
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      // Row i of B^{-1}: e_i^T B^{-1}, via the transposed solve.
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
      e[i] = 1.0;
      Eigen::VectorXd w = e;
      for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        const double dot = w.dot(it->alpha) - w[it->row] * it->alpha[it->row];
        w[it->row] = (w[it->row] - dot) / it->pivot;
      }
      const Eigen::VectorXd rho = lu_.transpose().solve(w);
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (in_basis_[j] >= 0) continue;
        double v = 0.0;
        for (SpMat::InnerIterator it(sf_.A, j); it; ++it) v += rho[it.row()] * it.value();
        if (std::abs(v) > best_abs) {
          best_abs = std::abs(v);
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; the artificial stays basic at zero
      Eigen::VectorXd alpha = ftran(Eigen::VectorXd(column(best)));
      const double step = xb_[i] / alpha[i];
      xb_ -= step * alpha;
      xb_[i] = step;
      in_basis_[basis_[i]] = -1;
      basis_[i] = best;
      in_basis_[best] = i;
      etas_.push_back({i, alpha[i], std::move(alpha)});
      if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) refactor();
    }
    refactor();
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) xb_[i] = std::max(0.0, xb_[i]);
    }
  }

  struct Eta {
    int row;
    double pivot;
    Eigen::VectorXd alpha;
  };

  const StandardForm& sf_;
  const SolveOptions& opts_;
  int m_ = 0;
  int n_ = 0;
  int total_ = 0;
  std::vector<int> art_row_;
  std::vector<int> basis_;
  std::vector<int> in_basis_;
  std::vector<bool> barred_;
  Eigen::VectorXd cost_;
  Eigen::VectorXd xb_;
  std::vector<Eta> etas_;
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  long iterations_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& opts) {
  lp.validate();
  const StandardForm sf = to_standard_form(lp);
  LpSolution sol;
  sol.x = Eigen::VectorXd::Zero(lp.num_vars());
  sol.duals = Eigen::VectorXd::Zero(lp.num_constraints());

  if (sf.rows == 0) {
    // Only bounds: each variable sits at its cheaper finite bound.
    sol.status = LpStatus::optimal;
    for (int j = 0; j < lp.num_vars(); ++j) {
      const double c = lp.cost(j);
      const double lo = lp.lower(j), hi = lp.upper(j);
      double v = c > 0 ? lo : (c < 0 ? hi : (std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0)));
      if (!std::isfinite(v)) {
        sol.status = LpStatus::unbounded;
        return sol;
      }
      sol.x[j] = v;
    }
    sol.objective_value = lp.objective_value(sol.x);
    return sol;
  }

  Simplex simplex(sf, opts);
  sol.status = simplex.run(sol.iterations);
  if (sol.status != LpStatus::optimal) return sol;

  const Eigen::VectorXd z = simplex.primal();
  for (int j = 0; j < lp.num_vars(); ++j) {
    double v = sf.offset[j] + sf.sign[j] * z[sf.pos_col[j]];
    if (sf.neg_col[j] >= 0) v -= z[sf.neg_col[j]];
    sol.x[j] = v;
  }
  const Eigen::VectorXd y = simplex.row_duals();
  for (int i = 0; i < sf.original_rows; ++i) sol.duals[i] = sf.row_sign[i] * y[i];
  sol.objective_value = lp.objective_value(sol.x);
  return sol;
}

ResidualReport check_solution(const LinearProgram& lp, const Eigen::VectorXd& x, double tol) {
  if (x.size() != lp.num_vars()) throw ValidationError("x", "solution has the wrong dimension");
  ResidualReport rep;
  double worst = 0.0;
  auto note = [&](const std::string& what, double amount, double& field) {
    field = std::max(field, amount);
    if (amount > tol) rep.violations.emplace_back(what, amount);
    if (amount > worst) {
      worst = amount;
      rep.worst = what;
    }
  };
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& row = lp.constraints()[i];
    const double act = lp.row_activity(i, x);
    double viol = 0.0;
    switch (row.relation) {
      case Relation::less_equal: viol = act - row.rhs; break;
      case Relation::greater_equal: viol = row.rhs - act; break;
      case Relation::equal: viol = std::abs(act - row.rhs); break;
    }
    const std::string label = row.name.empty() ? "row " + std::to_string(i) : row.name;
    note(label, std::max(0.0, viol), rep.max_constraint_violation);
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double viol = std::max({0.0, lp.lower(j) - x[j], x[j] - lp.upper(j)});
    note("bound " + lp.name(j), viol, rep.max_bound_violation);
  }
  rep.objective = lp.objective_value(x);
  return rep;
}

double certified_dual_bound(const LinearProgram& lp, const Eigen::VectorXd& y) {
  if (y.size() != lp.num_constraints()) throw ValidationError("y", "dual vector has the wrong dimension");
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(lp.costs().data(), lp.num_vars());
  double bound = lp.objective_constant();
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& row = lp.constraints()[i];
    double yi = y[i];
    if (row.relation == Relation::greater_equal) yi = std::max(0.0, yi);
    if (row.relation == Relation::less_equal) yi = std::min(0.0, yi);
    if (yi == 0.0) continue;
    bound += yi * row.rhs;
    for (const auto& t : row.terms) d[t.var] -= yi * t.coef;
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (d[j] > 0.0) {
      if (!std::isfinite(lp.lower(j))) return -kInf;
      bound += d[j] * lp.lower(j);
    } else if (d[j] < 0.0) {
      if (!std::isfinite(lp.upper(j))) return -kInf;
      bound += d[j] * lp.upper(j);
    }
  }
  return bound;
}

namespace {

std::string sanitize(const std::string& name, int index) {
  std::string out;
  for (char ch : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
    out += ok ? ch : '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.') {
    out = "x" + std::to_string(index) + "_" + out;
  }
  return out;
}

void write_terms(std::ostream& os, const std::vector<std::pair<double, std::string>>& terms) {
  bool first = true;
  for (const auto& [coef, name] : terms) {
    if (coef == 0.0) continue;
    os << (coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (std::abs(coef) != 1.0) os << std::abs(coef) << " ";
    os << name;
    first = false;
  }
  if (first) os << "0";
}

}  // namespace

std::string export_lp(const LinearProgram& lp) {
  std::vector<std::string> names(lp.num_vars());
  for (int j = 0; j < lp.num_vars(); ++j) names[j] = sanitize(lp.name(j), j);
  // Disambiguate collisions introduced by sanitizing.
  {
    std::vector<int> order(lp.num_vars());
    for (int j = 0; j < lp.num_vars(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return names[a] < names[b]; });
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (names[order[k]] == names[order[k - 1]]) names[order[k]] += "_" + std::to_string(order[k]);
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "\\ objective constant " << lp.objective_constant() << "\n";
  os << "Minimize\n obj: ";
  std::vector<std::pair<double, std::string>> obj;
  for (int j = 0; j < lp.num_vars(); ++j) obj.emplace_back(lp.cost(j), names[j]);
  write_terms(os, obj);
  os << "\nSubject To\n";
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& row = lp.constraints()[i];
    os << " " << sanitize(row.name.empty() ? "c" + std::to_string(i) : row.name, i) << ": ";
    std::vector<std::pair<double, std::string>> terms;
    for (const auto& t : row.terms) terms.emplace_back(t.coef, names[t.var]);
    write_terms(os, terms);
    os << " " << to_string(row.relation) << " " << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double lo = lp.lower(j), hi = lp.upper(j);
    if (lo == 0.0 && hi == kInf) continue;
    os << " ";
    if (lo == -kInf && hi == kInf) {
      os << names[j] << " free\n";
      continue;
    }
    if (lo == -kInf) os << "-inf"; else os << lo;
    os << " <= " << names[j] << " <= ";
    if (hi == kInf) os << "+inf"; else os << hi;
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace cachecraft
