#pragma once

#include <string>
#include <vector>

#include "cachecraft/model.hpp"

namespace cachecraft {

// R_d = sum over nonempty S of max_{k in S} |W^{(d_k)}_{S \ {k}}|.
// Demand entries are not range-checked; see check_demand().
double rate_for_demand(const Placement& pl, const std::vector<int>& demand);
double rate_for_demand(const Placement& pl, const DemandVector& d);

// Exhaustive expectation over all N^K demands. Throws LimitError when N^K
// exceeds enumeration_cap(). The OpenMP kernel reduces fixed blocks in
// order, so it matches the serial reference bit for bit.
RateResult expected_rate(const SystemConfig& cfg, const Placement& pl,
                         bool keep_per_demand = false);
RateResult expected_rate_serial(const SystemConfig& cfg, const Placement& pl,
                                bool keep_per_demand = false);

struct CurvePoint {
  double cache_size;
  std::string method;
  double expected_rate;
};

// Method ids: general, homogeneous, simplex, pop-first, length-first,
// two-tier, full-het (LP optima, evaluated through their placements) and
// theorem1, decentralized, random-popularity, random-length, random-class
// (closed-form or baseline schemes).
const std::vector<std::string>& curve_methods();

// Config at grid value M. Without classes every user gets M. With classes
// the class sizes keep the template's ratio to its mean cache size, so M is
// the mean cache size per user.
SystemConfig config_at(const SystemConfig& tmpl, double cache_size);

// One point per grid value, in grid order. Errors name the failing point.
std::vector<CurvePoint> sweep_curve(const SystemConfig& tmpl, const std::vector<double>& grid,
                                    const std::string& method);

// 100 (R - R_ref) / R_ref, with 0/0 read as 0.
double percent_increase(double rate, double reference);

}  // namespace cachecraft
