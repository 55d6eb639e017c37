#pragma once

#include <optional>
#include <vector>

#include "cachecraft/model.hpp"

namespace cachecraft {

// Closed-form optimum of the homogeneous problem. With t = K*M/(N*F):
// integer t puts v_t = F/C(K,t); otherwise the mass is split between
// floor(t) and ceil(t) with weight theorem1_s = ceil(t) - t on floor(t).
// Throws ValidationError unless 0 <= M <= N*F.
GroupedScheme theorem1_scheme(int num_users, int num_files, double cache_size,
                              double file_length = 1.0);

// v_j = F * q^j (1-q)^(K-j). Throws ValidationError unless q is in [0,1].
GroupedScheme decentralized_scheme(int num_users, double q, double file_length = 1.0);

// Order in which leftover memory tops files up to full caching. Defaults to
// ascending file index.
struct TopUpOrder {
  std::vector<int> files;
};

// Fractions mu_n = min(M p_n / F, 1) plus sequential top-up, each file
// placed by decentralized caching with q_n = mu_n. Requires uniform F and M.
Placement random_popularity_baseline(const SystemConfig& cfg,
                                     const std::optional<TopUpOrder>& order = std::nullopt);

// mu_l = M F_l / sum F, capped at F_l with sequential top-up; q_l = mu_l/F_l.
// Requires uniform M.
Placement random_length_baseline(const SystemConfig& cfg,
                                 const std::optional<TopUpOrder>& order = std::nullopt);

// Length-proportional random caching where each user sizes its own shares
// from its own M_k, so small and large users cache different fractions.
// Used as the baseline for class-annotated configurations.
Placement random_class_baseline(const SystemConfig& cfg,
                                const std::optional<TopUpOrder>& order = std::nullopt);

// Independent caching: user k keeps each bit of file l with probability
// q(k,l), so |W_S^(l)| = F_l prod_{k in S} q(k,l) prod_{k not in S} (1-q(k,l)).
Placement product_form_placement(const SystemConfig& cfg, const Eigen::MatrixXd& q);

// Assigns every subset the grouped value for its size and class composition
// and sets mu to the stored amounts. Throws ValidationError when gs breaks a
// structural zero or does not fit cfg.
Placement expand_to_placement(const SystemConfig& cfg, const GroupedScheme& gs);

// Inverse of expand_to_placement for the given kind. Throws ValidationError
// if the placement is not symmetric within tol.
GroupedScheme extract_grouped(const SystemConfig& cfg, const Placement& pl, SchemeKind kind,
                              double tol = 1e-9);

}  // namespace cachecraft
