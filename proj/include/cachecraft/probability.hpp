#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace cachecraft {

// C(n,k), with C(n,k) = 0 for n < 0, k < 0 or k > n. Exact while the result
// fits in 64 bits.
std::uint64_t binom(int n, int k);

// binom() as a double; usable well beyond the 64-bit range.
double choose(int n, int k);

// n! / (parts[0]! parts[1]! ...). Throws ValidationError if the parts do not
// sum to n or any part is negative.
double multinomial(int n, const std::vector<int>& parts);

// probs(m, i) = Pr[Y_m = i], where Y_m is the (m+1)-th smallest file index in
// a demand of K i.i.d. requests. Rows m = 0..K-1, columns are files.
struct OrderStatTable {
  Eigen::MatrixXd probs;

  int num_users() const noexcept { return static_cast<int>(probs.rows()); }
  int num_files() const noexcept { return static_cast<int>(probs.cols()); }
  double operator()(int m, int i) const { return probs(m, i); }
};

// Closed form from suffix/prefix sums of p. Throws ValidationError for an
// invalid p or K < 1, NumericError if cancellation leaves an entry below
// -1e-12 (smaller negatives are clamped to 0).
OrderStatTable order_stat_pmf(const std::vector<double>& p, int num_users);

// Exhaustive enumeration of all N^K demands. Throws LimitError when N^K
// exceeds enumeration_cap(). The OpenMP version and the serial reference
// agree bit for bit.
OrderStatTable order_stat_oracle(const std::vector<double>& p, int num_users);
OrderStatTable order_stat_oracle_serial(const std::vector<double>& p, int num_users);

// Order statistics over a group of users of the given size, e.g. the small
// or large class.
OrderStatTable group_order_stat_pmf(const std::vector<double>& p, int group_size);

// Throws ValidationError unless p is non-empty, entries lie in [0,1] and the
// sum is within 1e-9 of 1.
void check_distribution(const std::vector<double>& p);

}  // namespace cachecraft
