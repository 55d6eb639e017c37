#include "cachecraft/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cachecraft/enumeration.hpp"
#include "cachecraft/errors.hpp"
#include "cachecraft/model.hpp"

namespace cachecraft {

std::uint64_t binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n-k+i) is divisible by i; divide first by the gcd to delay overflow.
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    r = (r / g) * (num / (i / g));
  }
  return r;
}

double choose(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n <= 62) return static_cast<double>(binom(n, k));
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double multinomial(int n, const std::vector<int>& parts) {
  int sum = 0;
  for (int part : parts) {
    if (part < 0) throw ValidationError("parts", "multinomial parts must be non-negative");
    sum += part;
  }
  if (sum != n) throw ValidationError("parts", "multinomial parts must sum to n");
  double r = 1.0;
  int left = n;
  for (int part : parts) {
    r *= choose(left, part);
    left -= part;
  }
  return r;
}

void check_distribution(const std::vector<double>& p) {
  if (p.empty()) throw ValidationError("p", "popularity vector is empty");
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw ValidationError("p", "popularities must lie in [0,1]");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("p", "popularities must sum to 1");
}

namespace {

// x^e with 0^0 = 1.
double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double clamp_probability(double v, int m, int i) {
  if (v < 0.0) {
    if (v < -1e-12) {
      throw NumericError("order statistic Pr[Y_" + std::to_string(m) + "=" +
                         std::to_string(i + 1) + "] evaluated to " + std::to_string(v));
    }
    return 0.0;
  }
  return std::min(v, 1.0);
}

}  // namespace

OrderStatTable order_stat_pmf(const std::vector<double>& p, int num_users) {
  check_distribution(p);
  if (num_users < 1) throw ValidationError("K", "K must be a positive integer");
  const int N = static_cast<int>(p.size());
  const int K = num_users;

  // tail[i] = p_i + ... + p_{N-1}, head[i] = p_0 + ... + p_{i-1}; both summed
  // directly rather than as 1 minus the other.
  std::vector<double> tail(N + 1, 0.0), head(N + 1, 0.0);
  for (int i = N - 1; i >= 0; --i) tail[i] = tail[i + 1] + p[i];
  for (int i = 0; i < N; ++i) head[i + 1] = head[i] + p[i];

  OrderStatTable table{Eigen::MatrixXd::Zero(K, N)};
  for (int i = 0; i < N; ++i) {
    const double at_least = tail[i];      // Pr[request >= i]
    const double above = tail[i + 1];     // Pr[request > i]
    const double below = head[i];         // Pr[request < i]
    const double upto = head[i + 1];      // Pr[request <= i]
    const double row0 = ipow(at_least, K) - ipow(above, K);
    table.probs(0, i) = clamp_probability(row0, 0, i);
    if (K >= 2) {
      const double row1 =
          row0 + K * (below * ipow(at_least, K - 1) - upto * ipow(above, K - 1));
      table.probs(1, i) = clamp_probability(row1, 1, i);
    }
    for (int m = 2; m < K; ++m) {
      double v = 0.0;
      if (i == 0) {
        for (int k = 0; k <= K - m - 1; ++k) {
          v += choose(K, m + 1 + k) * ipow(p[0], m + 1 + k) * ipow(above, K - m - 1 - k);
        }
      } else {
        // Exactly m requests below i, the rest at least i with one equal to i.
        v = choose(K, K - m) * (ipow(at_least, K - m) - ipow(above, K - m)) * ipow(below, m);
        // Fewer than m below i: b below, 2+k equal to i, the rest above.
        for (int k = 0; k <= K - 2; ++k) {
          for (int b = std::max(0, m - 1 - k); b <= std::min(m - 1, K - 2 - k); ++b) {
            v += multinomial(K, {2 + k, b, K - 2 - k - b}) * ipow(p[i], 2 + k) *
                 ipow(below, b) * ipow(above, K - 2 - k - b);
          }
        }
      }
      table.probs(m, i) = clamp_probability(v, m, i);
    }
  }
  return table;
}

namespace {

void check_oracle_size(std::size_t num_files, int num_users) {
  if (num_users < 1) throw ValidationError("K", "K must be a positive integer");
  const double count = demand_count(static_cast<int>(num_files), num_users);
  if (count > enumeration_cap()) {
    throw LimitError("N^K = " + std::to_string(count) + " exceeds the enumeration cap");
  }
}

void accumulate_block(const std::vector<double>& p, int K, std::uint64_t begin, std::uint64_t end,
                      Eigen::MatrixXd& acc) {
  std::vector<int> sorted(static_cast<std::size_t>(K));
  for_each_demand(p, K, begin, end, [&](const std::vector<int>& d, double prob) {
    std::copy(d.begin(), d.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    for (int m = 0; m < K; ++m) acc(m, sorted[m]) += prob;
  });
}

}  // namespace

OrderStatTable order_stat_oracle_serial(const std::vector<double>& p, int num_users) {
  check_distribution(p);
  check_oracle_size(p.size(), num_users);
  const int N = static_cast<int>(p.size());
  const int K = num_users;
  const auto total = static_cast<std::uint64_t>(demand_count(N, K));
  const std::uint64_t blocks = block_count(total);
  OrderStatTable table{Eigen::MatrixXd::Zero(K, N)};
  Eigen::MatrixXd part(K, N);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    part.setZero();
    accumulate_block(p, K, block_begin(total, blocks, b), block_begin(total, blocks, b + 1), part);
    table.probs += part;
  }
  return table;
}

OrderStatTable order_stat_oracle(const std::vector<double>& p, int num_users) {
  check_distribution(p);
  check_oracle_size(p.size(), num_users);
  const int N = static_cast<int>(p.size());
  const int K = num_users;
  const auto total = static_cast<std::uint64_t>(demand_count(N, K));
  const std::uint64_t blocks = block_count(total);
  std::vector<Eigen::MatrixXd> parts(blocks, Eigen::MatrixXd::Zero(K, N));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    accumulate_block(p, K, block_begin(total, blocks, ub), block_begin(total, blocks, ub + 1),
                     parts[ub]);
  }
  OrderStatTable table{Eigen::MatrixXd::Zero(K, N)};
  for (const auto& part : parts) table.probs += part;
  return table;
}

OrderStatTable group_order_stat_pmf(const std::vector<double>& p, int group_size) {
  return order_stat_pmf(p, group_size);
}

}  // namespace cachecraft
