#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cachecraft {

// A set of users as a bitmask: bit k is user k (0-based internally, 1-based
// in every external format).
using UserSet = std::uint32_t;

inline constexpr int kMaxUsers = 20;

inline int set_size(UserSet s) noexcept { return std::popcount(s); }

inline bool contains(UserSet s, int user) noexcept {
  return ((s >> user) & 1u) != 0;
}

inline UserSet singleton(int user) noexcept { return UserSet{1} << user; }

inline UserSet full_set(int num_users) noexcept {
  return num_users >= 32 ? ~UserSet{0} : ((UserSet{1} << num_users) - 1);
}

inline int num_subsets(int num_users) noexcept { return 1 << num_users; }

std::vector<int> members(UserSet s);

// All 2^K subsets of [K], ordered by size and then by sorted member list.
std::vector<UserSet> canonical_subsets(int num_users);

// Sorted 1-based member list joined by commas ("1,3,4"); the empty set is "".
std::string subset_key(UserSet s);

// Inverse of subset_key. Throws ValidationError on malformed keys or users
// outside [1..num_users].
UserSet parse_subset_key(std::string_view key, int num_users);

}  // namespace cachecraft
