#include "cachecraft/subsets.hpp"

#include <algorithm>
#include <charconv>

#include "cachecraft/errors.hpp"

namespace cachecraft {

std::vector<int> members(UserSet s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(set_size(s)));
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

std::vector<UserSet> canonical_subsets(int num_users) {
  std::vector<UserSet> all(static_cast<std::size_t>(num_subsets(num_users)));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<UserSet>(i);
  std::stable_sort(all.begin(), all.end(), [](UserSet a, UserSet b) {
    if (set_size(a) != set_size(b)) return set_size(a) < set_size(b);
    return members(a) < members(b);
  });
  return all;
}

std::string subset_key(UserSet s) {
  std::string key;
  for (int user : members(s)) {
    if (!key.empty()) key += ',';
    key += std::to_string(user + 1);
  }
  return key;
}

UserSet parse_subset_key(std::string_view key, int num_users) {
  UserSet s = 0;
  if (key.empty()) return s;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t comma = key.find(',', pos);
    if (comma == std::string_view::npos) comma = key.size();
    std::string_view token = key.substr(pos, comma - pos);
    int user = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), user);
    if (ec != std::errc{} || ptr != token.data() + token.size() || user < 1 ||
        user > num_users) {
      throw ValidationError("subset", "invalid subset key \"" + std::string(key) + "\"");
    }
    if (contains(s, user - 1)) {
      throw ValidationError("subset", "duplicate user in subset key \"" + std::string(key) + "\"");
    }
    s |= singleton(user - 1);
    pos = comma + 1;
  }
  return s;
}

}  // namespace cachecraft
