#include "cachecraft/subsets.hpp"

#include <gtest/gtest.h>

#include "cachecraft/errors.hpp"

namespace cachecraft {
namespace {

TEST(Subsets, BasicOperations) {
  const UserSet s = singleton(0) | singleton(2);
  EXPECT_EQ(set_size(s), 2);
  EXPECT_TRUE(contains(s, 2));
  EXPECT_FALSE(contains(s, 1));
  EXPECT_EQ(members(s), (std::vector<int>{0, 2}));
  EXPECT_EQ(full_set(3), UserSet{7});
  EXPECT_EQ(num_subsets(4), 16);
  EXPECT_TRUE(members(0).empty());
}

TEST(Subsets, CanonicalOrderIsSizeThenMembers) {
  const std::vector<UserSet> order = canonical_subsets(3);
  std::vector<std::string> keys;
  for (UserSet s : order) keys.push_back(subset_key(s));
  EXPECT_EQ(keys, (std::vector<std::string>{"", "1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"}));
}

TEST(Subsets, CanonicalOrderCoversEverySubsetOnce) {
  for (int K = 0; K <= 6; ++K) {
    std::vector<int> seen(num_subsets(K), 0);
    for (UserSet s : canonical_subsets(K)) ++seen[s];
    for (int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(Subsets, KeysRoundTrip) {
  for (int K = 1; K <= 5; ++K) {
    for (UserSet s = 0; s < static_cast<UserSet>(num_subsets(K)); ++s) {
      EXPECT_EQ(parse_subset_key(subset_key(s), K), s);
    }
  }
  EXPECT_EQ(subset_key(singleton(0) | singleton(2) | singleton(3)), "1,3,4");
}

TEST(Subsets, MalformedKeysAreRejected) {
  for (const char* key : {"0", "5", "1,,2", "a", "1,1", "2,", "1 ,2"}) {
    EXPECT_THROW(parse_subset_key(key, 4), ValidationError) << key;
  }
}

}  // namespace
}  // namespace cachecraft
