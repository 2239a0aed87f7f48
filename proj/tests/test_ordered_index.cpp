#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "gwlab/ordered_index.hpp"

using namespace gwlab;

TEST(UnvisitedIndex, EmptyAndSingle) {
  std::vector<double> none;
  UnvisitedIndex e(none);
  EXPECT_TRUE(e.empty());
  EXPECT_FALSE(e.successor(0.0));
  EXPECT_FALSE(e.predecessor(0.0));

  std::vector<double> one{2.5};
  UnvisitedIndex s(one);
  EXPECT_EQ(*s.successor(2.5), 0u);
  EXPECT_FALSE(s.predecessor(2.5));
  EXPECT_EQ(*s.predecessor(3.0), 0u);
  s.erase(0);
  EXPECT_TRUE(s.empty());
  EXPECT_FALSE(s.successor(-10));
  s.erase(0);
  EXPECT_EQ(s.remaining(), 0u);
}

TEST(UnvisitedIndex, AgreesWithStdSet) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> coord(-100, 100);
    std::set<double> uniq;
    while (uniq.size() < 300) uniq.insert(coord(gen));
    std::vector<double> keys(uniq.begin(), uniq.end());
    UnvisitedIndex idx(keys);
    std::set<double> alive(keys.begin(), keys.end());
    std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
    for (int op = 0; op < 2000; ++op) {
      if (op % 3 == 0) {
        const std::size_t i = pick(gen);
        idx.erase(i);
        alive.erase(keys[i]);
      }
      const double q = op % 5 == 0 ? keys[pick(gen)] : coord(gen);
      auto succ = idx.successor(q);
      auto it = alive.lower_bound(q);
      ASSERT_EQ(succ.has_value(), it != alive.end());
      if (succ) {
        ASSERT_EQ(keys[*succ], *it);
      }
      auto pred = idx.predecessor(q);
      ASSERT_EQ(pred.has_value(), it != alive.begin());
      if (pred) {
        ASSERT_EQ(keys[*pred], *std::prev(it));
      }
      ASSERT_EQ(idx.remaining(), alive.size());
    }
  }
}
