#include "rankedmm/server_set.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace rankedmm {
namespace {

TEST(ServerSet, LowestIdleBasics) {
  ServerSet set(64);
  EXPECT_EQ(set.lowest_idle(), 1);
  set.set_busy(1);
  set.set_busy(2);
  set.set_busy(3);
  EXPECT_EQ(set.lowest_idle(), 4);
  set.set_idle(2);
  EXPECT_EQ(set.lowest_idle(), 2);  // busy = {1, 3}
  EXPECT_TRUE(set.busy(1));
  EXPECT_FALSE(set.busy(2));
  EXPECT_EQ(set.popcount(), 2);
}

TEST(ServerSet, BlockBoundaries) {
  ServerSet set(64);
  for (int s = 1; s <= 63; ++s) set.set_busy(s);
  EXPECT_EQ(set.lowest_idle(), 64);
  set.set_busy(64);
  EXPECT_EQ(set.lowest_idle(), 65);  // block 0 full, capacity must grow on demand
  set.set_busy(65);
  EXPECT_GE(set.capacity(), 128);
  EXPECT_EQ(set.lowest_idle(), 66);
  set.set_idle(37);
  EXPECT_EQ(set.lowest_idle(), 37);
}

TEST(ServerSet, SummaryLevelSkipsFullBlocks) {
  ServerSet set(64);
  for (int s = 1; s <= 64 * 64; ++s) set.set_busy(s);
  EXPECT_EQ(set.lowest_idle(), 64 * 64 + 1);
  set.set_idle(64 * 63 + 17);
  EXPECT_EQ(set.lowest_idle(), 64 * 63 + 17);
}

TEST(ServerSet, GrowthPreservesState) {
  ServerSet set(1);
  set.set_busy(1);
  set.set_busy(700);  // forces several doublings
  EXPECT_TRUE(set.busy(1));
  EXPECT_TRUE(set.busy(700));
  EXPECT_EQ(set.lowest_idle(), 2);
  EXPECT_EQ(set.popcount(), 2);
}

// Brute-force oracle: lowest idle equals a linear scan over a mirror vector.
TEST(ServerSet, MatchesNaiveScanOnRandomStates) {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 10000; ++trial) {
    const int universe = 1 + static_cast<int>(rng() % 300);
    ServerSet set(universe);
    std::vector<bool> mirror(static_cast<std::size_t>(universe) + 2, false);
    const int ops = static_cast<int>(rng() % 64);
    int busy_count = 0;
    for (int k = 0; k < ops; ++k) {
      const int server = 1 + static_cast<int>(rng() % universe);
      if (rng() % 2 == 0) {
        if (!mirror[server]) ++busy_count;
        mirror[server] = true;
        set.set_busy(server);
      } else if (mirror[server]) {
        mirror[server] = false;
        --busy_count;
        set.set_idle(server);
      }
    }
    int expected = 1;
    while (expected < static_cast<int>(mirror.size()) && mirror[expected]) ++expected;
    ASSERT_EQ(set.lowest_idle(), expected) << "trial=" << trial;
    ASSERT_EQ(set.popcount(), busy_count) << "trial=" << trial;
  }
}

}  // namespace
}  // namespace rankedmm
