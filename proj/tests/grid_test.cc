#include "gridmon/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gridmon;

namespace {

std::vector<ZoneSpec> three_zones() {
  // Zones 1 and 2 overlap at (1,1).
  return {{1, {{0, 0}, {1, 1}}, 0.5},
          {2, {{1, 1}, {2, 2}}, 0.5},
          {3, {{4, 4}}, 0.5}};
}

TEST(Grid, BoundaryMoveClampsToStay) {
  GridSpec grid{5, 5, 0.0};
  WorldState s{{{0, 0}}, 7};
  RngStream rng(1);
  const WorldState next = step(s, {{Move::Left}}, grid, rng);
  EXPECT_EQ(next.positions[0], (GridPos{0, 0}));
  EXPECT_EQ(next.time, 8u);
}

TEST(Grid, UpIncrementsY) {
  GridSpec grid{5, 5, 0.0};
  WorldState s{{{2, 3}}, 0};
  RngStream rng(1);
  const WorldState next = step(s, {{Move::Up}}, grid, rng);
  EXPECT_EQ(next.positions[0], (GridPos{2, 4}));
}

TEST(Grid, MismatchedActionLengthIsContractViolation) {
  GridSpec grid{5, 5, 0.0};
  WorldState s{{{0, 0}, {1, 1}}, 0};
  RngStream rng(1);
  EXPECT_THROW(step(s, {{Move::Stay}}, grid, rng), ContractError);
}

TEST(Grid, SlipFrequencyMatchesBinomialOracle) {
  // An interior agent intending Stay moves iff the step slipped to one of the
  // four non-Stay moves, so P(moved) = slip_prob * 4/5.
  GridSpec grid{9, 9, 0.2};
  RngStream rng(12345);
  const int trials = 100000;
  int moved = 0;
  for (int i = 0; i < trials; ++i) {
    WorldState s{{{4, 4}}, 0};
    const WorldState next = step(s, {{Move::Stay}}, grid, rng);
    if (!(next.positions[0] == GridPos{4, 4})) ++moved;
  }
  const double slip_hat = static_cast<double>(moved) / trials / 0.8;
  EXPECT_NEAR(slip_hat, 0.2, 0.01);
}

TEST(Grid, StepIsDeterministicGivenSeed) {
  GridSpec grid{6, 6, 0.5};
  const WorldState s0{{{2, 2}, {3, 3}}, 0};
  const JointAction a{{Move::Up, Move::Left}};
  std::vector<GridPos> first;
  {
    RngStream rng(99);
    WorldState s = s0;
    for (int t = 0; t < 50; ++t) s = step(s, a, grid, rng);
    first = s.positions;
  }
  RngStream rng(99);
  WorldState s = s0;
  for (int t = 0; t < 50; ++t) s = step(s, a, grid, rng);
  EXPECT_EQ(s.positions, first);
}

TEST(Occupancy, AnyAgentInsideSetsComponent) {
  const auto zones = three_zones();
  const WorldState s{{{0, 0}, {3, 3}}, 0};  // agent 0 in zone 1, agent 1 nowhere
  EXPECT_EQ(occupancy(s, zones), (std::vector<std::uint8_t>{1, 0, 0}));
}

TEST(Occupancy, NoAgentInAnyZoneIsAllZeros) {
  const auto zones = three_zones();
  const WorldState s{{{3, 0}, {0, 3}}, 0};
  EXPECT_EQ(occupancy(s, zones), (std::vector<std::uint8_t>{0, 0, 0}));
}

TEST(Occupancy, TwoAgentsInSameZoneIsMaxNotSum) {
  const auto zones = three_zones();
  const WorldState s{{{4, 4}, {4, 4}}, 0};
  EXPECT_EQ(occupancy(s, zones), (std::vector<std::uint8_t>{0, 0, 1}));
}

TEST(LocalOccupancy, SingleZoneMembership) {
  const auto zones = three_zones();
  EXPECT_EQ(local_occupancy({2, 2}, zones), (std::vector<std::uint8_t>{0, 1, 0}));
}

TEST(LocalOccupancy, OverlappingZones) {
  const auto zones = three_zones();
  EXPECT_EQ(local_occupancy({1, 1}, zones), (std::vector<std::uint8_t>{1, 1, 0}));
}

TEST(LocalOccupancy, OutsideAllZonesIsZeroVector) {
  const auto zones = three_zones();
  EXPECT_EQ(local_occupancy({3, 0}, zones), (std::vector<std::uint8_t>{0, 0, 0}));
}

// occupancy == elementwise max of local_occupancy, exhaustively on a small grid.
TEST(Occupancy, EqualsMaxOfLocalIndicatorsExhaustively) {
  const auto zones = three_zones();
  for (int x0 = 0; x0 < 5; ++x0)
    for (int y0 = 0; y0 < 5; ++y0)
      for (int x1 = 0; x1 < 5; ++x1)
        for (int y1 = 0; y1 < 5; ++y1) {
          const WorldState s{{{x0, y0}, {x1, y1}}, 0};
          const auto global = occupancy(s, zones);
          const auto l0 = local_occupancy({x0, y0}, zones);
          const auto l1 = local_occupancy({x1, y1}, zones);
          for (std::size_t m = 0; m < zones.size(); ++m) {
            EXPECT_EQ(global[m], std::max(l0[m], l1[m]));
            EXPECT_TRUE(global[m] == 0 || global[m] == 1);
          }
        }
}

TEST(GridSpec, ValidatesBounds) {
  EXPECT_THROW((GridSpec{0, 5, 0.0}).validate(), ConfigError);
  EXPECT_THROW((GridSpec{5, 5, 1.0}).validate(), ConfigError);
  EXPECT_NO_THROW((GridSpec{1, 1, 0.0}).validate());
}

TEST(ZoneSpec, ValidatesCellsAndThreshold) {
  GridSpec grid{3, 3, 0.0};
  EXPECT_THROW((ZoneSpec{1, {}, 0.5}).validate(grid), ConfigError);
  EXPECT_THROW((ZoneSpec{1, {{3, 0}}, 0.5}).validate(grid), ConfigError);
  EXPECT_THROW((ZoneSpec{1, {{0, 0}}, 1.0}).validate(grid), ConfigError);
  EXPECT_NO_THROW((ZoneSpec{1, {{0, 0}}, 0.0}).validate(grid));
}

}  // namespace
