#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "liqshock/error.hpp"
#include "liqshock/mesh.hpp"

namespace liqshock {
namespace {

TEST(UniformGrid, NodesAndSpacing) {
    const auto g = SpatialGrid::uniform(0.0, 5.0, 30);
    ASSERT_EQ(g.size(), 31u);
    EXPECT_EQ(g.intervals(), 30);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 5.0);
    EXPECT_NEAR(g[6], 1.0, 1e-15);
    EXPECT_NEAR(g[12], 2.0, 1e-15);
    EXPECT_NEAR(g.min_spacing(), 1.0 / 6.0, 1e-14);
    EXPECT_EQ(g.kind(), GridKind::uniform);
}

TEST(UniformGrid, RejectsBadInput) {
    EXPECT_THROW(SpatialGrid::uniform(0.0, 5.0, 1), ValidationError);
    EXPECT_THROW(SpatialGrid::uniform(5.0, 5.0, 10), ValidationError);
}

TEST(TavellaRandallGrid, ReferenceNode) {
    const auto g = SpatialGrid::tavella_randall(0.0, 5.0, 2.0, 15.0, 2);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_EQ(g[2], 5.0);
    EXPECT_NEAR(g[1], 2.4932041597174133, 1e-14);
}

TEST(TavellaRandallGrid, RejectsBadInput) {
    EXPECT_THROW(SpatialGrid::tavella_randall(0, 5, 2, 0.0, 10), ValidationError);
    EXPECT_THROW(SpatialGrid::tavella_randall(0, 5, 2, -1.0, 10), ValidationError);
    EXPECT_THROW(SpatialGrid::tavella_randall(0, 5, 6, 15.0, 10), ValidationError);
    EXPECT_THROW(SpatialGrid::tavella_randall(0, 5, 2, 15.0, 1), ValidationError);
}

TEST(TavellaRandallGrid, LargeAlphaApproachesUniform) {
    const auto t = SpatialGrid::tavella_randall(0.0, 5.0, 2.0, 1e8, 40);
    const auto u = SpatialGrid::uniform(0.0, 5.0, 40);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t[i], u[i], 1e-8);
}

TEST(TavellaRandallGrid, ConcentratesNearStrike) {
    const auto g = SpatialGrid::tavella_randall(0.0, 5.0, 2.0, 0.5, 50);
    // spacing is smallest in the cell that brackets the strike
    std::size_t k = 1;
    while (g[k] < 2.0) ++k;
    const double near = g.spacing(k);
    EXPECT_LT(near, g.spacing(1));
    EXPECT_LT(near, g.spacing(50));
    EXPECT_NEAR(g.min_spacing(), near, 0.2 * near);
}

TEST(GridProperties, RandomGridsAreStrictlyIncreasingWithExactEnds) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> n_int(2, 400);
    for (int n = 0; n < 500; ++n) {
        const double k = 0.5 + 10.0 * unit(rng);
        const double lo = k * 0.9 * unit(rng);
        const double hi = k * (1.05 + 3.0 * unit(rng));
        const double alpha = std::pow(10.0, -2.0 + 6.0 * unit(rng));
        const int intervals = n_int(rng);
        for (const auto& g : {SpatialGrid::uniform(lo, hi, intervals),
                              SpatialGrid::tavella_randall(lo, hi, k, alpha, intervals)}) {
            ASSERT_EQ(g.size(), static_cast<std::size_t>(intervals) + 1);
            ASSERT_EQ(g.front(), lo);
            ASSERT_EQ(g.back(), hi);
            double sum = 0.0;
            for (std::size_t i = 1; i < g.size(); ++i) {
                ASSERT_GT(g.spacing(i), 0.0);
                sum += g.spacing(i);
            }
            ASSERT_NEAR(sum, hi - lo, 1e-12 * hi);
        }
    }
}

TEST(Interpolate, LinearBetweenNodes) {
    const auto g = SpatialGrid::uniform(0.0, 4.0, 4);
    const std::vector<double> v = {0.0, 10.0, 20.0, 40.0, 80.0};
    EXPECT_DOUBLE_EQ(g.interpolate(v, 2.0), 20.0);
    EXPECT_DOUBLE_EQ(g.interpolate(v, 2.5), 30.0);
    EXPECT_DOUBLE_EQ(g.interpolate(v, -1.0), 0.0);
    EXPECT_DOUBLE_EQ(g.interpolate(v, 9.0), 80.0);
    EXPECT_THROW(g.interpolate(std::vector<double>(3), 1.0), ValidationError);
}

TEST(TimeGrid, FromStepsCoversHorizon) {
    const auto tg = TimeGrid::from_steps(1.0, 7);
    EXPECT_EQ(tg.steps, 7);
    EXPECT_DOUBLE_EQ(tg.dt * 7, 1.0);
    EXPECT_EQ(tg.tau(0), 0.0);
    EXPECT_EQ(tg.tau(7), 1.0);
    EXPECT_EQ(TimeGrid::from_steps(1.0, 0).steps, 0);
    EXPECT_THROW(TimeGrid::from_steps(1.0, -1), ValidationError);
    EXPECT_THROW(TimeGrid::from_steps(0.0, 3), ValidationError);
}

TEST(TimeGrid, HalfMinSpacingRule) {
    const auto g = SpatialGrid::uniform(0.0, 5.0, 30);
    const auto tg = time_grid_from_space(g, 1.0, TimeStepRule::half_min_spacing());
    EXPECT_EQ(tg.steps, 12);
    EXPECT_NEAR(tg.dt, 1.0 / 12.0, 1e-16);
}

TEST(TimeGrid, SnapsNearIntegerRatios) {
    // 5/240/2 is not representable; the ratio lands within rounding of 96
    const auto g = SpatialGrid::uniform(0.0, 5.0, 240);
    EXPECT_EQ(time_grid_from_space(g, 1.0, TimeStepRule::half_min_spacing()).steps, 96);
    const auto g2 = SpatialGrid::uniform(0.0, 5.0, 960);
    EXPECT_EQ(time_grid_from_space(g2, 1.0, TimeStepRule::half_min_spacing()).steps, 384);
}

TEST(TimeGrid, ExplicitRuleRoundsUp) {
    const auto g = SpatialGrid::uniform(0.0, 5.0, 10);
    const auto tg = time_grid_from_space(g, 1.0, TimeStepRule::explicit_step(0.3));
    EXPECT_EQ(tg.steps, 4);
    EXPECT_LE(tg.dt, 0.3);
    EXPECT_THROW(time_grid_from_space(g, 1.0, TimeStepRule::explicit_step(0.0)), ValidationError);
    EXPECT_THROW(time_grid_from_space(g, 1.0, TimeStepRule::explicit_step(2.0)), ValidationError);
}

TEST(TimeGrid, RandomSnapProperties) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n = 0; n < 2000; ++n) {
        const double horizon = 0.05 + 5.0 * unit(rng);
        const double dt = horizon * (1e-4 + unit(rng) * (1 - 1e-4));
        const auto g = SpatialGrid::uniform(0.0, 1.0, 4);
        const auto tg = time_grid_from_space(g, horizon, TimeStepRule::explicit_step(dt));
        ASSERT_GE(tg.steps, 1);
        ASSERT_NEAR(tg.steps * tg.dt, horizon, 1e-12 * horizon);
        ASSERT_LE(tg.dt, dt * (1 + 1e-9));
        ASSERT_EQ(tg.tau(tg.steps), horizon);
    }
}

}  // namespace
}  // namespace liqshock
