#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "liqshock/analysis.hpp"
#include "liqshock/oracles.hpp"

namespace liqshock {
namespace {

SchemeConfig flat_config(SchemeKind kind) {
    SchemeConfig cfg;
    cfg.scheme = kind;
    cfg.payoff = [](double) { return 1.0; };
    cfg.right = BoundaryCondition::natural();
    return cfg;
}

double max_gap(const GridState& a, const GridState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        m = std::max({m, std::abs(a.u[i] - b.u[i]), std::abs(a.v[i] - b.v[i])});
    }
    return m;
}

TEST(OdeOracle, StationaryWithoutDrift) {
    const StepCoefficients coeffs{0.3, 1.0, 1.0, 12.0};
    const auto y = ode_oracle(coeffs, 1.0, 3.0, 1.0, 1e-3);
    EXPECT_NEAR(y.u, 1.0, 1e-14);
    EXPECT_NEAR(y.v, 1.0, 1e-14);
}

TEST(OdeOracle, ShortHorizonExpansion) {
    ModelParams params;
    params.horizon = 0.01;
    const auto y = ode_oracle(params, 1.0, 1e-7);
    // second-order terms: u'' = -a d0, v'' = c d0
    EXPECT_NEAR(y.u, 1.0002, 2e-5);
    EXPECT_NEAR(y.v, 1.0, 2e-5);
}

TEST(OdeOracle, FourthOrderSelfConvergence) {
    const ModelParams params;
    const double dts[] = {0.04, 0.02, 0.01};
    double u[3];
    for (int k = 0; k < 3; ++k) u[k] = ode_oracle(params, 1.0, dts[k]).u;
    const double ratio = (u[0] - u[1]) / (u[1] - u[2]);
    EXPECT_GT(ratio, 12.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(OdeOracle, SchemesConvergeToReducedOde) {
    const ModelParams params;
    const auto ref = ode_oracle(params, 1.0, 1e-5);
    const auto grid = SpatialGrid::uniform(0.0, 5.0, 16);
    for (auto kind : {SchemeKind::imex_linear, SchemeKind::imex_linearized}) {
        double err[2];
        for (int k = 0; k < 2; ++k) {
            const auto tg = TimeGrid::from_steps(1.0, 64 << k);
            const auto run = solve_forward(params, grid, tg, flat_config(kind));
            err[k] = std::max(std::abs(run.final_state.u[5] - ref.u),
                              std::abs(run.final_state.v[5] - ref.v));
        }
        EXPECT_NEAR(err[0] / err[1], 2.0, 0.4);
    }
}

TEST(ImplicitOracle, MatchesScheme1WithoutReaction) {
    const ModelParams params;
    const StepCoefficients coeffs{0.3, 0.0, 0.0, 0.0};
    const auto grid = SpatialGrid::uniform(0.0, 5.0, 20);
    const auto tg = TimeGrid::from_steps(1.0, 16);
    SchemeConfig cfg;
    cfg.left = BoundaryCondition::dirichlet_constant(0.0);
    const auto oracle = implicit_oracle(params, coeffs, grid, tg, resolve_config(cfg, params, grid));
    const auto run = solve_forward(params, coeffs, grid, tg, cfg);
    EXPECT_LT(max_gap(oracle, run.final_state), 1e-12);
}

TEST(ImplicitOracle, StationaryConstantDataMatchesOdeExactly) {
    const ModelParams params;
    const StepCoefficients coeffs{0.3, 1.0, 1.0, 12.0};
    const auto grid = SpatialGrid::uniform(0.0, 5.0, 8);
    const auto tg = TimeGrid::from_steps(1.0, 32);
    const auto cfg = resolve_config(flat_config(SchemeKind::imex_linear), params, grid);
    const auto oracle = implicit_oracle(params, coeffs, grid, tg, cfg);
    const auto ode = ode_oracle(coeffs, 1.0, 1.0, 1.0, 1e-4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(oracle.u[i], ode.u, 1e-8);
        EXPECT_NEAR(oracle.v[i], ode.v, 1e-8);
    }
}

TEST(ImplicitOracle, ConstantDataConvergesToOde) {
    const ModelParams params;
    const auto grid = SpatialGrid::uniform(0.0, 5.0, 8);
    const auto cfg = resolve_config(flat_config(SchemeKind::imex_linear), params, grid);
    const auto ode = ode_oracle(params, 1.0, 1e-5);
    double err[3], u[3];
    for (int k = 0; k < 3; ++k) {
        const auto oracle = implicit_oracle(params, grid, TimeGrid::from_steps(1.0, 32 << k), cfg);
        u[k] = oracle.u[4];
        err[k] = std::abs(u[k] - ode.u);
    }
    EXPECT_NEAR(err[0] / err[1], 2.0, 0.4);
    EXPECT_NEAR(err[1] / err[2], 2.0, 0.4);
    // extrapolated implicit values close on the ODE at second order
    const double y1 = richardson(u[0], u[1], 1), y2 = richardson(u[1], u[2], 1);
    const double e1 = std::abs(y1 - ode.u), e2 = std::abs(y2 - ode.u);
    EXPECT_GT(e1 / e2, 3.0);
    EXPECT_LT(e2, 1e-5);
}

TEST(ImplicitOracle, OneStepGapToScheme2IsSecondOrder) {
    const ModelParams params;
    const auto coeffs = StepCoefficients::from(params, derive_constants(params));
    const auto grid = SpatialGrid::uniform(0.0, 5.0, 32);
    SchemeConfig cfg;
    cfg.scheme = SchemeKind::imex_linearized;
    cfg = resolve_config(cfg, params, grid);
    const auto start = initial_state(grid, params);
    double gaps[3];
    const double dts[] = {1e-2, 1e-3, 1e-4};
    for (int k = 0; k < 3; ++k) {
        ModelParams one_step = params;
        one_step.horizon = dts[k];
        const auto tg = TimeGrid::from_steps(dts[k], 1);
        const auto lin = step_scheme2(start, grid, tg, coeffs, cfg);
        const auto oracle = implicit_oracle(one_step, coeffs, grid, tg, cfg);
        gaps[k] = max_gap(lin, oracle);
    }
    EXPECT_GT(std::log10(gaps[0] / gaps[1]), 1.8);
    EXPECT_GT(std::log10(gaps[1] / gaps[2]), 1.8);
}

TEST(ImplicitOracle, Scheme2GapShrinksFasterThanFirstOrder) {
    const ModelParams params;
    const auto grid = SpatialGrid::uniform(0.0, 5.0, 32);
    SchemeConfig cfg;
    cfg.scheme = SchemeKind::imex_linearized;
    const auto resolved = resolve_config(cfg, params, grid);
    double gaps[3];
    for (int k = 0; k < 3; ++k) {
        const auto tg = TimeGrid::from_steps(1.0, 32 << k);
        const auto oracle = implicit_oracle(params, grid, tg, resolved);
        const auto run = solve_forward(params, grid, tg, cfg);
        gaps[k] = max_gap(oracle, run.final_state);
    }
    EXPECT_GT(std::log2(gaps[0] / gaps[2]) / 2.0, 1.8);
    EXPECT_GT(std::log2(gaps[1] / gaps[2]), 1.8);
}

}  // namespace
}  // namespace liqshock
