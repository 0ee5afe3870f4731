#include "liqshock/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "liqshock/error.hpp"

namespace liqshock {

namespace {

// Slack on the restriction so that dt c = 1 exactly (e.g. dt = 1/12, c = 12)
// is not flagged because of rounding in dt.
constexpr double kRestrictionSlack = 1e-12;

void check_state(const GridState& state, const SpatialGrid& grid) {
    if (state.u.size() != grid.size() || state.v.size() != grid.size()) {
        throw ValidationError("grid state length does not match the grid");
    }
}

void enforce_restriction(const GridState& state, const TimeGrid& tg,
                         const StepCoefficients& coeffs, const SchemeConfig& config) {
    if (!config.enforce_positivity_restriction) return;
    const auto check = positivity_restriction(state, tg.dt, coeffs);
    if (!check.satisfied()) {
        std::ostringstream msg;
        msg << "positivity restriction violated: dt c e^{max(V-U)} = " << check.c_factor
            << ", dt a e^{max(U-V)} = " << check.a_factor;
        throw RestrictionViolation(msg.str(), state.step_index);
    }
}

double boundary_value(const BoundaryCondition& bc, std::size_t node, const GridState& state,
                      const StepCoefficients& coeffs, const TimeGrid& tg) {
    switch (bc.kind) {
        case BoundaryCondition::Kind::dirichlet:
            if (!bc.value) throw ValidationError("dirichlet boundary without a value function");
            return bc.value(tg.tau(state.step_index + 1));
        case BoundaryCondition::Kind::natural_ode: {
            const double u = state.u[node];
            const double v = state.v[node];
            return u - tg.dt * (coeffs.a * std::exp(u - v) - coeffs.b);
        }
    }
    return 0.0;
}

void notify(const SchemeConfig& config, const TridiagonalSystem& sys,
            std::span<const double> y) {
    if (config.on_solve) config.on_solve(sys, y);
}

}  // namespace

SchemeConfig resolve_config(SchemeConfig config, const ModelParams& params,
                            const SpatialGrid& grid) {
    if (!config.payoff) {
        const double strike = params.strike;
        config.payoff = [strike](double s) { return payoff_call(s, strike); };
    }
    if (!config.right) {
        config.right = BoundaryCondition::dirichlet_constant(params.gamma *
                                                             config.payoff(grid.back()));
    }
    return config;
}

GridState initial_state(const SpatialGrid& grid, const ModelParams& params,
                        const std::function<double(double)>& payoff) {
    GridState state;
    state.u.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double h = payoff ? payoff(grid[i]) : payoff_call(grid[i], params.strike);
        state.u[i] = params.gamma * h;
    }
    state.v = state.u;
    return state;
}

DiffusionWeights diffusion_weights(const SpatialGrid& grid, double sigma, std::size_t i) {
    const double h_left = grid.spacing(i);
    const double h_right = grid.spacing(i + 1);
    const double coef = sigma * sigma * grid[i] * grid[i];
    return {coef / (h_left * (h_left + h_right)), coef / (h_right * (h_left + h_right))};
}

bool RestrictionCheck::satisfied() const noexcept {
    return c_factor <= 1.0 + kRestrictionSlack && a_factor <= 1.0 + kRestrictionSlack;
}

RestrictionCheck positivity_restriction(const GridState& state, double dt,
                                        const StepCoefficients& coeffs) {
    double max_vu = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        max_vu = std::max(max_vu, state.v[i] - state.u[i]);
    }
    double max_uv = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        max_uv = std::max(max_uv, state.u[i] - state.v[i]);
    }
    return {dt * coeffs.c * std::exp(max_vu), dt * coeffs.a * std::exp(max_uv)};
}

double apply_left_boundary(const GridState& state, const SchemeConfig& config,
                           const StepCoefficients& coeffs, const TimeGrid& tg) {
    return boundary_value(config.left, 0, state, coeffs, tg);
}

double apply_right_boundary(const GridState& state, const SchemeConfig& config,
                            const StepCoefficients& coeffs, const TimeGrid& tg) {
    if (!config.right) {
        throw ValidationError("right boundary unset; call resolve_config first");
    }
    return boundary_value(*config.right, state.u.size() - 1, state, coeffs, tg);
}

TridiagonalSystem assemble_scheme1(const GridState& state, const SpatialGrid& grid,
                                   const TimeGrid& tg, const StepCoefficients& coeffs,
                                   const SchemeConfig& config) {
    check_state(state, grid);
    const std::size_t n = grid.size() - 2;
    const double inv_dt = 1.0 / tg.dt;

    TridiagonalSystem sys(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = k + 1;
        const auto w = diffusion_weights(grid, coeffs.sigma, i);
        sys.lower[k] = w.lower;
        sys.upper[k] = w.upper;
        sys.diag[k] = inv_dt + w.lower + w.upper;
        sys.rhs[k] = state.u[i] * inv_dt - coeffs.a * std::exp(state.u[i] - state.v[i]) + coeffs.b;
    }
    sys.left_value = apply_left_boundary(state, config, coeffs, tg);
    sys.right_value = apply_right_boundary(state, config, coeffs, tg);
    return sys;
}

GridState step_scheme1(const GridState& state, const SpatialGrid& grid, const TimeGrid& tg,
                       const StepCoefficients& coeffs, const SchemeConfig& config) {
    enforce_restriction(state, tg, coeffs, config);
    const auto sys = assemble_scheme1(state, grid, tg, coeffs, config);

    GridState next;
    next.step_index = state.step_index + 1;
    next.u = solve(sys);
    notify(config, sys, next.u);

    next.v.resize(state.v.size());
    for (std::size_t i = 0; i < state.v.size(); ++i) {
        next.v[i] = state.v[i] - tg.dt * coeffs.c * (std::exp(state.v[i] - state.u[i]) - 1.0);
    }
    return next;
}

LinearizedSystem assemble_scheme2(const GridState& state, const SpatialGrid& grid,
                                  const TimeGrid& tg, const StepCoefficients& coeffs,
                                  const SchemeConfig& config) {
    check_state(state, grid);
    const std::size_t nodes = grid.size();
    const double inv_dt = 1.0 / tg.dt;

    LinearizedSystem out;
    out.c_hat.resize(nodes);
    out.d_hat.resize(nodes);
    out.f_hat.resize(nodes);
    out.e_hat.resize(nodes);
    out.k_hat.resize(nodes);
    out.g.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double du = state.u[i] - state.v[i];
        const double w = coeffs.a * std::exp(du);
        const double z = coeffs.c * std::exp(-du);
        out.c_hat[i] = inv_dt + w;  // diffusion added below for interior nodes
        out.d_hat[i] = -w;
        out.f_hat[i] = state.u[i] * inv_dt - w * (1.0 - du) + coeffs.b;
        out.e_hat[i] = -z;
        out.k_hat[i] = inv_dt + z;
        out.g[i] = state.v[i] * inv_dt - z * (1.0 + du) + coeffs.c;
    }

    const std::size_t n = nodes - 2;
    out.reduced = TridiagonalSystem(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = k + 1;
        const auto w = diffusion_weights(grid, coeffs.sigma, i);
        out.c_hat[i] += w.lower + w.upper;
        out.reduced.lower[k] = w.lower;
        out.reduced.upper[k] = w.upper;
        out.reduced.diag[k] = out.c_hat[i] - out.d_hat[i] * out.e_hat[i] / out.k_hat[i];
        out.reduced.rhs[k] = out.f_hat[i] - out.d_hat[i] / out.k_hat[i] * out.g[i];
    }
    out.reduced.left_value = apply_left_boundary(state, config, coeffs, tg);
    out.reduced.right_value = apply_right_boundary(state, config, coeffs, tg);
    return out;
}

GridState step_scheme2(const GridState& state, const SpatialGrid& grid, const TimeGrid& tg,
                       const StepCoefficients& coeffs, const SchemeConfig& config) {
    enforce_restriction(state, tg, coeffs, config);
    const auto system = assemble_scheme2(state, grid, tg, coeffs, config);

    GridState next;
    next.step_index = state.step_index + 1;
    next.u = solve(system.reduced);
    notify(config, system.reduced, next.u);

    next.v.resize(next.u.size());
    for (std::size_t i = 0; i < next.u.size(); ++i) {
        next.v[i] = system.recover_v(i, next.u[i]);
    }
    return next;
}

GridState step(const GridState& state, const SpatialGrid& grid, const TimeGrid& tg,
               const StepCoefficients& coeffs, const SchemeConfig& config) {
    switch (config.scheme) {
        case SchemeKind::imex_linear:
            return step_scheme1(state, grid, tg, coeffs, config);
        case SchemeKind::imex_linearized:
            return step_scheme2(state, grid, tg, coeffs, config);
    }
    throw ValidationError("unknown scheme");
}

RunResult solve_forward(const ModelParams& params, const SpatialGrid& grid,
                        const TimeGrid& tg, const SchemeConfig& config, RunOptions options) {
    const auto dc = derive_constants(params);
    return solve_forward(params, StepCoefficients::from(params, dc), grid, tg, config,
                         options);
}

RunResult solve_forward(const ModelParams& params, const StepCoefficients& coeffs,
                        const SpatialGrid& grid, const TimeGrid& tg,
                        const SchemeConfig& config, RunOptions options) {
    const SchemeConfig resolved = resolve_config(config, params, grid);

    RunResult result;
    GridState state = initial_state(grid, params, resolved.payoff);
    if (options.capture_trajectory) {
        result.trajectory.reserve(static_cast<std::size_t>(tg.steps) + 1);
        result.trajectory.push_back(state);
    }

    auto& diag = result.diagnostics;
    auto track_bounds = [&](const GridState& s) {
        if (!resolved.sup_bounds) return;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            if (std::abs(s.u[i]) > resolved.sup_bounds->c_u ||
                std::abs(s.v[i]) > resolved.sup_bounds->c_v) {
                diag.sup_bounds_exceeded = true;
                return;
            }
        }
    };
    track_bounds(state);

    for (int j = 0; j < tg.steps; ++j) {
        const auto check = positivity_restriction(state, tg.dt, coeffs);
        diag.worst_restriction_factor = std::max(diag.worst_restriction_factor, check.worst());
        if (!check.satisfied()) {
            ++diag.restriction_breaches;
            if (diag.first_breach_step < 0) diag.first_breach_step = j;
        }

        try {
            state = step(state, grid, tg, coeffs, resolved);
        } catch (const RestrictionViolation&) {
            throw;
        } catch (const NumericalError& e) {
            throw NumericalError(e.what(), j);
        }
        for (std::size_t i = 0; i < state.u.size(); ++i) {
            if (!std::isfinite(state.u[i]) || !std::isfinite(state.v[i])) {
                throw NumericalError("non-finite value at node " + std::to_string(i), j);
            }
        }
        track_bounds(state);
        if (options.capture_trajectory) result.trajectory.push_back(state);
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace liqshock
