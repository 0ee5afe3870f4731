#include "liqshock/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "liqshock/error.hpp"

namespace liqshock {

OdeSolution ode_oracle(const ModelParams& params, double h_star, double dt_ref) {
    const auto dc = derive_constants(params);
    return ode_oracle(StepCoefficients::from(params, dc), params.gamma, params.horizon, h_star,
                      dt_ref);
}

OdeSolution ode_oracle(const StepCoefficients& coeffs, double gamma, double horizon,
                       double h_star, double dt_ref) {
    if (!(dt_ref > 0.0)) {
        throw ValidationError("ode_oracle: dt_ref must be > 0");
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt_ref - 1e-9)));
    const double dt = horizon / steps;

    auto rhs = [&](double u, double v) -> OdeSolution {
        return {coeffs.b - coeffs.a * std::exp(u - v), coeffs.c * (1.0 - std::exp(v - u))};
    };

    OdeSolution y{gamma * h_star, gamma * h_star};
    for (int n = 0; n < steps; ++n) {
        const auto k1 = rhs(y.u, y.v);
        const auto k2 = rhs(y.u + 0.5 * dt * k1.u, y.v + 0.5 * dt * k1.v);
        const auto k3 = rhs(y.u + 0.5 * dt * k2.u, y.v + 0.5 * dt * k2.v);
        const auto k4 = rhs(y.u + dt * k3.u, y.v + dt * k3.v);
        y.u += dt / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        y.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    }
    return y;
}

namespace {

// Dense Gaussian elimination with partial pivoting; solves m x = rhs in place.
void dense_solve(std::vector<double>& m, std::vector<double>& rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
        }
        if (m[pivot * n + col] == 0.0) {
            throw NumericalError("implicit oracle: singular Newton matrix");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[pivot * n + c]);
            std::swap(rhs[col], rhs[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r * n + col] / m[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double s = rhs[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= m[r * n + c] * rhs[c];
        rhs[r] = s / m[r * n + r];
    }
}

}  // namespace

GridState implicit_oracle(const ModelParams& params, const SpatialGrid& grid,
                          const TimeGrid& tg, const SchemeConfig& config) {
    const auto dc = derive_constants(params);
    return implicit_oracle(params, StepCoefficients::from(params, dc), grid, tg, config);
}

GridState implicit_oracle(const ModelParams& params, const StepCoefficients& coeffs,
                          const SpatialGrid& grid, const TimeGrid& tg,
                          const SchemeConfig& config) {
    constexpr int kMaxIterations = 100;
    constexpr double kTolerance = 1e-12;

    const SchemeConfig resolved = resolve_config(config, params, grid);
    const std::size_t nodes = grid.size();
    const std::size_t last = nodes - 1;
    const double dt = tg.dt;

    // Diffusion weights recomputed here from the nodes directly.
    std::vector<double> lower(nodes, 0.0);
    std::vector<double> upper(nodes, 0.0);
    for (std::size_t i = 1; i < last; ++i) {
        const double hl = grid[i] - grid[i - 1];
        const double hr = grid[i + 1] - grid[i];
        const double s2 = coeffs.sigma * coeffs.sigma * grid[i] * grid[i];
        lower[i] = s2 / (hl * (hl + hr));
        upper[i] = s2 / (hr * (hl + hr));
    }

    // Unknown layout: U_1..U_{I-1} then V_0..V_I.
    const std::size_t nu = nodes - 2;
    const std::size_t m = nu + nodes;
    auto u_at = [](std::size_t i) { return i - 1; };
    auto v_at = [nu](std::size_t i) { return nu + i; };

    GridState state = initial_state(grid, params, resolved.payoff);
    std::vector<double> jac(m * m);
    std::vector<double> res(m);

    for (int j = 0; j < tg.steps; ++j) {
        GridState next = state;
        next.step_index = state.step_index + 1;
        next.u.front() = apply_left_boundary(state, resolved, coeffs, tg);
        next.u.back() = apply_right_boundary(state, resolved, coeffs, tg);

        // Residuals multiplied through by dt.
        auto residual = [&](const GridState& x, std::vector<double>& r) {
            double norm = 0.0;
            for (std::size_t i = 1; i < last; ++i) {
                const double diff = lower[i] * (x.u[i] - x.u[i - 1]) +
                                    upper[i] * (x.u[i] - x.u[i + 1]);
                r[u_at(i)] = (x.u[i] - state.u[i]) +
                             dt * (diff + coeffs.a * std::exp(x.u[i] - x.v[i]) - coeffs.b);
                norm = std::max(norm, std::abs(r[u_at(i)]));
            }
            for (std::size_t i = 0; i < nodes; ++i) {
                r[v_at(i)] = (x.v[i] - state.v[i]) +
                             dt * coeffs.c * (std::exp(x.v[i] - x.u[i]) - 1.0);
                norm = std::max(norm, std::abs(r[v_at(i)]));
            }
            return norm;
        };

        double norm = residual(next, res);
        int iteration = 0;
        while (norm > kTolerance) {
            if (++iteration > kMaxIterations) {
                throw NumericalError("implicit oracle: Newton iteration did not converge",
                                     state.step_index);
            }
            std::fill(jac.begin(), jac.end(), 0.0);
            for (std::size_t i = 1; i < last; ++i) {
                const double w = dt * coeffs.a * std::exp(next.u[i] - next.v[i]);
                const std::size_t row = u_at(i);
                jac[row * m + u_at(i)] = 1.0 + dt * (lower[i] + upper[i]) + w;
                if (i > 1) jac[row * m + u_at(i - 1)] = -dt * lower[i];
                if (i + 1 < last) jac[row * m + u_at(i + 1)] = -dt * upper[i];
                jac[row * m + v_at(i)] = -w;
            }
            for (std::size_t i = 0; i < nodes; ++i) {
                const double z = dt * coeffs.c * std::exp(next.v[i] - next.u[i]);
                const std::size_t row = v_at(i);
                jac[row * m + v_at(i)] = 1.0 + z;
                if (i > 0 && i < last) jac[row * m + u_at(i)] = -z;
            }
            std::vector<double> delta(res.begin(), res.end());
            dense_solve(jac, delta, m);

            // Damped update: halve until the residual decreases.
            double step_length = 1.0;
            GridState trial = next;
            double trial_norm = norm;
            for (int halving = 0; halving < 40; ++halving) {
                for (std::size_t i = 1; i < last; ++i) {
                    trial.u[i] = next.u[i] - step_length * delta[u_at(i)];
                }
                for (std::size_t i = 0; i < nodes; ++i) {
                    trial.v[i] = next.v[i] - step_length * delta[v_at(i)];
                }
                trial_norm = residual(trial, res);
                if (trial_norm < norm) break;
                step_length *= 0.5;
            }
            if (!(trial_norm < norm)) {
                // Residual stalled at rounding level.
                if (norm <= 1e3 * kTolerance) break;
                throw NumericalError("implicit oracle: damped Newton stalled",
                                     state.step_index);
            }
            next = trial;
            norm = trial_norm;
        }
        state = std::move(next);
    }
    return state;
}

}  // namespace liqshock
