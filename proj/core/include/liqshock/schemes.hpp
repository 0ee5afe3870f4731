#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "liqshock/mesh.hpp"
#include "liqshock/model.hpp"
#include "liqshock/tridiag.hpp"

namespace liqshock {

/// Discrete unknowns U^j, V^j on every node at time level j.
struct GridState {
    int step_index = 0;
    std::vector<double> u;
    std::vector<double> v;
};

enum class SchemeKind {
    imex_linear,      ///< implicit diffusion, explicit reaction
    imex_linearized,  ///< implicit diffusion, Taylor-linearized implicit reaction
};

/// Treatment of u at an end of the price domain.
struct BoundaryCondition {
    enum class Kind { dirichlet, natural_ode };
    Kind kind = Kind::natural_ode;
    std::function<double(double tau)> value;  ///< used when dirichlet

    static BoundaryCondition dirichlet(std::function<double(double)> value) {
        return {Kind::dirichlet, std::move(value)};
    }
    static BoundaryCondition dirichlet_constant(double value) {
        return dirichlet([value](double) { return value; });
    }
    static BoundaryCondition natural() { return {}; }
};

struct SupBounds {
    double c_u;
    double c_v;
};

/// Called after every tridiagonal solve with the system and its solution.
using SolveObserver =
    std::function<void(const TridiagonalSystem&, std::span<const double>)>;

struct SchemeConfig {
    SchemeKind scheme = SchemeKind::imex_linear;
    BoundaryCondition left = BoundaryCondition::natural();
    /// Unset means Dirichlet at gamma * h(s_max), constant in tau.
    std::optional<BoundaryCondition> right;
    /// Terminal payoff h(S); unset means the call max(S - K, 0).
    std::function<double(double)> payoff;
    bool enforce_positivity_restriction = false;
    /// Diagnostic only: runs record whether |U| or |V| ever exceeds these.
    std::optional<SupBounds> sup_bounds;
    SolveObserver on_solve;
};

/// Coefficients consumed by the steppers. Built from the model, or set by
/// hand for degenerate test modes (sigma = 0, reaction switched off).
struct StepCoefficients {
    double sigma = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    static StepCoefficients from(const ModelParams& params,
                                 const DerivedConstants& dc) {
        return {params.sigma, dc.a, dc.b, dc.c};
    }
};

/// Fills the defaults of `config` that depend on the model: payoff and the
/// right Dirichlet value gamma * h(s_max).
SchemeConfig resolve_config(SchemeConfig config, const ModelParams& params,
                            const SpatialGrid& grid);

/// U_i = V_i = gamma h(S_i).
GridState initial_state(const SpatialGrid& grid, const ModelParams& params,
                        const std::function<double(double)>& payoff = {});

/// Off-diagonal diffusion weights of the three-point second difference
///   2/(h_i + h_{i+1}) [(u_{i+1} - u_i)/h_{i+1} - (u_i - u_{i-1})/h_i]
/// scaled by sigma^2 S_i^2 / 2, for interior node i.
struct DiffusionWeights {
    double lower;
    double upper;
};
DiffusionWeights diffusion_weights(const SpatialGrid& grid, double sigma,
                                   std::size_t i);

/// Factors dt c e^{max(V-U)} and dt a e^{max(U-V)}; the discrete comparison
/// principle needs both <= 1.
struct RestrictionCheck {
    double c_factor = 0.0;
    double a_factor = 0.0;
    bool satisfied() const noexcept;
    double worst() const noexcept { return c_factor > a_factor ? c_factor : a_factor; }
};
RestrictionCheck positivity_restriction(const GridState& state, double dt,
                                        const StepCoefficients& coeffs);

/// Boundary value of u at level j+1 for node 0 (left) or node I (right).
double apply_left_boundary(const GridState& state, const SchemeConfig& config,
                           const StepCoefficients& coeffs, const TimeGrid& tg);
double apply_right_boundary(const GridState& state, const SchemeConfig& config,
                            const StepCoefficients& coeffs, const TimeGrid& tg);

TridiagonalSystem assemble_scheme1(const GridState& state, const SpatialGrid& grid,
                                   const TimeGrid& tg, const StepCoefficients& coeffs,
                                   const SchemeConfig& config);

GridState step_scheme1(const GridState& state, const SpatialGrid& grid,
                       const TimeGrid& tg, const StepCoefficients& coeffs,
                       const SchemeConfig& config);

/// Coupled per-node system of the linearized scheme
///   -A U_{i-1} + C U_i - B U_{i+1} + D V_i = F,   E U_i + K V_i = G,
/// with V eliminated into `reduced`. The per-node vectors span all nodes.
struct LinearizedSystem {
    TridiagonalSystem reduced;
    std::vector<double> c_hat;
    std::vector<double> d_hat;
    std::vector<double> f_hat;
    std::vector<double> e_hat;
    std::vector<double> k_hat;
    std::vector<double> g;

    /// V_i^{j+1} = (G_i - E_i U_i^{j+1}) / K_i.
    double recover_v(std::size_t i, double u_next) const {
        return (g[i] - e_hat[i] * u_next) / k_hat[i];
    }
};

LinearizedSystem assemble_scheme2(const GridState& state, const SpatialGrid& grid,
                                  const TimeGrid& tg, const StepCoefficients& coeffs,
                                  const SchemeConfig& config);

GridState step_scheme2(const GridState& state, const SpatialGrid& grid,
                       const TimeGrid& tg, const StepCoefficients& coeffs,
                       const SchemeConfig& config);

/// Dispatches on config.scheme.
GridState step(const GridState& state, const SpatialGrid& grid, const TimeGrid& tg,
               const StepCoefficients& coeffs, const SchemeConfig& config);

struct RunDiagnostics {
    int restriction_breaches = 0;   ///< levels at which the restriction failed
    int first_breach_step = -1;
    double worst_restriction_factor = 0.0;
    bool sup_bounds_exceeded = false;
};

struct RunResult {
    GridState final_state;
    std::vector<GridState> trajectory;  ///< all J+1 levels when captured
    RunDiagnostics diagnostics;
};

struct RunOptions {
    bool capture_trajectory = false;
};

/// Marches J steps from the initial state. Step failures are rethrown as
/// NumericalError carrying the failing step index.
RunResult solve_forward(const ModelParams& params, const SpatialGrid& grid,
                        const TimeGrid& tg, const SchemeConfig& config,
                        RunOptions options = {});

/// Same, with explicit coefficients (test modes).
RunResult solve_forward(const ModelParams& params, const StepCoefficients& coeffs,
                        const SpatialGrid& grid, const TimeGrid& tg,
                        const SchemeConfig& config, RunOptions options = {});

}  // namespace liqshock
