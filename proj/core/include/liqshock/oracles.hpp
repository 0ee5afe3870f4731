#pragma once

#include "liqshock/mesh.hpp"
#include "liqshock/model.hpp"
#include "liqshock/schemes.hpp"

namespace liqshock {

struct OdeSolution {
    double u;
    double v;
};

/// For S-independent data the system reduces to
///   u' = b - a e^{u-v},  v' = c (1 - e^{v-u}),  u(0) = v(0) = gamma h*.
/// Integrated to tau = T with classical fourth-order Runge-Kutta.
OdeSolution ode_oracle(const ModelParams& params, double h_star, double dt_ref);
OdeSolution ode_oracle(const StepCoefficients& coeffs, double gamma, double horizon,
                       double h_star, double dt_ref);

/// Fully implicit (un-linearized) reaction, solved per level by damped Newton
/// iteration. Boundary u values follow the same rules as the steppers.
/// Intended for small instances (I <= 64, J <= 128).
GridState implicit_oracle(const ModelParams& params, const SpatialGrid& grid,
                          const TimeGrid& tg, const SchemeConfig& config);
GridState implicit_oracle(const ModelParams& params, const StepCoefficients& coeffs,
                          const SpatialGrid& grid, const TimeGrid& tg,
                          const SchemeConfig& config);

}  // namespace liqshock
