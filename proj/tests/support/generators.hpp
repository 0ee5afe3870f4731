#pragma once

#include <random>

#include "liqshock/model.hpp"

namespace liqshock::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random parameter set satisfying every ModelParams invariant.
inline ModelParams random_params(std::mt19937_64& rng) {
    ModelParams p;
    p.sigma = uniform(rng, 0.05, 1.0);
    p.mu = uniform(rng, -0.3, 0.3);
    p.gamma = uniform(rng, 0.1, 5.0);
    p.nu01 = uniform(rng, 0.1, 20.0);
    p.nu10 = uniform(rng, 0.1, 20.0);
    p.strike = uniform(rng, 1.0, 10.0);
    p.horizon = uniform(rng, 0.1, 5.0);
    p.s_min = uniform(rng, 0.0, 0.9) * p.strike;
    p.s_max = p.strike * uniform(rng, 1.1, 4.0);
    return p;
}

}  // namespace liqshock::testing
