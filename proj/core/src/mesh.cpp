#include "liqshock/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liqshock/error.hpp"

namespace liqshock {

SpatialGrid::SpatialGrid(std::vector<double> nodes, GridKind kind, double alpha)
    : nodes_(std::move(nodes)), kind_(kind), alpha_(alpha) {
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) {
            throw NumericalError("grid nodes are not strictly increasing");
        }
    }
}

SpatialGrid SpatialGrid::uniform(double s_min, double s_max, int intervals) {
    if (intervals < 2) {
        throw ValidationError("grid needs at least 2 intervals");
    }
    if (!(s_min < s_max)) {
        throw ValidationError("grid needs s_min < s_max");
    }
    std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
    const double width = s_max - s_min;
    for (int i = 0; i <= intervals; ++i) {
        nodes[i] = s_min + width * i / intervals;
    }
    nodes.back() = s_max;
    return SpatialGrid(std::move(nodes), GridKind::uniform, 0.0);
}

SpatialGrid SpatialGrid::tavella_randall(double s_min, double s_max, double strike,
                                         double alpha, int intervals) {
    if (intervals < 2) {
        throw ValidationError("grid needs at least 2 intervals");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("Tavella-Randall stretch alpha must be > 0");
    }
    if (!(s_min < strike && strike < s_max)) {
        throw ValidationError("Tavella-Randall grid needs s_min < strike < s_max");
    }
    const double c1 = std::asinh((s_min - strike) / alpha);
    const double c2 = std::asinh((s_max - strike) / alpha);

    std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) {
        const double x = static_cast<double>(i) / intervals;
        nodes[i] = strike + alpha * std::sinh(c2 * x + c1 * (1.0 - x));
    }
    nodes.front() = s_min;
    nodes.back() = s_max;
    return SpatialGrid(std::move(nodes), GridKind::tavella_randall, alpha);
}

double SpatialGrid::min_spacing() const noexcept {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        h = std::min(h, spacing(i));
    }
    return h;
}

double SpatialGrid::interpolate(std::span<const double> values, double s) const {
    if (values.size() != nodes_.size()) {
        throw ValidationError("interpolate: value count does not match node count");
    }
    if (s <= nodes_.front()) return values.front();
    if (s >= nodes_.back()) return values.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
    const auto hi = static_cast<std::size_t>(it - nodes_.begin());
    const std::size_t lo = hi - 1;
    if (nodes_[lo] == s) return values[lo];
    const double w = (s - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
    return (1.0 - w) * values[lo] + w * values[hi];
}

TimeGrid TimeGrid::from_steps(double horizon, int steps) {
    if (!(horizon > 0.0)) {
        throw ValidationError("time horizon must be > 0");
    }
    if (steps < 0) {
        throw ValidationError("number of time steps must be >= 0");
    }
    return {steps > 0 ? horizon / steps : horizon, steps, horizon};
}

TimeGrid time_grid_from_space(const SpatialGrid& grid, double horizon,
                              TimeStepRule rule) {
    if (!(horizon > 0.0)) {
        throw ValidationError("time horizon must be > 0");
    }
    double candidate = 0.0;
    switch (rule.kind) {
        case TimeStepRule::Kind::half_min_spacing:
            candidate = 0.5 * grid.min_spacing();
            break;
        case TimeStepRule::Kind::explicit_step:
            if (!(rule.dt > 0.0) || rule.dt > horizon) {
                throw ValidationError("explicit time step must satisfy 0 < dt <= T");
            }
            candidate = rule.dt;
            break;
    }
    // A ratio within rounding of an integer is that integer; otherwise round up
    // so the snapped step never exceeds the candidate.
    const double ratio = horizon / candidate;
    const double nearest = std::round(ratio);
    const double steps =
        std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio);
    if (steps > static_cast<double>(std::numeric_limits<int>::max())) {
        throw ValidationError("time step too small for the horizon");
    }
    return TimeGrid::from_steps(horizon, std::max(1, static_cast<int>(steps)));
}

}  // namespace liqshock
