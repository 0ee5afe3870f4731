#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace liqshock {

enum class GridKind { uniform, tavella_randall };

/// Ordered price nodes S_0 < S_1 < ... < S_I with exact endpoints.
class SpatialGrid {
public:
    static SpatialGrid uniform(double s_min, double s_max, int intervals);

    /// sinh-stretched grid concentrating nodes around the strike:
    ///   S_i = K + alpha sinh(c2 i/I + c1 (1 - i/I)),
    ///   c1 = asinh((s_min - K)/alpha), c2 = asinh((s_max - K)/alpha).
    static SpatialGrid tavella_randall(double s_min, double s_max, double strike,
                                       double alpha, int intervals);

    GridKind kind() const noexcept { return kind_; }
    /// Stretch parameter; zero for uniform grids.
    double alpha() const noexcept { return alpha_; }

    std::span<const double> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    int intervals() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
    double operator[](std::size_t i) const noexcept { return nodes_[i]; }
    double front() const noexcept { return nodes_.front(); }
    double back() const noexcept { return nodes_.back(); }

    /// h_i = S_i - S_{i-1}, for 1 <= i <= I.
    double spacing(std::size_t i) const noexcept { return nodes_[i] - nodes_[i - 1]; }
    double min_spacing() const noexcept;

    /// Piecewise-linear interpolation of a grid function at price s.
    double interpolate(std::span<const double> values, double s) const;

private:
    SpatialGrid(std::vector<double> nodes, GridKind kind, double alpha);

    std::vector<double> nodes_;
    GridKind kind_;
    double alpha_;
};

/// Uniform partition of [0, T] in forward time tau = T - t.
struct TimeGrid {
    double dt = 0.0;
    int steps = 0;
    double horizon = 0.0;

    double tau(int j) const noexcept { return j == steps ? horizon : j * dt; }

    /// dt = horizon / steps.
    static TimeGrid from_steps(double horizon, int steps);
};

/// How the time step is derived from the spatial grid.
struct TimeStepRule {
    enum class Kind { half_min_spacing, explicit_step };
    Kind kind = Kind::half_min_spacing;
    double dt = 0.0;  ///< candidate step for explicit_step

    static TimeStepRule half_min_spacing() { return {}; }
    static TimeStepRule explicit_step(double dt) { return {Kind::explicit_step, dt}; }

    bool operator==(const TimeStepRule&) const = default;
};

/// Candidate step from the rule, then snapped so that J = ceil(T/dt) and
/// dt = T/J exactly.
TimeGrid time_grid_from_space(const SpatialGrid& grid, double horizon,
                              TimeStepRule rule);

}  // namespace liqshock
