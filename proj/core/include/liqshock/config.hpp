#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "liqshock/error.hpp"
#include "liqshock/mesh.hpp"
#include "liqshock/model.hpp"
#include "liqshock/schemes.hpp"

namespace liqshock {

enum class LeftBoundaryKind { natural, dirichlet };

/// Everything one CLI invocation needs. Defaults reproduce the reference
/// table setup.
struct RunConfig {
    ModelParams params;
    GridKind grid = GridKind::uniform;
    int intervals = 240;
    double alpha = 15.0;
    TimeStepRule tau_rule = TimeStepRule::half_min_spacing();
    SchemeKind scheme = SchemeKind::imex_linear;
    LeftBoundaryKind left_bc = LeftBoundaryKind::natural;
    bool capture_trajectory = false;
    bool enforce_positivity_restriction = false;
    std::string output_path;

    /// Throws ValidationError on any invariant breach.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

struct ConfigIssue {
    int line = 0;
    std::string key;
    std::string message;
};

/// Parse failure listing every malformed entry.
class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Line-oriented `key=value`; `#` starts a comment; keys are case-sensitive.
/// Missing keys keep their defaults, unknown keys are rejected.
RunConfig parse_config(std::string_view text);

/// Normalized text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

RunConfig load_config(const std::string& path);

SpatialGrid build_grid(const RunConfig& config);
TimeGrid build_time_grid(const RunConfig& config, const SpatialGrid& grid);
SchemeConfig build_scheme_config(const RunConfig& config);

std::string_view to_string(GridKind kind);
std::string_view to_string(SchemeKind kind);
std::string_view to_string(LeftBoundaryKind kind);

}  // namespace liqshock
