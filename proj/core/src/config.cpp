#include "liqshock/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace liqshock {

void RunConfig::validate() const {
    params.validate();
    if (intervals < 2) throw ValidationError("intervals must be >= 2");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be > 0");
    if (tau_rule.kind == TimeStepRule::Kind::explicit_step &&
        (!(tau_rule.dt > 0.0) || tau_rule.dt > params.horizon)) {
        throw ValidationError("dt must satisfy 0 < dt <= horizon");
    }
}

namespace {

std::string describe(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid configuration";
    for (const auto& issue : issues) {
        os << "\n  line " << issue.line;
        if (!issue.key.empty()) os << " (" << issue.key << ")";
        os << ": " << issue.message;
    }
    return os.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int(std::string_view text, int& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_bool(std::string_view text, bool& out) {
    if (text == "true" || text == "1") {
        out = true;
        return true;
    }
    if (text == "false" || text == "0") {
        out = false;
        return true;
    }
    return false;
}

std::string format_exact(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Returns an error message, or empty on success.
using Setter = std::function<std::string(RunConfig&, std::string_view)>;

Setter real(double ModelParams::*field, std::function<bool(double)> ok, const char* rule) {
    return [=](RunConfig& c, std::string_view text) -> std::string {
        double x = 0.0;
        if (!parse_double(text, x)) return "expected a finite real number";
        if (ok && !ok(x)) return std::string("must satisfy ") + rule;
        c.params.*field = x;
        return {};
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"sigma", real(&ModelParams::sigma, [](double x) { return x > 0; }, "sigma > 0")},
        {"mu", real(&ModelParams::mu, nullptr, "")},
        {"gamma", real(&ModelParams::gamma, [](double x) { return x > 0; }, "gamma > 0")},
        {"nu01", real(&ModelParams::nu01, [](double x) { return x > 0; }, "nu01 > 0")},
        {"nu10", real(&ModelParams::nu10, [](double x) { return x > 0; }, "nu10 > 0")},
        {"strike", real(&ModelParams::strike, [](double x) { return x > 0; }, "strike > 0")},
        {"horizon", real(&ModelParams::horizon, [](double x) { return x > 0; }, "horizon > 0")},
        {"s_min", real(&ModelParams::s_min, [](double x) { return x >= 0; }, "s_min >= 0")},
        {"s_max", real(&ModelParams::s_max, [](double x) { return x > 0; }, "s_max > 0")},
        {"grid",
         [](RunConfig& c, std::string_view v) -> std::string {
             if (v == "uniform") c.grid = GridKind::uniform;
             else if (v == "tavella") c.grid = GridKind::tavella_randall;
             else return "expected uniform or tavella";
             return {};
         }},
        {"intervals",
         [](RunConfig& c, std::string_view v) -> std::string {
             int n = 0;
             if (!parse_int(v, n)) return "expected an integer";
             if (n < 2) return "must satisfy intervals >= 2";
             c.intervals = n;
             return {};
         }},
        {"alpha",
         [](RunConfig& c, std::string_view v) -> std::string {
             double x = 0.0;
             if (!parse_double(v, x)) return "expected a finite real number";
             if (!(x > 0)) return "must satisfy alpha > 0";
             c.alpha = x;
             return {};
         }},
        {"tau_rule",
         [](RunConfig& c, std::string_view v) -> std::string {
             if (v == "half_min_spacing") c.tau_rule.kind = TimeStepRule::Kind::half_min_spacing;
             else if (v == "explicit") c.tau_rule.kind = TimeStepRule::Kind::explicit_step;
             else return "expected half_min_spacing or explicit";
             return {};
         }},
        {"dt",
         [](RunConfig& c, std::string_view v) -> std::string {
             double x = 0.0;
             if (!parse_double(v, x)) return "expected a finite real number";
             if (!(x > 0)) return "must satisfy dt > 0";
             c.tau_rule.dt = x;
             return {};
         }},
        {"scheme",
         [](RunConfig& c, std::string_view v) -> std::string {
             if (v == "linear") c.scheme = SchemeKind::imex_linear;
             else if (v == "linearized") c.scheme = SchemeKind::imex_linearized;
             else return "expected linear or linearized";
             return {};
         }},
        {"left_bc",
         [](RunConfig& c, std::string_view v) -> std::string {
             if (v == "natural") c.left_bc = LeftBoundaryKind::natural;
             else if (v == "dirichlet") c.left_bc = LeftBoundaryKind::dirichlet;
             else return "expected natural or dirichlet";
             return {};
         }},
        {"capture_trajectory",
         [](RunConfig& c, std::string_view v) -> std::string {
             return parse_bool(v, c.capture_trajectory) ? "" : "expected true or false";
         }},
        {"enforce_positivity_restriction",
         [](RunConfig& c, std::string_view v) -> std::string {
             return parse_bool(v, c.enforce_positivity_restriction) ? ""
                                                                    : "expected true or false";
         }},
        {"output_path",
         [](RunConfig& c, std::string_view v) -> std::string {
             c.output_path = std::string(v);
             return {};
         }},
    };
    return table;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(describe(issues)), issues_(std::move(issues)) {}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::vector<ConfigIssue> issues;
    std::map<std::string, int, std::less<>> seen;

    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back({line_no, std::string(line), "expected key=value"});
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            issues.push_back({line_no, std::string(key), "unknown key"});
            continue;
        }
        if (auto [pos, fresh] = seen.emplace(std::string(key), line_no); !fresh) {
            issues.push_back({line_no, std::string(key),
                              "duplicate key (first set on line " +
                                  std::to_string(pos->second) + ")"});
            continue;
        }
        if (auto message = it->second(config, value); !message.empty()) {
            issues.push_back({line_no, std::string(key), message});
        }
    }

    const auto line_of = [&](const char* key) {
        const auto it = seen.find(key);
        return it == seen.end() ? 0 : it->second;
    };
    if (seen.contains("dt") && config.tau_rule.kind != TimeStepRule::Kind::explicit_step) {
        issues.push_back({line_of("dt"), "dt", "dt requires tau_rule=explicit"});
    }
    if (config.tau_rule.kind == TimeStepRule::Kind::explicit_step && !seen.contains("dt")) {
        issues.push_back({line_of("tau_rule"), "tau_rule", "tau_rule=explicit requires dt"});
    }

    if (issues.empty()) {
        try {
            config.validate();
        } catch (const ValidationError& e) {
            const std::string what = e.what();
            const auto space = what.find(' ');
            const std::string key = what.substr(0, space);
            const int line = line_of(key.c_str());
            issues.push_back({line, seen.contains(key) ? key : std::string{}, what});
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return config;
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream os;
    const auto& p = c.params;
    os << "sigma=" << format_exact(p.sigma) << '\n'
       << "mu=" << format_exact(p.mu) << '\n'
       << "gamma=" << format_exact(p.gamma) << '\n'
       << "nu01=" << format_exact(p.nu01) << '\n'
       << "nu10=" << format_exact(p.nu10) << '\n'
       << "strike=" << format_exact(p.strike) << '\n'
       << "horizon=" << format_exact(p.horizon) << '\n'
       << "s_min=" << format_exact(p.s_min) << '\n'
       << "s_max=" << format_exact(p.s_max) << '\n'
       << "grid=" << to_string(c.grid) << '\n'
       << "intervals=" << c.intervals << '\n'
       << "alpha=" << format_exact(c.alpha) << '\n';
    if (c.tau_rule.kind == TimeStepRule::Kind::explicit_step) {
        os << "tau_rule=explicit\n"
           << "dt=" << format_exact(c.tau_rule.dt) << '\n';
    } else {
        os << "tau_rule=half_min_spacing\n";
    }
    os << "scheme=" << to_string(c.scheme) << '\n'
       << "left_bc=" << to_string(c.left_bc) << '\n'
       << "capture_trajectory=" << (c.capture_trajectory ? "true" : "false") << '\n'
       << "enforce_positivity_restriction="
       << (c.enforce_positivity_restriction ? "true" : "false") << '\n';
    if (!c.output_path.empty()) os << "output_path=" << c.output_path << '\n';
    return os.str();
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SpatialGrid build_grid(const RunConfig& config) {
    const auto& p = config.params;
    if (config.grid == GridKind::tavella_randall) {
        return SpatialGrid::tavella_randall(p.s_min, p.s_max, p.strike, config.alpha,
                                            config.intervals);
    }
    return SpatialGrid::uniform(p.s_min, p.s_max, config.intervals);
}

TimeGrid build_time_grid(const RunConfig& config, const SpatialGrid& grid) {
    return time_grid_from_space(grid, config.params.horizon, config.tau_rule);
}

SchemeConfig build_scheme_config(const RunConfig& config) {
    SchemeConfig sc;
    sc.scheme = config.scheme;
    sc.left = config.left_bc == LeftBoundaryKind::dirichlet
                  ? BoundaryCondition::dirichlet_constant(0.0)
                  : BoundaryCondition::natural();
    sc.enforce_positivity_restriction = config.enforce_positivity_restriction;
    return sc;
}

std::string_view to_string(GridKind kind) {
    return kind == GridKind::uniform ? "uniform" : "tavella";
}

std::string_view to_string(SchemeKind kind) {
    return kind == SchemeKind::imex_linear ? "linear" : "linearized";
}

std::string_view to_string(LeftBoundaryKind kind) {
    return kind == LeftBoundaryKind::natural ? "natural" : "dirichlet";
}

}  // namespace liqshock
