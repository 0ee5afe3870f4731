#include "liqshock/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "liqshock/error.hpp"

namespace liqshock {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& x) { return x ? format_number(*x) : std::string{}; }

void warn_restriction(const RunDiagnostics& diag, std::ostream& err) {
    if (diag.restriction_breaches > 0) {
        err << "warning: positivity restriction breached at " << diag.restriction_breaches
            << " level(s), first at step " << diag.first_breach_step << " (worst factor "
            << format_number(diag.worst_restriction_factor) << ")\n";
    }
}

StudySetup study_setup(const RunConfig& config) {
    StudySetup setup;
    setup.params = config.params;
    setup.scheme = build_scheme_config(config);
    setup.grid_kind = config.grid;
    setup.alpha = config.alpha;
    return setup;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
}

struct SolveOutput {
    std::string csv;
    std::string trajectory_csv;
    RunDiagnostics diagnostics;
};

SolveOutput run_solve(const RunConfig& config) {
    config.validate();
    const auto grid = build_grid(config);
    const auto tg = build_time_grid(config, grid);
    const auto dc = derive_constants(config.params);
    const auto run = solve_forward(config.params, grid, tg, build_scheme_config(config),
                                   RunOptions{config.capture_trajectory});
    const auto initial = initial_state(grid, config.params);

    const auto& p = config.params;
    const auto issue = to_prices(run.final_state.u, run.final_state.v, 0.0, p, dc);
    const auto maturity = to_prices(initial.u, initial.v, p.horizon, p, dc);

    SolveOutput out;
    out.diagnostics = run.diagnostics;
    std::ostringstream os;
    os << "S,p_at_t0,q_at_t0,p_at_T,q_at_T\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << format_number(grid[i]) << ',' << format_number(issue.p[i]) << ','
           << format_number(issue.q[i]) << ',' << format_number(maturity.p[i]) << ','
           << format_number(maturity.q[i]) << '\n';
    }
    out.csv = os.str();

    if (config.capture_trajectory) {
        std::ostringstream ts;
        ts << "step,tau,S,p,q\n";
        for (const auto& level : run.trajectory) {
            const double tau = tg.tau(level.step_index);
            const auto prices = to_prices(level.u, level.v, std::max(0.0, p.horizon - tau), p, dc);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                ts << level.step_index << ',' << format_number(tau) << ','
                   << format_number(grid[i]) << ',' << format_number(prices.p[i]) << ','
                   << format_number(prices.q[i]) << '\n';
            }
        }
        out.trajectory_csv = ts.str();
    }
    return out;
}

}  // namespace

std::string solution_csv(const RunConfig& config) { return run_solve(config).csv; }

std::string convergence_csv(const RunConfig& config, std::span<const int> levels) {
    config.validate();
    const auto setup = study_setup(config);
    const auto runs = run_levels(setup, levels);
    const auto probe_r0 = probe_r0_at_strike(config.params);
    const auto probe_r1 = probe_r1_at_strike(config.params);
    std::vector<double> r0;
    std::vector<double> r1;
    for (const auto& r : runs) {
        r0.push_back(probe_r0(r.grid, r.final_state));
        r1.push_back(probe_r1(r.grid, r.final_state));
    }
    const auto rows0 = tabulate_convergence(levels, r0);
    const auto rows1 = tabulate_convergence(levels, r1);

    std::ostringstream os;
    os << "I,value_R0,diff_R0,ratio_R0,order_R0,value_R1,diff_R1,ratio_R1,order_R1\n";
    for (std::size_t k = 0; k < rows0.size(); ++k) {
        os << rows0[k].intervals << ',' << format_number(rows0[k].value) << ','
           << cell(rows0[k].difference) << ',' << cell(rows0[k].ratio) << ','
           << cell(rows0[k].order) << ',' << format_number(rows1[k].value) << ','
           << cell(rows1[k].difference) << ',' << cell(rows1[k].ratio) << ','
           << cell(rows1[k].order) << '\n';
    }
    return os.str();
}

std::string extrapolation_csv(const RunConfig& config, std::span<const int> levels) {
    config.validate();
    const auto rows =
        extrapolated_study(study_setup(config), levels, probe_r0_at_strike(config.params));
    std::ostringstream os;
    os << "I,Z,W,Y,diff_Y,ratio,order\n";
    for (const auto& row : rows) {
        os << row.intervals << ',' << format_number(row.richardson.coarse_value) << ','
           << format_number(row.richardson.fine_value) << ','
           << format_number(row.richardson.extrapolated) << ',' << cell(row.difference) << ','
           << cell(row.ratio) << ',' << cell(row.order) << '\n';
    }
    return os.str();
}

void write_output(const std::string& path, const std::string& contents, std::ostream& fallback) {
    if (path.empty()) {
        fallback << contents;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file: " + path);
    out << contents;
    out.flush();
    if (!out) throw Error("failed writing output file: " + path);
}

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto result = run_solve(config);
        warn_restriction(result.diagnostics, err);
        write_output(config.output_path, result.csv, out);
        if (config.capture_trajectory && !config.output_path.empty()) {
            write_output(config.output_path + ".trajectory.csv", result.trajectory_csv, out);
        }
        return static_cast<int>(exit_ok);
    });
}

int cmd_converge(const RunConfig& config, std::span<const int> levels, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        write_output(config.output_path, convergence_csv(config, levels), out);
        return static_cast<int>(exit_ok);
    });
}

int cmd_extrapolate(const RunConfig& config, std::span<const int> levels, std::ostream& out,
                    std::ostream& err) {
    return guarded(err, [&] {
        write_output(config.output_path, extrapolation_csv(config, levels), out);
        return static_cast<int>(exit_ok);
    });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto grid = build_grid(config);
        const auto tg = build_time_grid(config, grid);
        const auto report = audit_run(config.params, grid, tg, build_scheme_config(config));
        for (const auto& check : report.checks) {
            out << (check.passed ? "PASS " : "FAIL ") << check.name
                << " worst=" << format_number(check.worst_violation);
            if (check.step >= 0) out << " step=" << check.step;
            if (check.node >= 0) out << " node=" << check.node;
            if (!check.note.empty()) out << " (" << check.note << ')';
            out << '\n';
        }
        out << (report.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
        return static_cast<int>(report.passed() ? exit_ok : exit_verification);
    });
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> levels;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ValidationError("invalid level '" + item + "'");
        }
        if (used != item.size()) throw ValidationError("invalid level '" + item + "'");
        levels.push_back(value);
    }
    validate_levels(levels);
    return levels;
}

}  // namespace liqshock
