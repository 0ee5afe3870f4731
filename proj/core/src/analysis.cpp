#include "liqshock/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <sstream>

#include "liqshock/error.hpp"

namespace liqshock {

double richardson(double z, double w, int p) {
    if (p < 1) {
        throw ValidationError("Richardson order p must be >= 1");
    }
    const double scale = std::ldexp(1.0, p);
    return (scale * w - z) / (scale - 1.0);
}

namespace {

struct Columns {
    std::optional<double> difference;
    std::optional<double> ratio;
    std::optional<double> order;
};

std::vector<Columns> successive_columns(std::span<const double> values) {
    std::vector<Columns> cols(values.size());
    for (std::size_t k = 1; k < values.size(); ++k) {
        cols[k].difference = std::abs(values[k] - values[k - 1]);
        if (k >= 2 && *cols[k].difference > 0.0 && *cols[k - 1].difference > 0.0) {
            cols[k].ratio = *cols[k - 1].difference / *cols[k].difference;
            cols[k].order = std::log2(*cols[k].ratio);
        }
    }
    return cols;
}

}  // namespace

std::vector<ConvergenceRow> tabulate_convergence(std::span<const int> levels,
                                                 std::span<const double> values) {
    if (levels.size() != values.size()) {
        throw ValidationError("tabulate_convergence: levels and values differ in length");
    }
    const auto cols = successive_columns(values);
    std::vector<ConvergenceRow> rows(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        rows[k] = {levels[k], values[k], cols[k].difference, cols[k].ratio, cols[k].order};
    }
    return rows;
}

std::vector<ExtrapolatedRow> tabulate_extrapolation(std::span<const int> levels,
                                                    std::span<const double> coarse,
                                                    std::span<const double> fine, int p) {
    if (levels.size() != coarse.size() || levels.size() != fine.size()) {
        throw ValidationError("tabulate_extrapolation: column lengths differ");
    }
    std::vector<double> extrapolated(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        extrapolated[k] = richardson(coarse[k], fine[k], p);
    }
    const auto cols = successive_columns(extrapolated);
    std::vector<ExtrapolatedRow> rows(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        rows[k].intervals = levels[k];
        rows[k].richardson = {coarse[k], fine[k], extrapolated[k], p};
        rows[k].difference = cols[k].difference;
        rows[k].ratio = cols[k].ratio;
        rows[k].order = cols[k].order;
    }
    return rows;
}

Probe probe_r0_at_strike(const ModelParams& params) {
    return [strike = params.strike, gamma = params.gamma](const SpatialGrid& grid,
                                                          const GridState& state) {
        return grid.interpolate(state.u, strike) / gamma;
    };
}

Probe probe_r1_at_strike(const ModelParams& params) {
    return [strike = params.strike, gamma = params.gamma](const SpatialGrid& grid,
                                                          const GridState& state) {
        return grid.interpolate(state.v, strike) / gamma;
    };
}

SpatialGrid make_grid(const StudySetup& setup, int intervals) {
    const auto& p = setup.params;
    switch (setup.grid_kind) {
        case GridKind::uniform:
            return SpatialGrid::uniform(p.s_min, p.s_max, intervals);
        case GridKind::tavella_randall:
            return SpatialGrid::tavella_randall(p.s_min, p.s_max, p.strike, setup.alpha,
                                                intervals);
    }
    throw ValidationError("unknown grid kind");
}

void validate_levels(std::span<const int> levels) {
    if (levels.empty()) {
        throw ValidationError("at least one level is required");
    }
    if (levels.front() < 2) {
        throw ValidationError("levels must be >= 2 intervals");
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (levels[k] != 2 * levels[k - 1]) {
            throw ValidationError("each level must double the previous one");
        }
    }
}

std::vector<LevelRun> run_levels(const StudySetup& setup, std::span<const int> levels,
                                 int time_refinement) {
    validate_levels(levels);
    if (time_refinement < 1) {
        throw ValidationError("time refinement must be >= 1");
    }
    const auto dc = derive_constants(setup.params);
    const auto coeffs = StepCoefficients::from(setup.params, dc);

    auto run_one = [&](int intervals) {
        LevelRun level{intervals, make_grid(setup, intervals), {}, {}, {}};
        const auto base = time_grid_from_space(level.grid, setup.params.horizon,
                                               TimeStepRule::half_min_spacing());
        level.time = TimeGrid::from_steps(setup.params.horizon, base.steps * time_refinement);
        auto run = solve_forward(setup.params, coeffs, level.grid, level.time, setup.scheme);
        level.final_state = std::move(run.final_state);
        level.diagnostics = run.diagnostics;
        return level;
    };

    std::vector<std::future<LevelRun>> pending;
    pending.reserve(levels.size());
    for (int intervals : levels) {
        pending.push_back(std::async(std::launch::async, run_one, intervals));
    }
    std::vector<LevelRun> out;
    out.reserve(levels.size());
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

std::vector<ConvergenceRow> convergence_study(const StudySetup& setup,
                                              std::span<const int> levels,
                                              const Probe& probe) {
    const auto runs = run_levels(setup, levels);
    std::vector<double> values;
    values.reserve(runs.size());
    for (const auto& r : runs) values.push_back(probe(r.grid, r.final_state));
    return tabulate_convergence(levels, values);
}

std::vector<ExtrapolatedRow> extrapolated_study(const StudySetup& setup,
                                                std::span<const int> levels,
                                                const Probe& probe, int p) {
    const auto coarse_runs = run_levels(setup, levels, 1);
    const auto fine_runs = run_levels(setup, levels, 2);
    std::vector<double> coarse;
    std::vector<double> fine;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        coarse.push_back(probe(coarse_runs[k].grid, coarse_runs[k].final_state));
        fine.push_back(probe(fine_runs[k].grid, fine_runs[k].final_state));
    }
    return tabulate_extrapolation(levels, coarse, fine, p);
}

// Audits -------------------------------------------------------------------

bool AuditReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

const CheckResult* AuditReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

const std::vector<GridState>& levels_of(const RunResult& run) {
    if (run.trajectory.empty()) {
        throw ValidationError("audit needs a captured trajectory");
    }
    return run.trajectory;
}

void require_matching(const RunResult& x, const RunResult& y) {
    const auto& a = levels_of(x);
    const auto& b = levels_of(y);
    if (a.size() != b.size() || a.front().u.size() != b.front().u.size()) {
        throw ValidationError("audited runs do not share grid and time partition");
    }
}

void record(CheckResult& out, double violation, int step, int node) {
    if (violation > out.worst_violation) {
        out.worst_violation = violation;
        out.step = step;
        out.node = node;
    }
}

std::string restriction_note(const RunResult& run) {
    if (run.diagnostics.restriction_breaches == 0) return {};
    std::ostringstream os;
    os << "positivity restriction breached at " << run.diagnostics.restriction_breaches
       << " level(s), first at step " << run.diagnostics.first_breach_step
       << ", worst factor " << run.diagnostics.worst_restriction_factor;
    return os.str();
}

}  // namespace

CheckResult audit_positivity(const RunResult& run, const TimeGrid& tg,
                             const ModelParams& params, double tolerance) {
    const auto dc = derive_constants(params);
    CheckResult out;
    out.name = "positivity";
    const auto& levels = levels_of(run);
    for (const auto& state : levels) {
        // Level j sits at forward time tau_j, calendar time t = T - tau_j.
        const double t = params.horizon - tg.tau(state.step_index);
        const auto prices = to_prices(state.u, state.v, std::max(t, 0.0), params, dc);
        for (std::size_t i = 0; i < prices.p.size(); ++i) {
            record(out, -std::min(prices.p[i], prices.q[i]), state.step_index,
                   static_cast<int>(i));
        }
    }
    out.passed = out.worst_violation <= tolerance;
    if (out.worst_violation < 0.0) out.worst_violation = 0.0;
    out.note = restriction_note(run);
    return out;
}

CheckResult audit_comparison(const RunResult& upper, const RunResult& lower,
                             double tolerance) {
    require_matching(upper, lower);
    CheckResult out;
    out.name = "comparison";
    const auto& hi = levels_of(upper);
    const auto& lo = levels_of(lower);
    for (std::size_t j = 0; j < hi.size(); ++j) {
        for (std::size_t i = 0; i < hi[j].u.size(); ++i) {
            const double gap = std::max(lo[j].u[i] - hi[j].u[i], lo[j].v[i] - hi[j].v[i]);
            record(out, gap, static_cast<int>(j), static_cast<int>(i));
        }
    }
    out.passed = out.worst_violation <= tolerance;
    auto note = restriction_note(upper);
    if (note.empty()) note = restriction_note(lower);
    out.note = note;
    return out;
}

CheckResult audit_translation(const RunResult& shifted, const RunResult& base, double delta,
                              double tolerance) {
    require_matching(shifted, base);
    CheckResult out;
    out.name = "translation";
    const auto& s = levels_of(shifted);
    const auto& b = levels_of(base);
    for (std::size_t j = 0; j < s.size(); ++j) {
        for (std::size_t i = 0; i < s[j].u.size(); ++i) {
            const double err = std::max(std::abs(s[j].u[i] - b[j].u[i] - delta),
                                        std::abs(s[j].v[i] - b[j].v[i] - delta));
            record(out, err, static_cast<int>(j), static_cast<int>(i));
        }
    }
    out.passed = out.worst_violation <= tolerance;
    return out;
}

CheckResult audit_restriction(const RunResult& run, bool enforced) {
    CheckResult out;
    out.name = "restriction";
    out.passed = !enforced || run.diagnostics.restriction_breaches == 0;
    out.worst_violation = std::max(0.0, run.diagnostics.worst_restriction_factor - 1.0);
    out.step = run.diagnostics.first_breach_step;
    out.note = restriction_note(run);
    return out;
}

struct SolveAuditor::State {
    mutable std::mutex mutex;
    long solves = 0;
    long m_matrix_failures = 0;
    double worst_min_d = std::numeric_limits<double>::infinity();
    long bound_failures = 0;
    double worst_bound_excess = 0.0;
};

SolveAuditor::SolveAuditor() : state_(std::make_shared<State>()) {}

SolveObserver SolveAuditor::observer() {
    return [state = state_](const TridiagonalSystem& sys, std::span<const double> y) {
        const auto report = check_m_matrix(sys);
        bool bound_ok = true;
        double excess = 0.0;
        try {
            const double bound = stability_bound(sys);
            double norm = 0.0;
            for (double x : y) norm = std::max(norm, std::abs(x));
            excess = norm - bound;
            bound_ok = norm <= bound * (1.0 + 1e-12) + 1e-300;
        } catch (const NumericalError&) {
            bound_ok = false;
            excess = std::numeric_limits<double>::infinity();
        }
        std::lock_guard lock(state->mutex);
        ++state->solves;
        if (!report.satisfied) ++state->m_matrix_failures;
        state->worst_min_d = std::min(state->worst_min_d, report.min_d);
        if (!bound_ok) {
            ++state->bound_failures;
            state->worst_bound_excess = std::max(state->worst_bound_excess, excess);
        }
    };
}

SchemeConfig SolveAuditor::attach(SchemeConfig config) {
    auto mine = observer();
    if (config.on_solve) {
        config.on_solve = [mine, theirs = config.on_solve](const TridiagonalSystem& sys,
                                                           std::span<const double> y) {
            mine(sys, y);
            theirs(sys, y);
        };
    } else {
        config.on_solve = std::move(mine);
    }
    return config;
}

CheckResult SolveAuditor::m_matrix_result() const {
    std::lock_guard lock(state_->mutex);
    CheckResult out;
    out.name = "m_matrix";
    out.passed = state_->m_matrix_failures == 0;
    out.worst_violation = state_->worst_min_d < 0.0 ? -state_->worst_min_d : 0.0;
    std::ostringstream os;
    os << state_->solves << " solves, " << state_->m_matrix_failures
       << " failing, min D = " << state_->worst_min_d;
    out.note = os.str();
    return out;
}

CheckResult SolveAuditor::bound_result() const {
    std::lock_guard lock(state_->mutex);
    CheckResult out;
    out.name = "a_priori_bound";
    out.passed = state_->bound_failures == 0;
    out.worst_violation = state_->worst_bound_excess;
    std::ostringstream os;
    os << state_->solves << " solves, " << state_->bound_failures << " exceeding the bound";
    out.note = os.str();
    return out;
}

long SolveAuditor::solves() const {
    std::lock_guard lock(state_->mutex);
    return state_->solves;
}

AuditReport audit_run(const ModelParams& params, const SpatialGrid& grid, const TimeGrid& tg,
                      const SchemeConfig& config) {
    constexpr double kShift = 0.1;
    SolveAuditor auditor;
    // Runs never abort on the restriction; the restriction check reports it.
    SchemeConfig base = auditor.attach(resolve_config(config, params, grid));
    base.enforce_positivity_restriction = false;
    const RunOptions capture{true};

    const auto run = solve_forward(params, grid, tg, base, capture);

    // Every datum lifted by kShift: payoff and both boundary functions.
    SchemeConfig lifted = base;
    lifted.payoff = [h = base.payoff](double s) { return h(s) + kShift; };
    const double lift = params.gamma * kShift;
    auto lift_bc = [lift](BoundaryCondition bc) {
        if (bc.kind == BoundaryCondition::Kind::dirichlet) {
            bc.value = [f = bc.value, lift](double tau) { return f(tau) + lift; };
        }
        return bc;
    };
    lifted.left = lift_bc(base.left);
    lifted.right = lift_bc(*base.right);
    const auto run_lifted = solve_forward(params, grid, tg, lifted, capture);

    // Zero payoff below the call payoff, with matching zero boundary data.
    SchemeConfig zero = base;
    zero.payoff = [](double) { return 0.0; };
    zero.right = BoundaryCondition::dirichlet_constant(0.0);
    if (zero.left.kind == BoundaryCondition::Kind::dirichlet) {
        zero.left = BoundaryCondition::dirichlet_constant(0.0);
    }
    const auto run_zero = solve_forward(params, grid, tg, zero, capture);

    AuditReport report;
    report.checks.push_back(audit_positivity(run, tg, params));

    auto shifted = audit_comparison(run_lifted, run, 1e-12);
    shifted.name = "comparison_shift";
    report.checks.push_back(shifted);

    auto ordered = audit_comparison(run, run_zero, 1e-12);
    ordered.name = "comparison_call_vs_zero";
    report.checks.push_back(ordered);

    report.checks.push_back(audit_translation(run_lifted, run, lift, 1e-12));
    report.checks.push_back(auditor.m_matrix_result());
    report.checks.push_back(auditor.bound_result());
    report.checks.push_back(audit_restriction(run, config.enforce_positivity_restriction));
    return report;
}

}  // namespace liqshock
