#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liqshock/mesh.hpp"
#include "liqshock/model.hpp"
#include "liqshock/schemes.hpp"

namespace liqshock {

/// (2^p w - z) / (2^p - 1), where w used half the time step of z.
double richardson(double z, double w, int p);

struct RichardsonResult {
    double coarse_value = 0.0;  ///< Z, step dt
    double fine_value = 0.0;    ///< W, step dt/2
    double extrapolated = 0.0;  ///< Y
    int order_input = 1;
};

struct ConvergenceRow {
    int intervals = 0;
    double value = 0.0;
    std::optional<double> difference;  ///< |value_I - value_{I/2}|
    std::optional<double> ratio;       ///< difference_{I/2} / difference_I
    std::optional<double> order;       ///< log2(ratio)
};

struct ExtrapolatedRow {
    int intervals = 0;
    RichardsonResult richardson;
    std::optional<double> difference;  ///< |Y_I - Y_{I/2}|
    std::optional<double> ratio;
    std::optional<double> order;
};

/// Difference, ratio and order columns for a sequence of values on
/// successively doubled levels.
std::vector<ConvergenceRow> tabulate_convergence(std::span<const int> levels,
                                                 std::span<const double> values);

/// Quantity of interest extracted from a final state.
using Probe = std::function<double(const SpatialGrid&, const GridState&)>;

/// R0 = U / gamma (resp. R1 = V / gamma) at S = K, linearly interpolated.
Probe probe_r0_at_strike(const ModelParams& params);
Probe probe_r1_at_strike(const ModelParams& params);

/// Everything a study needs besides the level list.
struct StudySetup {
    ModelParams params;
    SchemeConfig scheme;
    GridKind grid_kind = GridKind::uniform;
    double alpha = 15.0;  ///< Tavella-Randall stretch
};

SpatialGrid make_grid(const StudySetup& setup, int intervals);

/// Throws ValidationError unless levels are nonempty, each >= 2 and each
/// exactly double the previous.
void validate_levels(std::span<const int> levels);

struct LevelRun {
    int intervals = 0;
    SpatialGrid grid;
    TimeGrid time;
    GridState final_state;
    RunDiagnostics diagnostics;
};

/// One run per level with the half-min-spacing time step divided by
/// `time_refinement`. Levels run concurrently; results are ordered by level.
std::vector<LevelRun> run_levels(const StudySetup& setup, std::span<const int> levels,
                                 int time_refinement = 1);

std::vector<ConvergenceRow> convergence_study(const StudySetup& setup,
                                              std::span<const int> levels,
                                              const Probe& probe);

/// Per level: Z with dt, W with dt/2 on the same spatial grid, Y by
/// richardson(Z, W, p); then successive |Y| differences and orders.
std::vector<ExtrapolatedRow> extrapolated_study(const StudySetup& setup,
                                                std::span<const int> levels,
                                                const Probe& probe, int p = 1);

std::vector<ExtrapolatedRow> tabulate_extrapolation(std::span<const int> levels,
                                                    std::span<const double> coarse,
                                                    std::span<const double> fine,
                                                    int p = 1);

// Audits -------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = true;
    double worst_violation = 0.0;  ///< zero when nothing was violated
    int step = -1;                 ///< location of the worst violation
    int node = -1;
    std::string note;
};

struct AuditReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    const CheckResult* find(const std::string& name) const;
};

/// Every (p, q) over the captured trajectory is >= -tolerance.
CheckResult audit_positivity(const RunResult& run, const TimeGrid& tg,
                             const ModelParams& params, double tolerance = 1e-10);

/// upper >= lower - tolerance for U and V at every node and level.
CheckResult audit_comparison(const RunResult& upper, const RunResult& lower,
                             double tolerance = 1e-12);

/// shifted - base == delta for U and V at every node and level.
CheckResult audit_translation(const RunResult& shifted, const RunResult& base,
                              double delta, double tolerance = 1e-12);

/// Positivity step-size restriction over a run. Breaches fail the check only
/// when the restriction is enforced; otherwise they are reported in the note.
CheckResult audit_restriction(const RunResult& run, bool enforced);

/// Collects M-matrix and a-priori bound diagnostics from every solve it
/// observes. Safe to share between concurrently running solvers.
class SolveAuditor {
public:
    SolveAuditor();
    SolveObserver observer();

    /// Chains this auditor in front of whatever observer `config` carries.
    SchemeConfig attach(SchemeConfig config);

    CheckResult m_matrix_result() const;
    CheckResult bound_result() const;
    long solves() const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Full verification: positivity, comparison (delta shift and call vs zero),
/// translation, M-matrix, a-priori bound and step restriction.
AuditReport audit_run(const ModelParams& params, const SpatialGrid& grid,
                      const TimeGrid& tg, const SchemeConfig& config);

}  // namespace liqshock
