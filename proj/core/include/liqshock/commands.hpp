#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "liqshock/analysis.hpp"
#include "liqshock/config.hpp"

namespace liqshock {

/// Process exit codes of the command-line driver.
enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_numerical = 2,
    exit_verification = 3,
};

/// Fixed CSV number format: 9 significant digits, '.' separator.
std::string format_number(double x);

/// Columns S,p_at_t0,q_at_t0,p_at_T,q_at_T; one row per node.
std::string solution_csv(const RunConfig& config);

/// Columns I,value_R0,diff_R0,ratio_R0,order_R0,value_R1,diff_R1,ratio_R1,order_R1.
std::string convergence_csv(const RunConfig& config, std::span<const int> levels);

/// Columns I,Z,W,Y,diff_Y,ratio,order.
std::string extrapolation_csv(const RunConfig& config, std::span<const int> levels);

/// Writes `contents` to `path`, or to `fallback` when path is empty.
/// Throws Error naming the path on I/O failure.
void write_output(const std::string& path, const std::string& contents,
                  std::ostream& fallback);

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_converge(const RunConfig& config, std::span<const int> levels,
                 std::ostream& out, std::ostream& err);
int cmd_extrapolate(const RunConfig& config, std::span<const int> levels,
                    std::ostream& out, std::ostream& err);
/// Prints one summary line per check; exit_verification on any failure.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

std::vector<int> parse_levels(const std::string& text);

}  // namespace liqshock
