// Command-line driver: solve, converge, extrapolate, verify.
//
//   liqshock solve --config run.cfg --out solution.csv
//   liqshock converge --scheme linearized --grid tavella --levels 30,60,120,240
//   liqshock extrapolate --levels 10,20,40,80,160,320,640
//   liqshock verify --I 120
//
// Exit codes: 0 success, 1 validation failure, 2 numerical failure,
// 3 verification failure.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "liqshock/commands.hpp"
#include "liqshock/config.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> scheme;
    std::optional<std::string> grid;
    std::optional<double> alpha;
    std::optional<int> intervals;
    std::optional<std::string> left_bc;
    std::optional<std::string> out;
    std::string levels;
};

void add_common(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "key=value run configuration file")
        ->check(CLI::ExistingFile);
    cmd.add_option("--scheme", o.scheme, "linear | linearized")
        ->check(CLI::IsMember({"linear", "linearized"}));
    cmd.add_option("--grid", o.grid, "uniform | tavella")
        ->check(CLI::IsMember({"uniform", "tavella"}));
    cmd.add_option("--alpha", o.alpha, "Tavella-Randall stretch parameter");
    cmd.add_option("--I", o.intervals, "number of spatial intervals");
    cmd.add_option("--left-bc", o.left_bc, "natural | dirichlet")
        ->check(CLI::IsMember({"natural", "dirichlet"}));
    cmd.add_option("--out", o.out, "output path (stdout when omitted)");
}

liqshock::RunConfig resolve(const Overrides& o) {
    using namespace liqshock;
    RunConfig config = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.scheme) {
        config.scheme = *o.scheme == "linear" ? SchemeKind::imex_linear
                                              : SchemeKind::imex_linearized;
    }
    if (o.grid) {
        config.grid = *o.grid == "uniform" ? GridKind::uniform : GridKind::tavella_randall;
    }
    if (o.alpha) config.alpha = *o.alpha;
    if (o.intervals) config.intervals = *o.intervals;
    if (o.left_bc) {
        config.left_bc = *o.left_bc == "natural" ? LeftBoundaryKind::natural
                                                 : LeftBoundaryKind::dirichlet;
    }
    if (o.out) config.output_path = *o.out;
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IMEX finite-difference solver for option pricing under liquidity shocks"};
    app.require_subcommand(1);

    Overrides solve_opts, converge_opts, extrapolate_opts, verify_opts;
    auto* solve = app.add_subcommand("solve", "solve once and write prices at issue and maturity");
    auto* converge = app.add_subcommand("converge", "convergence table at the strike");
    auto* extrapolate =
        app.add_subcommand("extrapolate", "Richardson-extrapolated convergence table");
    auto* verify = app.add_subcommand("verify", "positivity, comparison and M-matrix audits");

    add_common(*solve, solve_opts);
    add_common(*converge, converge_opts);
    add_common(*extrapolate, extrapolate_opts);
    add_common(*verify, verify_opts);
    converge_opts.levels = "30,60,120,240,480,960";
    extrapolate_opts.levels = "10,20,40,80,160,320,640";
    converge->add_option("--levels", converge_opts.levels, "comma list, each doubling")
        ->capture_default_str();
    extrapolate->add_option("--levels", extrapolate_opts.levels, "comma list, each doubling")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : liqshock::exit_validation;
    }

    try {
        if (*solve) return liqshock::cmd_solve(resolve(solve_opts), std::cout, std::cerr);
        if (*converge) {
            const auto levels = liqshock::parse_levels(converge_opts.levels);
            return liqshock::cmd_converge(resolve(converge_opts), levels, std::cout, std::cerr);
        }
        if (*extrapolate) {
            const auto levels = liqshock::parse_levels(extrapolate_opts.levels);
            return liqshock::cmd_extrapolate(resolve(extrapolate_opts), levels, std::cout,
                                             std::cerr);
        }
        if (*verify) return liqshock::cmd_verify(resolve(verify_opts), std::cout, std::cerr);
    } catch (const liqshock::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return liqshock::exit_validation;
    }
    return liqshock::exit_validation;
}
