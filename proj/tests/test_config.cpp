#include <gtest/gtest.h>

#include <random>
#include <string>

#include "liqshock/config.hpp"
#include "support/generators.hpp"

namespace liqshock {
namespace {

ConfigError parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "expected ConfigError for:\n" << text;
    return ConfigError(std::vector<ConfigIssue>{});
}

TEST(ParseConfig, DefaultsFromEmptyText) {
    const auto c = parse_config("");
    EXPECT_EQ(c, RunConfig{});
    EXPECT_EQ(c.params.strike, 2.0);
    EXPECT_EQ(c.params.horizon, 1.0);
}

TEST(ParseConfig, PartialTextKeepsDefaults) {
    const auto c = parse_config("sigma=0.3\nnu01=1\nnu10=12");
    EXPECT_EQ(c.params.sigma, 0.3);
    EXPECT_EQ(c.params.nu10, 12.0);
    EXPECT_EQ(c.params.strike, 2.0);
    EXPECT_EQ(c.params.horizon, 1.0);
}

TEST(ParseConfig, CommentsWhitespaceAndEnums) {
    const auto c = parse_config(
        "# reference run\n"
        "  sigma = 0.25   # vol\n"
        "\n"
        "grid=tavella\n"
        "alpha=3.5\n"
        "intervals=64\n"
        "scheme=linearized\n"
        "left_bc=dirichlet\n"
        "tau_rule=explicit\n"
        "dt=0.01\n"
        "capture_trajectory=true\n"
        "enforce_positivity_restriction=true\n"
        "output_path=out/run.csv\n");
    EXPECT_EQ(c.params.sigma, 0.25);
    EXPECT_EQ(c.grid, GridKind::tavella_randall);
    EXPECT_EQ(c.alpha, 3.5);
    EXPECT_EQ(c.intervals, 64);
    EXPECT_EQ(c.scheme, SchemeKind::imex_linearized);
    EXPECT_EQ(c.left_bc, LeftBoundaryKind::dirichlet);
    EXPECT_EQ(c.tau_rule, TimeStepRule::explicit_step(0.01));
    EXPECT_TRUE(c.capture_trajectory);
    EXPECT_TRUE(c.enforce_positivity_restriction);
    EXPECT_EQ(c.output_path, "out/run.csv");
}

TEST(ParseConfig, NegativeSigmaNamesField) {
    const auto e = parse_error("sigma=-1");
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].key, "sigma");
    EXPECT_EQ(e.issues()[0].line, 1);
    EXPECT_NE(std::string(e.what()).find("sigma"), std::string::npos);
}

TEST(ParseConfig, ReportsEveryMalformedLine) {
    const auto e = parse_error(
        "sigma=abc\n"
        "colour=blue\n"
        "intervals=1.5\n"
        "no equals sign\n"
        "scheme=fancy\n"
        "sigma=0.3\n");
    ASSERT_EQ(e.issues().size(), 6u);
    EXPECT_EQ(e.issues()[0].line, 1);
    EXPECT_EQ(e.issues()[0].key, "sigma");
    EXPECT_EQ(e.issues()[1].key, "colour");
    EXPECT_EQ(e.issues()[2].key, "intervals");
    EXPECT_EQ(e.issues()[3].line, 4);
    EXPECT_EQ(e.issues()[4].key, "scheme");
    EXPECT_EQ(e.issues()[5].line, 6);
    EXPECT_NE(e.issues()[5].message.find("duplicate"), std::string::npos);
}

TEST(ParseConfig, KeysAreCaseSensitive) {
    EXPECT_EQ(parse_error("Sigma=0.3").issues()[0].message, "unknown key");
}

TEST(ParseConfig, CrossFieldChecks) {
    auto e = parse_error("strike=2\ns_max=1.5\n");
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].key, "s_max");
    EXPECT_EQ(e.issues()[0].line, 2);

    e = parse_error("dt=0.1\n");
    EXPECT_EQ(e.issues()[0].key, "dt");
    e = parse_error("tau_rule=explicit\n");
    EXPECT_EQ(e.issues()[0].key, "tau_rule");
    e = parse_error("tau_rule=explicit\ndt=2\n");
    EXPECT_EQ(e.issues()[0].line, 2);
    e = parse_error("alpha=0\n");
    EXPECT_EQ(e.issues()[0].key, "alpha");
    e = parse_error("intervals=1\n");
    EXPECT_EQ(e.issues()[0].key, "intervals");
}

TEST(ParseConfig, RejectsNonFiniteNumbers) {
    EXPECT_THROW(parse_config("mu=nan"), ConfigError);
    EXPECT_THROW(parse_config("sigma=inf"), ConfigError);
    EXPECT_THROW(parse_config("sigma="), ConfigError);
    EXPECT_THROW(parse_config("sigma=0.3x"), ConfigError);
    EXPECT_THROW(parse_config("capture_trajectory=yes please"), ConfigError);
}

TEST(EmitConfig, DefaultsRoundTrip) {
    const RunConfig c;
    EXPECT_EQ(parse_config(emit_config(c)), c);
    EXPECT_EQ(emit_config(parse_config(emit_config(c))), emit_config(c));
    EXPECT_EQ(emit_config(c).find("dt="), std::string::npos);
}

TEST(EmitConfig, NormalizesFormatting) {
    const std::string messy = "   nu10 =  12.0  # comment\n\n#only comment\ngrid = uniform\n";
    const auto c = parse_config(messy);
    EXPECT_EQ(emit_config(c), emit_config(RunConfig{}));
}

TEST(EmitConfig, RoundTripFuzz) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> ints(2, 5000);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789_./-";
    for (int n = 0; n < 2000; ++n) {
        RunConfig c;
        c.params = testing::random_params(rng);
        c.grid = coin(rng) ? GridKind::uniform : GridKind::tavella_randall;
        c.intervals = ints(rng);
        c.alpha = testing::uniform(rng, 1e-3, 1e3);
        if (coin(rng)) {
            c.tau_rule = TimeStepRule::explicit_step(testing::uniform(rng, 1e-6, 1.0) * c.params.horizon);
        }
        c.scheme = coin(rng) ? SchemeKind::imex_linear : SchemeKind::imex_linearized;
        c.left_bc = coin(rng) ? LeftBoundaryKind::natural : LeftBoundaryKind::dirichlet;
        c.capture_trajectory = coin(rng);
        c.enforce_positivity_restriction = coin(rng);
        if (coin(rng)) {
            const int len = 1 + n % 20;
            for (int k = 0; k < len; ++k) c.output_path += alphabet[rng() % alphabet.size()];
        }
        const auto text = emit_config(c);
        const auto back = parse_config(text);
        ASSERT_EQ(back, c) << text;
        ASSERT_EQ(emit_config(back), text);
    }
}

TEST(BuildFromConfig, GridTimeAndScheme) {
    RunConfig c;
    c.intervals = 30;
    const auto g = build_grid(c);
    EXPECT_EQ(g.kind(), GridKind::uniform);
    EXPECT_EQ(build_time_grid(c, g).steps, 12);

    c.grid = GridKind::tavella_randall;
    c.alpha = 15.0;
    EXPECT_EQ(build_grid(c).kind(), GridKind::tavella_randall);

    c.left_bc = LeftBoundaryKind::dirichlet;
    c.scheme = SchemeKind::imex_linearized;
    c.enforce_positivity_restriction = true;
    const auto sc = build_scheme_config(c);
    EXPECT_EQ(sc.scheme, SchemeKind::imex_linearized);
    EXPECT_EQ(sc.left.kind, BoundaryCondition::Kind::dirichlet);
    EXPECT_EQ(sc.left.value(0.5), 0.0);
    EXPECT_TRUE(sc.enforce_positivity_restriction);
}

TEST(LoadConfig, MissingFileIsAnError) {
    EXPECT_THROW(load_config("/nonexistent/liqshock.cfg"), Error);
}

}  // namespace
}  // namespace liqshock
