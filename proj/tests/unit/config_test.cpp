#include <gtest/gtest.h>

#include <sstream>

#include "beliefnet/cli/commands.hpp"
#include "beliefnet/cli/config.hpp"

using namespace beliefnet::cli;

namespace {

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "<no error>";
}

Values parse(const std::string& text, const std::string& command) {
    std::istringstream in(text);
    return read_config(in, command);
}

}  // namespace

TEST(Resolve, EmptyFig2UsesPublishedDefaults) {
    const auto cfg = resolve("fig2");
    EXPECT_EQ(cfg.integer("n"), 40);
    EXPECT_EQ(cfg.real("sigma"), 0.2);
    EXPECT_EQ(cfg.real("alpha"), 1.5);
    EXPECT_EQ(cfg.real("beta"), 1.0);
    EXPECT_EQ(cfg.count("runs"), 50u);
    EXPECT_EQ(cfg.count("repeats"), 10u);
    EXPECT_EQ(cfg.count("seed"), kDefaultSeed);
    EXPECT_EQ(cfg.ints("scenario"), (std::vector<int>{1, 2}));
    EXPECT_EQ(cfg.texts("variant"), (std::vector<std::string>{"zealot-similar"}));
}

TEST(Resolve, NegativeAlphaNamesTheField) {
    const auto msg = error_of([] { resolve("fig2", parse("alpha = -1\n", "fig2")); });
    EXPECT_EQ(msg.rfind("alpha:", 0), 0u) << msg;
    EXPECT_NE(msg.find(">= 0"), std::string::npos) << msg;
}

TEST(Resolve, Fig4EnsembleOverrideKeepsOtherDefaults) {
    const auto base = resolve("fig4");
    const auto cfg = resolve("fig4", parse("ensembles = 5\n", "fig4"));
    EXPECT_EQ(cfg.count("ensembles"), 5u);
    ASSERT_EQ(cfg.entries().size(), base.entries().size());
    for (std::size_t i = 0; i < cfg.entries().size(); ++i)
        if (cfg.entries()[i].first != "ensembles") EXPECT_EQ(cfg.entries()[i], base.entries()[i]);
    EXPECT_EQ(base.count("ensembles"), 40u);
    EXPECT_EQ(base.integer("n"), 100);
    EXPECT_EQ(base.count("m_edges"), 1500u);
    EXPECT_EQ(base.real("alpha"), 2.0);
    EXPECT_EQ(base.reals("omega_grid").size(), 19u);
    EXPECT_EQ(base.reals("rho0_grid").size(), 15u);
    EXPECT_EQ(base.reals("cross_rho0"), (std::vector<double>{0.03, 0.06, 0.09}));
}

TEST(Resolve, LayersApplyInOrder) {
    const auto cfg = resolve("fig2", {{"n", "12"}, {"steps", "50"}}, {{"n", "20"}});
    EXPECT_EQ(cfg.integer("n"), 20);
    EXPECT_EQ(cfg.count("steps"), 50u);
}

TEST(Resolve, RejectsBadInput) {
    EXPECT_EQ(error_of([] { resolve("fig2", {{"foo", "1"}}); }).rfind("foo:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig2", {{"n", "4.5"}}); }).rfind("n:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig2", {{"n", "1"}}); }).rfind("n:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig2", {{"sigma", "nan"}}); }).rfind("sigma:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig2", {{"scenario", "1,3"}}); }).rfind("scenario:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig2", {{"variant", "other"}}); }).rfind("variant:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig2", {{"runs", "-3"}}); }).rfind("runs:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig4", {{"omega_grid", "0.2,1.5"}}); }).rfind("omega_grid:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("fig4", {{"rho0_grid", ""}}); }).rfind("rho0_grid:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("simulate", {{"graph", "star,two-community"}}); }).rfind("graph:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("simulate", {{"export_graph", "maybe"}}); }).rfind("export_graph:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("markov", {{"alpha", "x/2"}}); }).rfind("alpha:", 0), 0u);
    EXPECT_EQ(error_of([] { resolve("nope"); }).rfind("command:", 0), 0u);
}

TEST(Canonicalize, NormalizesEquivalentSpellings) {
    const auto& fig2 = schema_for("fig2");
    EXPECT_EQ(canonicalize(*fig2.find("sigma"), " 0.50 "), "0.5");
    EXPECT_EQ(canonicalize(*fig2.find("n"), "+40"), "40");
    EXPECT_EQ(canonicalize(*fig2.find("scenario"), "2, 1"), "2,1");
    EXPECT_EQ(canonicalize(*fig2.find("variant"), "free-similar , zealot-similar"),
              "free-similar,zealot-similar");
    const auto& markov = schema_for("markov");
    EXPECT_EQ(canonicalize(*markov.find("alpha"), "3/2"), "1.5");
    EXPECT_EQ(canonicalize(*markov.find("alpha"), "1/3"), "1/3");
    const auto& sim = schema_for("simulate");
    EXPECT_EQ(canonicalize(*sim.find("export_graph"), "YES"), "true");
    EXPECT_EQ(canonicalize(*sim.find("export_graph"), "0"), "false");
}

TEST(ReadConfig, AcceptsFlatKeysAndConfigSection) {
    EXPECT_EQ(parse("n = 12\n[config]\nsigma = 0.3\n", "fig2"),
              (Values{{"n", "12"}, {"sigma", "0.3"}}));
    EXPECT_EQ(parse("# comment\n; other\n", "fig2"), Values{});
    EXPECT_EQ(parse("[run]\ncommand = fig2\nversion = x\n", "fig2"), Values{});
    EXPECT_EQ(error_of([] { parse("[run]\ncommand = fig4\n", "fig2"); }).rfind("command:", 0), 0u);
    EXPECT_EQ(error_of([] { parse("[extra]\nn = 1\n", "fig2"); }).rfind("[extra]:", 0), 0u);
    EXPECT_EQ(error_of([] { parse("n = 1\nn = 2\n", "fig2"); }).rfind("config:", 0), 0u);
    EXPECT_EQ(error_of([] { parse("no equals sign\n", "fig2"); }).rfind("config:", 0), 0u);
}

TEST(Manifest, RoundTripsEveryCommand) {
    const std::vector<std::pair<std::string, Values>> cases = {
        {"simulate", {{"graph", "two-community"}, {"omega", "0.15"}, {"seed", "7"}}},
        {"fig2", {{"variant", "free-similar,zealot-similar"}, {"sigma", "0.25"}}},
        {"fig4", {{"omega_grid", "0.1, 0.3"}, {"ensembles", "3"}}},
        {"markov", {{"alpha", "7/3"}, {"scenario", "2"}}},
        {"validate", {{"full", "true"}}},
    };
    for (const auto& [cmd, overrides] : cases) {
        const auto cfg = resolve(cmd, {}, overrides);
        std::stringstream text;
        write_manifest({cfg, "test", {"a.csv", "b.csv"}, 3, 1.5}, text);
        EXPECT_EQ(resolve(cmd, read_config(text, cmd)), cfg) << cmd;
    }
}

TEST(Manifest, RecordsRunSection) {
    std::ostringstream text;
    write_manifest({resolve("markov"), "9.9", {"markov_curve.csv"}, 2, 0.25}, text);
    const auto s = text.str();
    EXPECT_NE(s.find("[config]\nseed = "), std::string::npos);
    EXPECT_NE(s.find("[run]\ncommand = markov\nversion = 9.9\noutputs = markov_curve.csv\n"),
              std::string::npos);
    EXPECT_NE(s.find("duration_seconds = 0.250"), std::string::npos);
}

TEST(CampaignConfigs, CrossFieldChecks) {
    EXPECT_EQ(error_of([] { resolve("fig4", {{"rho0_grid", "0.6"}}); }).rfind("rho0_grid:", 0), 0u);
    EXPECT_EQ(error_of([] { fig4_config(resolve("fig4", {{"m_edges", "4000"}, {"omega_grid", "0"}})); })
                  .rfind("m_edges:", 0),
              0u);
    EXPECT_EQ(error_of([] { fig4_config(resolve("fig4", {{"local_min", "0.7"}})); }).rfind("local_min:", 0),
              0u);
    const auto fc = fig4_config(resolve("fig4", {{"ensembles", "5"}}));
    EXPECT_EQ(fc.ensembles, 5);
    EXPECT_EQ(fc.n, 100);
    const auto f2 = fig2_config(resolve("fig2"), 2, beliefnet::experiments::Variant::free_similar);
    EXPECT_EQ(f2.scenario, 2);
    EXPECT_EQ(f2.runs_per_point, 50);
}
