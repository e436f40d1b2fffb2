#include "beliefnet/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "beliefnet/cli/checks.hpp"
#include "beliefnet/dynamics.hpp"
#include "beliefnet/markov.hpp"
#include "beliefnet/random.hpp"

namespace beliefnet::cli {
namespace {

using experiments::format_value;

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    return out;
}

template <typename Fn>
auto as_config_error(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

int to_int(std::int64_t x, const char* key) {
    if (x > std::numeric_limits<int>::max()) throw ConfigError(fmt::format("{}: too large", key));
    return static_cast<int>(x);
}

std::vector<std::string> run_simulate(const Config& cfg, const RunOptions& opts, std::ostream& log) {
    const std::uint64_t seed = cfg.count("seed");
    const int n = to_int(cfg.integer("n"), "n");
    const bool star = cfg.text("graph") == "star";

    Population pop;
    SignPattern target;
    if (star) {
        const auto m = cfg.integer("m");
        if (m > n - 1) throw ConfigError(fmt::format("m: must be <= n-1 = {} (got {})", n - 1, m));
        const int scenario = static_cast<int>(cfg.integer("scenario"));
        pop = experiments::star_population(n, scenario, static_cast<int>(m),
                                           experiments::parse_variant(cfg.text("variant")));
        target = markov::star_scenario(scenario).target();
    } else {
        Rng rng(derive_seed(seed, {0}));
        pop = as_config_error([&] {
            return experiments::modularity_population(n, cfg.count("m_edges"), cfg.real("omega"),
                                                      cfg.real("rho0"), rng);
        });
        target = experiments::zealot_pattern();
    }

    SimulationConfig sim;
    sim.params = {cfg.real("alpha"), cfg.real("beta"), cfg.real("sigma")};
    sim.max_steps = cfg.count("steps");
    sim.stationarity_window = cfg.count("window");
    sim.stationarity_tol = cfg.real("tol");
    sim.stop_at_stationarity = cfg.flag("stop_at_stationarity");
    sim.seed = derive_seed(seed, {1});
    sim.target = target;
    sim.snapshot_every = cfg.count("snapshot_every");
    if (const auto track = cfg.integer("track"); track >= 0) {
        if (track >= n) throw ConfigError(fmt::format("track: must be < n = {} (got {})", n, track));
        sim.tracked_node = static_cast<NodeId>(track);
    }
    as_config_error([&] { sim.validate(); });

    const auto t = run(pop, sim);
    std::vector<std::string> outputs{"trajectory.csv"};
    {
        auto out = open_output(opts.out_dir / outputs.back());
        write_trajectory_csv(t, out);
    }
    if (cfg.flag("export_graph")) {
        outputs.emplace_back("graph.edges");
        auto out = open_output(opts.out_dir / outputs.back());
        write_edge_list(*pop.graph, out);
    }
    fmt::print(log, "{} events ({}), final adoption {}, last-window mean {}\n", t.steps,
               t.terminated_by == Termination::stationarity ? "stationary" : "budget spent",
               format_value(adoption_fraction(t.final, target)),
               format_value(t.mean_adoption_last_window));
    return outputs;
}

std::vector<std::string> run_fig2(const Config& cfg, const RunOptions& opts, std::ostream& log) {
    std::vector<experiments::FlipCurveRow> rows;
    for (int scenario : cfg.ints("scenario")) {
        for (const auto& name : cfg.texts("variant")) {
            const auto fc = fig2_config(cfg, scenario, experiments::parse_variant(name));
            auto curve = experiments::flip_curve(fc, cfg.count("seed"), opts.workers);
            double mad = 0.0;
            int counted = 0;
            for (const auto& r : curve) {
                if (!r.analytical) continue;
                mad += std::abs(r.mean_flip - *r.analytical);
                ++counted;
            }
            if (counted > 0)
                fmt::print(log, "scenario {} {}: mean |simulated - analytical| = {}\n", scenario, name,
                           format_value(mad / counted));
            else
                fmt::print(log, "scenario {} {}: {} points\n", scenario, name, curve.size());
            rows.insert(rows.end(), curve.begin(), curve.end());
        }
    }
    auto out = open_output(opts.out_dir / "fig2.csv");
    experiments::write_fig2_csv(rows, out);
    return {"fig2.csv"};
}

std::vector<std::string> run_fig4(const Config& cfg, const RunOptions& opts, std::ostream& log) {
    const auto fc = fig4_config(cfg);
    const auto result = experiments::modularity_campaign(fc, cfg.count("seed"), opts.workers);
    {
        auto out = open_output(opts.out_dir / "fig4_phase.csv");
        experiments::write_fig4_csv(result.phase, out);
    }
    {
        auto out = open_output(opts.out_dir / "fig4_cross.csv");
        experiments::write_fig4_csv(result.cross, out);
    }
    std::map<experiments::Phase, int> counts;
    for (const auto& p : result.phase) ++counts[p.phase];
    fmt::print(log, "{} grid points: {} none, {} local, {} global\n", result.phase.size(),
               counts[experiments::Phase::none], counts[experiments::Phase::local],
               counts[experiments::Phase::global]);
    return {"fig4_phase.csv", "fig4_cross.csv"};
}

std::vector<std::string> run_markov(const Config& cfg, const RunOptions& opts, std::ostream& log) {
    const auto scenario = markov::star_scenario(static_cast<int>(cfg.integer("scenario")));
    const auto alpha = cfg.rational("alpha");
    const auto beta = cfg.rational("beta");
    const int k = to_int(cfg.integer("k"), "k");
    const auto export_m = cfg.integer("export_m");
    if (export_m > k) throw ConfigError(fmt::format("export_m: must be <= k = {} (got {})", k, export_m));

    const auto senders = scenario.senders();
    const auto states = markov::enumerate_states(scenario.hub_initial, senders, alpha, beta);
    const auto matrix = markov::build_transition_matrix(states, senders, alpha, beta);
    const auto targets = markov::states_matching(matrix, scenario.target());

    fmt::print(log, "scenario {}: hub {} against {}, alpha={}, beta={}\n", scenario.id,
               markov::to_string(scenario.hub_initial), markov::to_string(scenario.dissimilar),
               markov::format_rational(alpha), markov::format_rational(beta));
    fmt::print(log, "{} states:\n", states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        fmt::print(log, "  {:>3}  {}  {}\n", i, markov::to_string(states[i]),
                   to_string(states[i].signs()));
    fmt::print(log, "\ntransition matrix (row = next state, column = current state):\n");
    markov::write_symbolic_table(matrix, log);

    const auto curve = markov::analytical_curve(scenario, k, alpha, beta);
    fmt::print(log, "\nflip probability, k = {} ({} target states):\n", k, targets.size());
    fmt::print(log, "  {:>4}  {:>10}  {:>10}  {:>10}\n", "m", "u", "v", "flip");
    std::vector<std::string> outputs{"markov_curve.csv"};
    auto out = open_output(opts.out_dir / outputs.back());
    out << "m,u,v,flip\n";
    for (const auto& p : curve) {
        fmt::print(log, "  {:>4}  {:>10}  {:>10}  {:>10}\n", p.m, format_value(p.u),
                   format_value(p.v), format_value(p.flip));
        out << p.m << ',' << format_value(p.u) << ',' << format_value(p.v) << ','
            << format_value(p.flip) << '\n';
    }
    if (export_m >= 0) {
        const auto& p = curve.at(static_cast<std::size_t>(export_m));
        outputs.emplace_back("markov_matrix.csv");
        auto mat = open_output(opts.out_dir / outputs.back());
        markov::write_numeric_csv(matrix, p.u, p.v, mat);
    }
    return outputs;
}

std::vector<std::string> run_validate(const Config& cfg, const RunOptions& opts, std::ostream& log,
                                      std::string& failure) {
    const std::uint64_t seed = cfg.count("seed");
    std::vector<CheckResult> results;
    auto record = [&](CheckResult r) {
        fmt::print(log, "{}\n", format_check(r));
        log.flush();
        results.push_back(std::move(r));
    };
    record(check_transition_matrix());
    record(check_state_counts());
    record(check_boundary_values());
    record(check_curve_shapes());
    record(check_stationarity());
    record(check_gradient(cfg.count("networks"), derive_seed(seed, {1})));
    record(check_zealots_and_bounds(cfg.count("events"), derive_seed(seed, {2})));
    record(check_determinism(opts.out_dir / "validate_scratch", opts.workers));
    if (cfg.flag("full")) {
        record(check_flip_agreement(derive_seed(seed, {3}), opts.workers));
        record(check_optimal_modularity(10, derive_seed(seed, {4}), opts.workers));
    }

    auto out = open_output(opts.out_dir / "validate_report.txt");
    int failed = 0;
    for (const auto& r : results) {
        out << format_check(r) << '\n';
        failed += r.passed ? 0 : 1;
    }
    out.close();
    if (failed > 0) failure = fmt::format("{} of {} checks failed", failed, results.size());
    return {"validate_report.txt"};
}

}  // namespace

experiments::Fig2Config fig2_config(const Config& cfg, int scenario, experiments::Variant variant) {
    experiments::Fig2Config fc;
    fc.n = to_int(cfg.integer("n"), "n");
    fc.sigma = cfg.real("sigma");
    fc.alpha = cfg.real("alpha");
    fc.beta = cfg.real("beta");
    fc.runs_per_point = to_int(static_cast<std::int64_t>(cfg.count("runs")), "runs");
    fc.repeats = to_int(static_cast<std::int64_t>(cfg.count("repeats")), "repeats");
    fc.scenario = scenario;
    fc.variant = variant;
    fc.steps = cfg.count("steps");
    as_config_error([&] { fc.validate(); });
    return fc;
}

experiments::Fig4Config fig4_config(const Config& cfg) {
    experiments::Fig4Config fc;
    fc.n = to_int(cfg.integer("n"), "n");
    fc.m_edges = cfg.count("m_edges");
    fc.sigma = cfg.real("sigma");
    fc.alpha = cfg.real("alpha");
    fc.beta = cfg.real("beta");
    fc.ensembles = to_int(static_cast<std::int64_t>(cfg.count("ensembles")), "ensembles");
    fc.rho0_grid = cfg.reals("rho0_grid");
    fc.omega_grid = cfg.reals("omega_grid");
    fc.cross_rho0 = cfg.reals("cross_rho0");
    fc.budget_per_node = cfg.count("budget_per_node");
    fc.window_per_node = cfg.count("window_per_node");
    fc.stationarity_tol = cfg.real("stationarity_tol");
    fc.stop_at_stationarity = cfg.flag("stop_at_stationarity");
    fc.thresholds = {cfg.real("global_min"), cfg.real("local_min"), cfg.real("local_max"),
                     cfg.real("none_margin")};
    if (fc.thresholds.local_min > fc.thresholds.local_max)
        throw ConfigError("local_min: must not exceed local_max");
    if (fc.thresholds.local_max > fc.thresholds.global_min)
        throw ConfigError("local_max: must not exceed global_min");
    as_config_error([&] { fc.validate(); });
    Rng probe(0);
    for (double omega : fc.omega_grid) {
        try {
            make_two_community(fc.n, fc.m_edges, omega, probe);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(fmt::format("m_edges: {} at omega = {}", e.what(), omega));
        }
    }
    return fc;
}

std::filesystem::path manifest_path(const std::filesystem::path& out_dir, const std::string& command) {
    return out_dir / (command + "_manifest.ini");
}

RunManifest execute(const Config& cfg, const RunOptions& opts, std::ostream& log) {
    std::filesystem::create_directories(opts.out_dir);
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::string> outputs;
    std::string failure;
    const auto& cmd = cfg.command();
    if (cmd == "simulate") outputs = run_simulate(cfg, opts, log);
    else if (cmd == "fig2") outputs = run_fig2(cfg, opts, log);
    else if (cmd == "fig4") outputs = run_fig4(cfg, opts, log);
    else if (cmd == "markov") outputs = run_markov(cfg, opts, log);
    else if (cmd == "validate") outputs = run_validate(cfg, opts, log, failure);
    else throw ConfigError(fmt::format("command: unknown command '{}'", cmd));

    RunManifest m{cfg, std::string(version()), outputs, opts.workers,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
    auto out = open_output(manifest_path(opts.out_dir, cmd));
    write_manifest(m, out);
    if (!failure.empty()) throw CheckFailure(failure);
    return m;
}

}  // namespace beliefnet::cli
