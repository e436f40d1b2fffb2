#include "beliefnet/cli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "beliefnet/cli/commands.hpp"
#include "beliefnet/cli/config.hpp"
#include "beliefnet/dynamics.hpp"
#include "beliefnet/experiments.hpp"
#include "beliefnet/markov.hpp"
#include "beliefnet/random.hpp"

namespace beliefnet::cli {
namespace {

using markov::Coefficient;
using markov::ExactBeliefState;
using markov::Rational;

struct Verdict {
    bool passed = false;
    std::string detail;
};

template <typename Fn>
CheckResult timed(std::string name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{std::move(name), false, {}, 0.0};
    try {
        const Verdict v = fn();
        r.passed = v.passed;
        r.detail = v.detail;
    } catch (const std::exception& e) {
        r.detail = fmt::format("threw: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

const Rational kAlpha(3, 2);
const Rational kBeta(1);
constexpr int kStarLeaves = 39;

std::vector<markov::CurvePoint> curve(int scenario) {
    return markov::analytical_curve(markov::star_scenario(scenario), kStarLeaves, kAlpha, kBeta);
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string format_check(const CheckResult& r) {
    return fmt::format("{} {} ({:.2f}s): {}", r.passed ? "PASS" : "FAIL", r.name, r.seconds,
                       r.detail);
}

CheckResult check_transition_matrix() {
    return timed("transition-matrix", [] {
        const auto sc = markov::star_scenario(1);
        const auto states = markov::enumerate_states(sc.hub_initial, sc.senders(), kAlpha, kBeta);
        const auto m = markov::build_transition_matrix(states, sc.senders(), kAlpha, kBeta);
        const std::vector<ExactBeliefState> order = {
            {-1, 1, 1}, {1, 1, 1}, {Rational(1, 2), 1, 1}, {0, 1, 1}, {Rational(-1, 2), 1, 1}};
        // Published table: rows are next states, columns current states.
        const Coefficient table[5][5] = {
            {{2, 3}, {0, 0}, {0, 0}, {0, 0}, {0, 1}},
            {{1, 0}, {3, 2}, {1, 0}, {1, 0}, {1, 0}},
            {{0, 0}, {0, 1}, {2, 2}, {0, 0}, {0, 0}},
            {{0, 0}, {0, 0}, {0, 1}, {2, 2}, {0, 0}},
            {{0, 0}, {0, 0}, {0, 0}, {0, 1}, {2, 2}},
        };
        if (m.size() != 5) return Verdict{false, fmt::format("{} states, expected 5", m.size())};
        int mismatches = 0;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                if (!(m.entry(m.index_of(order[i]), m.index_of(order[j])) == table[i][j]))
                    ++mismatches;
        return Verdict{mismatches == 0, fmt::format("{} of 25 coefficients differ", mismatches)};
    });
}

CheckResult check_state_counts() {
    return timed("state-counts", [] {
        std::size_t counts[2];
        for (int s : {1, 2}) {
            const auto sc = markov::star_scenario(s);
            counts[s - 1] = markov::enumerate_states(sc.hub_initial, sc.senders(), kAlpha, kBeta).size();
        }
        return Verdict{counts[0] == 5 && counts[1] == 20,
                       fmt::format("scenario 1: {} (want 5), scenario 2: {} (want 20)", counts[0],
                                   counts[1])};
    });
}

CheckResult check_boundary_values() {
    return timed("boundary-values", [] {
        bool ok = true;
        std::string detail;
        for (int s : {1, 2}) {
            const auto c = curve(s);
            const double lo = c.front().flip, hi = c.back().flip;
            ok = ok && std::abs(lo) <= 1e-9 && std::abs(hi - 1.0) <= 1e-9;
            detail += fmt::format("{}scenario {}: f(0)={:.3g} f(k)={:.12g}", s == 1 ? "" : "; ", s,
                                  lo, hi);
        }
        return Verdict{ok, detail};
    });
}

CheckResult check_curve_shapes() {
    return timed("curve-shapes", [] {
        constexpr double tol = 1e-9;
        auto second_differences = [](const std::vector<markov::CurvePoint>& c) {
            std::vector<double> d2;
            for (std::size_t i = 1; i + 1 < c.size(); ++i)
                d2.push_back(c[i + 1].flip - 2 * c[i].flip + c[i - 1].flip);
            return d2;
        };
        auto increasing = [](const std::vector<markov::CurvePoint>& c) {
            for (std::size_t i = 1; i < c.size(); ++i)
                if (c[i].flip < c[i - 1].flip - tol) return false;
            return true;
        };

        const auto c1 = curve(1);
        const auto d1 = second_differences(c1);
        const bool concave = std::all_of(d1.begin(), d1.end(), [](double d) { return d <= tol; });

        const auto c2 = curve(2);
        std::vector<int> signs;
        for (double d : second_differences(c2)) {
            if (std::abs(d) <= tol) continue;
            const int s = d > 0 ? 1 : -1;
            if (signs.empty() || signs.back() != s) signs.push_back(s);
        }
        const bool sigmoid = signs == std::vector<int>{1, -1};
        const auto d2 = second_differences(c2);
        const auto turn = std::find_if(d2.begin(), d2.end(), [](double d) { return d < -tol; });
        const auto inflection = turn - d2.begin() + 1;
        return Verdict{concave && sigmoid && increasing(c1) && increasing(c2),
                       fmt::format("scenario 1 concave increasing: {}; scenario 2 sign changes: {} "
                                   "(curvature turns negative at m={})",
                                   concave && increasing(c1), signs.size() - 1, inflection)};
    });
}

CheckResult check_stationarity() {
    return timed("stationarity-residual", [] {
        double worst_residual = 0.0, worst_mass = 0.0;
        for (int s : {1, 2}) {
            const auto sc = markov::star_scenario(s);
            const auto states = markov::enumerate_states(sc.hub_initial, sc.senders(), kAlpha, kBeta);
            const auto matrix = markov::build_transition_matrix(states, sc.senders(), kAlpha, kBeta);
            for (const auto& p : curve(s)) {
                const auto pi = markov::stationary_from(matrix, p.u, p.v, sc.hub_initial);
                const Eigen::MatrixXd P = matrix.numeric(p.u, p.v);
                worst_residual = std::max(worst_residual, (P * pi - pi).cwiseAbs().maxCoeff());
                worst_mass = std::max(worst_mass, std::abs(pi.sum() - 1.0));
            }
        }
        return Verdict{worst_residual < 1e-10 && worst_mass <= 1e-10,
                       fmt::format("max |P pi - pi| = {:.3g}, max |sum pi - 1| = {:.3g} over m = 0..{}",
                                   worst_residual, worst_mass, kStarLeaves)};
    });
}

CheckResult check_gradient(std::uint64_t networks, std::uint64_t seed) {
    return timed("gradient-oracle", [=] {
        Rng rng(seed);
        std::uniform_real_distribution<double> weight(-1.0, 1.0), interior(-0.75, 0.75);
        constexpr double h = 0.25;
        double worst = 0.0;
        for (std::uint64_t i = 0; i < networks; ++i) {
            const int concepts = 3 + static_cast<int>(i % 4);
            const auto g = ConceptGraph::of(concepts);
            std::vector<double> w(g->edge_count());
            for (auto& x : w) x = weight(rng);
            const EdgeId e{uniform_index(rng, w.size())};
            w[e.index] = interior(rng);
            auto shifted = [&](double d) {
                auto v = w;
                v[e.index] += d;
                return internal_energy(BeliefNetwork(v));
            };
            const double fd = (shifted(h) - shifted(-h)) / (2 * h);
            worst = std::max(worst, std::abs(fd - energy_gradient(BeliefNetwork(w), e)));
        }
        return Verdict{worst <= 1e-12,
                       fmt::format("max |fd - gradient| = {:.3g} over {} networks with 3-6 concepts",
                                   worst, networks)};
    });
}

CheckResult check_zealots_and_bounds(std::uint64_t events, std::uint64_t seed) {
    return timed("zealots-and-bounds", [=] {
        constexpr std::uint64_t kPerGraph = 100'000;
        std::uint64_t done = 0, violations = 0, zealot_hits = 0;
        int graphs = 0;
        while (done < events) {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(graphs)}));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const int n = 20 + static_cast<int>(uniform_index(rng, 61));
            const int concepts = 3 + static_cast<int>(uniform_index(rng, 3));
            auto [graph, layout] = make_two_community(n, static_cast<std::size_t>(2 * n), unit(rng), rng);
            Population pop;
            pop.graph = std::make_shared<const SocialGraph>(std::move(graph));
            for (int v = 0; v < n; ++v) {
                std::vector<double> w(ConceptGraph::of(concepts)->edge_count());
                for (auto& x : w) x = 2 * unit(rng) - 1;
                pop.beliefs.emplace_back(w);
                pop.zealot.push_back(unit(rng) < 0.3 ? 1 : 0);
            }
            const auto initial = pop.beliefs;
            const ModelParams params{3 * unit(rng), 2 * unit(rng), unit(rng)};
            const std::uint64_t budget = std::min(kPerGraph, events - done);
            for (std::uint64_t i = 0; i < budget; ++i) {
                const auto ev = step(pop, params, rng);
                if (!ev.receiver) continue;
                const NodeId r = *ev.receiver;
                if (pop.is_zealot(r)) {
                    ++zealot_hits;
                    if (ev.delta != 0.0 || !(pop.beliefs[r] == initial[r])) ++violations;
                }
                for (double x : pop.beliefs[r].weights())
                    if (!(std::abs(x) <= 1.0)) ++violations;
            }
            for (int v = 0; v < n; ++v) {
                if (pop.is_zealot(v) && !(pop.beliefs[v] == initial[v])) ++violations;
                for (double x : pop.beliefs[v].weights())
                    if (!(std::abs(x) <= 1.0)) ++violations;
            }
            done += budget;
            ++graphs;
        }
        return Verdict{violations == 0,
                       fmt::format("{} violations in {} events on {} graphs ({} zealot receptions)",
                                   violations, done, graphs, zealot_hits)};
    });
}

CheckResult check_flip_agreement(std::uint64_t seed, unsigned workers) {
    return timed("simulation-vs-analytics", [=] {
        bool ok = true;
        std::string detail;
        for (int s : {1, 2}) {
            experiments::Fig2Config cfg;
            cfg.scenario = s;
            const auto rows = experiments::flip_curve(cfg, seed, workers);
            double mad = 0.0;
            for (const auto& r : rows) mad += std::abs(r.mean_flip - r.analytical.value());
            mad /= static_cast<double>(rows.size());
            ok = ok && mad <= 0.05;
            detail += fmt::format("{}scenario {} MAD = {:.4f}", s == 1 ? "" : "; ", s, mad);
        }
        return Verdict{ok, detail + " (limit 0.05)"};
    });
}

CheckResult check_optimal_modularity(int ensembles, std::uint64_t seed, unsigned workers) {
    return timed("optimal-modularity", [=] {
        experiments::Fig4Config cfg;
        cfg.ensembles = ensembles;
        const auto omegas = experiments::grid(0.05, 0.95, 0.05);
        const auto rows = experiments::modularity_sweep(cfg, {0.03, 0.09}, omegas, seed, workers);
        std::vector<double> low, high;
        for (const auto& p : rows) (p.rho0 < 0.05 ? low : high).push_back(p.rho_inf_mean);

        const double low_max = *std::max_element(low.begin(), low.end());
        bool optimum = false;
        for (std::size_t i = 0; i < high.size() && !optimum; ++i) {
            if (high[i] < 0.9) continue;
            const bool below = std::any_of(high.begin(), high.begin() + static_cast<long>(i),
                                           [](double x) { return x <= 0.6; });
            const bool above = std::any_of(high.begin() + static_cast<long>(i) + 1, high.end(),
                                           [](double x) { return x <= 0.6; });
            optimum = below && above;
        }
        std::string profile;
        for (std::size_t i = 0; i < omegas.size(); ++i)
            profile += fmt::format("{}{:.2f}", i ? " " : "", high[i]);
        return Verdict{low_max <= 0.1 && optimum,
                       fmt::format("rho0=0.03 max rho_inf {:.3f} (limit 0.1); rho0=0.09 interior "
                                   "optimum: {}; rho_inf over omega 0.05..0.95 at rho0=0.09: {}",
                                   low_max, optimum ? "yes" : "no", profile)};
    });
}

CheckResult check_determinism(const std::filesystem::path& scratch, unsigned workers) {
    return timed("determinism", [&] {
        const std::vector<std::pair<std::string, Values>> runs = {
            {"fig2", {{"n", "10"}, {"runs", "4"}, {"repeats", "2"}, {"steps", "2000"},
                      {"variant", "zealot-similar,free-similar"}}},
            {"fig4", {{"n", "40"}, {"m_edges", "200"}, {"ensembles", "3"}, {"rho0_grid", "0.05,0.1"},
                      {"omega_grid", "0.1,0.5"}, {"cross_rho0", "0.05"}, {"budget_per_node", "200"},
                      {"window_per_node", "10"}}},
            {"simulate", {{"graph", "two-community"}, {"n", "50"}, {"m_edges", "300"},
                          {"steps", "20000"}, {"snapshot_every", "100"}, {"export_graph", "true"}}},
        };
        const unsigned replay_workers = workers == 1 ? 3 : 1;
        std::ostringstream sink;
        int compared = 0;
        for (const auto& [cmd, overrides] : runs) {
            const auto first_dir = scratch / cmd / "first";
            const auto replay_dir = scratch / cmd / "replay";
            const Config cfg = resolve(cmd, {}, overrides);
            const auto first = execute(cfg, {first_dir, workers}, sink);
            const Config again = resolve(cmd, read_config_file(manifest_path(first_dir, cmd), cmd));
            if (!(again == cfg)) return Verdict{false, cmd + ": manifest does not round-trip"};
            execute(again, {replay_dir, replay_workers}, sink);
            for (const auto& file : first.outputs) {
                if (read_bytes(first_dir / file) != read_bytes(replay_dir / file))
                    return Verdict{false, fmt::format("{}: {} differs on replay", cmd, file)};
                ++compared;
            }
        }
        std::filesystem::remove_all(scratch);
        return Verdict{true, fmt::format("{} files byte-identical after manifest replay with {} vs {} "
                                         "workers",
                                         compared, workers, replay_workers)};
    });
}

}  // namespace beliefnet::cli
