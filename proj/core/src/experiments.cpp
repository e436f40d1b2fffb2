#include "beliefnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "beliefnet/markov.hpp"
#include "beliefnet/parallel.hpp"

namespace beliefnet::experiments {

std::string to_string(Variant v) {
    return v == Variant::zealot_similar ? "zealot-similar" : "free-similar";
}

Variant parse_variant(const std::string& s) {
    if (s == "zealot-similar") return Variant::zealot_similar;
    if (s == "free-similar") return Variant::free_similar;
    throw std::invalid_argument("variant must be zealot-similar or free-similar, got \"" + s + "\"");
}

std::string format_value(double x) { return fmt::format("{:.6g}", x); }

void Fig2Config::validate() const {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    ModelParams{alpha, beta, sigma}.validate();
    if (runs_per_point < 1) throw std::invalid_argument("runs_per_point must be >= 1");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    markov::star_scenario(scenario);
}

Population star_population(int n, int scenario, int m, Variant variant) {
    if (m < 0 || m > n - 1)
        throw std::invalid_argument("m must lie in [0, n-1], got " + std::to_string(m));
    const auto sc = markov::star_scenario(scenario);
    Assignment hub{{0}, sc.hub_initial.to_network(), false};
    Assignment dissimilar{{}, sc.dissimilar.to_network(), true};
    Assignment similar{{}, sc.hub_initial.to_network(), variant == Variant::zealot_similar};
    for (int leaf = 1; leaf < n; ++leaf) (leaf <= m ? dissimilar : similar).nodes.push_back(leaf);
    return seed_population(std::make_shared<const SocialGraph>(make_star(n)),
                           {hub, dissimilar, similar});
}

std::vector<FlipCurveRow> flip_curve(const Fig2Config& cfg, std::uint64_t seed,
                                     unsigned workers) {
    cfg.validate();
    const auto scenario = markov::star_scenario(cfg.scenario);
    const SignPattern target = scenario.target();

    std::vector<markov::CurvePoint> analytic;
    if (cfg.variant == Variant::zealot_similar)
        analytic = markov::analytical_curve(scenario, cfg.n - 1, markov::to_rational(cfg.alpha),
                                            markov::to_rational(cfg.beta));

    SimulationConfig sim;
    sim.params = {cfg.alpha, cfg.beta, cfg.sigma};
    sim.max_steps = cfg.steps;
    sim.stationarity_window = std::max<std::uint64_t>(cfg.steps, 1);
    sim.stop_at_stationarity = false;
    sim.target = target;

    const auto points = static_cast<std::size_t>(cfg.n);
    const auto repeats = static_cast<std::size_t>(cfg.repeats);
    std::vector<double> fractions(points * repeats);
    parallel_for(fractions.size(), workers, [&](std::size_t task) {
        const int m = static_cast<int>(task / repeats);
        const std::size_t rep = task % repeats;
        const Population initial = star_population(cfg.n, cfg.scenario, m, cfg.variant);
        int flips = 0;
        for (int run_idx = 0; run_idx < cfg.runs_per_point; ++run_idx) {
            SimulationConfig replica = sim;
            replica.seed = derive_seed(seed, {static_cast<std::uint64_t>(cfg.scenario),
                                              static_cast<std::uint64_t>(cfg.variant),
                                              static_cast<std::uint64_t>(m), rep,
                                              static_cast<std::uint64_t>(run_idx)});
            const auto t = run(initial, replica);
            flips += matches(t.final.beliefs[0], target) ? 1 : 0;
        }
        fractions[task] = static_cast<double>(flips) / cfg.runs_per_point;
    });

    std::vector<FlipCurveRow> rows;
    for (std::size_t m = 0; m < points; ++m) {
        const auto stats = summarize(std::vector<double>(
            fractions.begin() + static_cast<std::ptrdiff_t>(m * repeats),
            fractions.begin() + static_cast<std::ptrdiff_t>((m + 1) * repeats)));
        FlipCurveRow row{cfg.scenario, cfg.variant, static_cast<int>(m), stats.mean, stats.stddev,
                         std::nullopt};
        if (!analytic.empty()) row.analytical = analytic[m].flip;
        rows.push_back(row);
    }
    return rows;
}

void write_fig2_csv(const std::vector<FlipCurveRow>& rows, std::ostream& out) {
    out << "scenario,variant,m,mean_flip,std_flip,analytical\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << to_string(r.variant) << ',' << r.m << ','
            << format_value(r.mean_flip) << ',' << format_value(r.std_flip) << ',';
        if (r.analytical) out << format_value(*r.analytical);
        out << '\n';
    }
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::none: return "none";
        case Phase::local: return "local";
        case Phase::global: return "global";
    }
    return "none";
}

Phase classify_phase(double rho0, double rho_inf, const PhaseThresholds& th) {
    constexpr double kTieEps = 1e-12;
    const double none_max = rho0 + th.none_margin;
    if (rho_inf >= th.global_min) return Phase::global;
    if (rho_inf <= none_max) return Phase::none;
    if (rho_inf >= th.local_min && rho_inf <= th.local_max) return Phase::local;
    // Between bands: nearest boundary wins, ties go to the lower phase.
    if (rho_inf < th.local_min)
        return rho_inf - none_max <= th.local_min - rho_inf + kTieEps ? Phase::none : Phase::local;
    return rho_inf - th.local_max <= th.global_min - rho_inf + kTieEps ? Phase::local : Phase::global;
}

std::vector<double> grid(double first, double last, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long i = 0; i <= count; ++i)
        out.push_back(std::round((first + static_cast<double>(i) * step) * 1e9) / 1e9);
    return out;
}

Fig4Config::Fig4Config()
    : rho0_grid(grid(0.01, 0.15, 0.01)), omega_grid(grid(0.05, 0.95, 0.05)) {}

namespace {

int zealot_count(int n, double rho0) {
    return static_cast<int>(std::floor(rho0 * n + 0.5));
}

void check_rho0(int n, double rho0) {
    if (!(rho0 >= 0.0 && rho0 <= 1.0))
        throw std::invalid_argument("rho0 must lie in [0, 1], got " + std::to_string(rho0));
    if (zealot_count(n, rho0) > (n + 1) / 2)
        throw std::invalid_argument("rho0 = " + std::to_string(rho0) +
                                    " needs more zealots than community 0 holds");
}

}  // namespace

void Fig4Config::validate() const {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    ModelParams{alpha, beta, sigma}.validate();
    if (ensembles < 1) throw std::invalid_argument("ensembles must be >= 1");
    if (budget_per_node < 1) throw std::invalid_argument("budget_per_node must be >= 1");
    if (window_per_node < 1) throw std::invalid_argument("window_per_node must be >= 1");
    if (!(stationarity_tol >= 0.0)) throw std::invalid_argument("stationarity_tol must be >= 0");
    for (double r : rho0_grid) check_rho0(n, r);
    for (double r : cross_rho0) check_rho0(n, r);
    for (double o : omega_grid) intra_edge_count(m_edges, o);
}

SignPattern zealot_pattern() { return {Sign::positive, Sign::positive, Sign::positive}; }

Population modularity_population(int n, std::size_t m_edges, double omega, double rho0,
                                 Rng& rng) {
    check_rho0(n, rho0);
    auto [graph, layout] = make_two_community(n, m_edges, omega, rng);

    auto pool = layout.members(0);
    const auto zealots = static_cast<std::size_t>(zealot_count(n, rho0));
    for (std::size_t i = 0; i < zealots; ++i)
        std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);

    Assignment seeds{{pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(zealots)},
                     BeliefNetwork{1.0, 1.0, 1.0}, true};
    Assignment rest{{}, BeliefNetwork{1.0, -1.0, -1.0}, false};
    std::vector<char> is_seed(static_cast<std::size_t>(n), 0);
    for (NodeId v : seeds.nodes) is_seed[v] = 1;
    for (NodeId v = 0; v < n; ++v)
        if (!is_seed[v]) rest.nodes.push_back(v);
    return seed_population(std::make_shared<const SocialGraph>(std::move(graph)), {seeds, rest});
}

namespace {

std::uint64_t grid_key(double x) { return static_cast<std::uint64_t>(std::llround(x * 1e9)); }

}  // namespace

PhasePoint modularity_point(const Fig4Config& cfg, double rho0, double omega,
                            std::uint64_t seed, unsigned workers) {
    check_rho0(cfg.n, rho0);
    SimulationConfig sim;
    sim.params = {cfg.alpha, cfg.beta, cfg.sigma};
    sim.max_steps = cfg.budget_per_node * static_cast<std::uint64_t>(cfg.n);
    sim.stationarity_window = cfg.window_per_node * static_cast<std::uint64_t>(cfg.n);
    sim.stationarity_tol = cfg.stationarity_tol;
    sim.stop_at_stationarity = cfg.stop_at_stationarity;
    sim.target = zealot_pattern();
    sim.seed = derive_seed(seed, {grid_key(rho0), grid_key(omega)});

    const auto stats = run_ensemble(
        [&](std::uint64_t s) {
            Rng rng(s);
            return modularity_population(cfg.n, cfg.m_edges, omega, rho0, rng);
        },
        sim, cfg.ensembles, final_adoption(), workers);

    return {rho0, omega, stats.mean, stats.stderr_mean,
            classify_phase(rho0, stats.mean, cfg.thresholds)};
}

std::vector<PhasePoint> modularity_sweep(const Fig4Config& cfg,
                                         const std::vector<double>& rho0_values,
                                         const std::vector<double>& omega_values,
                                         std::uint64_t seed, unsigned workers) {
    cfg.validate();
    std::vector<PhasePoint> out;
    out.reserve(rho0_values.size() * omega_values.size());
    for (double r : rho0_values)
        for (double o : omega_values) out.push_back(modularity_point(cfg, r, o, seed, workers));
    return out;
}

Fig4Result modularity_campaign(const Fig4Config& cfg, std::uint64_t seed, unsigned workers) {
    cfg.validate();
    std::map<std::pair<std::uint64_t, std::uint64_t>, PhasePoint> done;
    auto point = [&](double r, double o) {
        const auto key = std::make_pair(grid_key(r), grid_key(o));
        auto it = done.find(key);
        if (it == done.end()) it = done.emplace(key, modularity_point(cfg, r, o, seed, workers)).first;
        return it->second;
    };

    Fig4Result result;
    for (double r : cfg.rho0_grid)
        for (double o : cfg.omega_grid) result.phase.push_back(point(r, o));
    for (double r : cfg.cross_rho0)
        for (double o : cfg.omega_grid) result.cross.push_back(point(r, o));
    return result;
}

void write_fig4_csv(const std::vector<PhasePoint>& rows, std::ostream& out) {
    out << "rho0,omega,rho_inf_mean,rho_inf_stderr,phase\n";
    for (const auto& p : rows)
        out << format_value(p.rho0) << ',' << format_value(p.omega) << ','
            << format_value(p.rho_inf_mean) << ',' << format_value(p.rho_inf_stderr) << ','
            << to_string(p.phase) << '\n';
}

}  // namespace beliefnet::experiments
