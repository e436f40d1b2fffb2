#include "beliefnet/dynamics.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "beliefnet/parallel.hpp"

namespace beliefnet {

void SimulationConfig::validate() const {
    params.validate();
    if (stationarity_window < 1)
        throw std::invalid_argument("stationarity_window must be >= 1");
    if (!(stationarity_tol >= 0.0))
        throw std::invalid_argument("stationarity_tol must be >= 0");
}

InteractionEvent step(Population& pop, const ModelParams& params, Rng& rng) {
    const auto n = static_cast<std::size_t>(pop.size());
    if (n == 0) throw std::invalid_argument("cannot step an empty population");

    InteractionEvent ev;
    ev.sender = static_cast<NodeId>(uniform_index(rng, n));
    const auto nbrs = pop.graph->neighbors(ev.sender);
    if (nbrs.empty()) return ev;

    const BeliefNetwork& sender = pop.beliefs[ev.sender];
    ev.edge = EdgeId{uniform_index(rng, sender.edge_count())};
    const NodeId receiver = nbrs[uniform_index(rng, nbrs.size())];
    ev.receiver = receiver;
    if (pop.zealot[receiver]) return ev;

    BeliefNetwork& target = pop.beliefs[receiver];
    const double before = target.weight(ev.edge);
    target.nudge(ev.edge, increment(sender.weight(ev.edge), target, ev.edge, params, rng));
    ev.delta = target.weight(ev.edge) - before;
    return ev;
}

double adoption_fraction(const Population& pop, const SignPattern& target) {
    if (pop.size() == 0) return 0.0;
    std::size_t adopted = 0;
    for (const auto& b : pop.beliefs) adopted += matches(b, target) ? 1 : 0;
    return static_cast<double>(adopted) / pop.size();
}

Trajectory run(Population pop, const SimulationConfig& cfg) {
    cfg.validate();
    if (!pop.graph) throw std::invalid_argument("population has no graph");
    const int n = pop.size();
    if (n == 0) throw std::invalid_argument("cannot run an empty population");
    if (cfg.target.size() != pop.beliefs.front().edge_count())
        throw std::invalid_argument("target pattern has " + std::to_string(cfg.target.size()) +
                                    " signs but beliefs have " +
                                    std::to_string(pop.beliefs.front().edge_count()) + " edges");
    if (cfg.tracked_node && (*cfg.tracked_node < 0 || *cfg.tracked_node >= n))
        throw std::invalid_argument("tracked_node outside the population");

    Rng rng(cfg.seed);
    std::vector<char> adopted(static_cast<std::size_t>(n));
    std::size_t count = 0;
    for (int v = 0; v < n; ++v) {
        adopted[v] = matches(pop.beliefs[v], cfg.target) ? 1 : 0;
        count += adopted[v];
    }

    // Ring of per-event adopted counts covering the most recent window.
    const std::size_t ring_size =
        static_cast<std::size_t>(std::min(cfg.stationarity_window, std::max<std::uint64_t>(cfg.max_steps, 1)));
    std::vector<std::uint32_t> ring(ring_size, 0);
    std::uint64_t ring_sum = 0;

    Trajectory out;
    auto snapshot = [&](std::uint64_t t) {
        Snapshot s{t, static_cast<double>(count) / n, {}};
        if (cfg.tracked_node) {
            const auto w = pop.beliefs[*cfg.tracked_node].weights();
            s.tracked_beliefs.assign(w.begin(), w.end());
        }
        out.snapshots.push_back(std::move(s));
    };

    std::size_t window_start_count = count;
    std::uint64_t t = 0;
    while (t < cfg.max_steps) {
        const auto ev = step(pop, cfg.params, rng);
        ++t;
        if (ev.receiver && !pop.zealot[*ev.receiver]) {
            const NodeId r = *ev.receiver;
            const char now = matches(pop.beliefs[r], cfg.target) ? 1 : 0;
            count = count - adopted[r] + now;
            adopted[r] = now;
        }

        auto& slot = ring[(t - 1) % ring_size];
        ring_sum = ring_sum - slot + count;
        slot = static_cast<std::uint32_t>(count);

        if (cfg.snapshot_every && t % cfg.snapshot_every == 0) snapshot(t);

        if (t % cfg.stationarity_window == 0) {
            const double change =
                std::abs(static_cast<double>(count) - static_cast<double>(window_start_count)) / n;
            window_start_count = count;
            if (cfg.stop_at_stationarity && change <= cfg.stationarity_tol) {
                out.terminated_by = Termination::stationarity;
                break;
            }
        }
    }

    const std::uint64_t filled = std::min<std::uint64_t>(t, ring_size);
    out.mean_adoption_last_window =
        filled == 0 ? static_cast<double>(count) / n
                    : static_cast<double>(ring_sum) / static_cast<double>(filled) / n;
    out.steps = t;
    out.final = std::move(pop);
    return out;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& s : t.snapshots) width = std::max(width, s.tracked_beliefs.size());
    out << "step,adoption_fraction";
    for (std::size_t i = 0; i < width; ++i) out << ",belief_" << i;
    out << '\n';
    for (const auto& s : t.snapshots) {
        out << s.step << ',' << fmt::format("{:.6g}", s.adoption);
        for (double w : s.tracked_beliefs) out << ',' << fmt::format("{:.6g}", w);
        out << '\n';
    }
}

EnsembleStats summarize(std::vector<double> outcomes) {
    EnsembleStats s;
    s.outcomes = std::move(outcomes);
    const auto k = s.outcomes.size();
    if (k == 0) return s;
    s.mean = std::accumulate(s.outcomes.begin(), s.outcomes.end(), 0.0) / static_cast<double>(k);
    if (k > 1) {
        double ss = 0.0;
        for (double x : s.outcomes) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(k - 1));
        s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(k));
    }
    return s;
}

Metric flipped(NodeId node, SignPattern target) {
    return [node, target = std::move(target)](const Trajectory& t) {
        return matches(t.final.beliefs.at(node), target) ? 1.0 : 0.0;
    };
}

Metric final_adoption() {
    return [](const Trajectory& t) { return t.mean_adoption_last_window; };
}

EnsembleStats run_ensemble(const Population& initial, const SimulationConfig& cfg, int runs,
                           const Metric& metric, unsigned workers) {
    return run_ensemble([&initial](std::uint64_t) { return initial; }, cfg, runs, metric,
                        workers);
}

EnsembleStats run_ensemble(const PopulationFactory& factory, const SimulationConfig& cfg,
                           int runs, const Metric& metric, unsigned workers) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    std::vector<double> outcomes(static_cast<std::size_t>(runs));
    parallel_for(outcomes.size(), workers, [&](std::size_t r) {
        SimulationConfig replica = cfg;
        replica.seed = derive_seed(cfg.seed, {r});
        outcomes[r] = metric(run(factory(derive_seed(cfg.seed, {r, 1})), replica));
    });
    return summarize(std::move(outcomes));
}

}  // namespace beliefnet
