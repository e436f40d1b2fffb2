#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "beliefnet/belief.hpp"
#include "beliefnet/random.hpp"
#include "beliefnet/social_graph.hpp"

namespace beliefnet {

struct SimulationConfig {
    ModelParams params;
    std::uint64_t max_steps = 10'000;
    /// Events per stationarity check; also the averaging window for the
    /// reported adoption level.
    std::uint64_t stationarity_window = 1'000;
    double stationarity_tol = 0.01;
    /// When false, run always spends the full max_steps budget.
    bool stop_at_stationarity = true;
    std::uint64_t seed = 0;

    /// Sign pattern counted as "adopted".
    SignPattern target;
    /// Record a snapshot every this many events (0 disables snapshots).
    std::uint64_t snapshot_every = 0;
    /// Node whose beliefs are copied into every snapshot, if any.
    std::optional<NodeId> tracked_node;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct InteractionEvent {
    NodeId sender = 0;
    std::optional<NodeId> receiver;  // empty when the sender is isolated
    EdgeId edge;
    double delta = 0.0;  // change actually applied (after clipping)
};

struct Snapshot {
    std::uint64_t step = 0;
    double adoption = 0.0;
    std::vector<double> tracked_beliefs;
};

enum class Termination { budget, stationarity };

struct Trajectory {
    std::vector<Snapshot> snapshots;
    Population final;
    Termination terminated_by = Termination::budget;
    std::uint64_t steps = 0;
    /// Adoption fraction averaged over every event of the last window.
    double mean_adoption_last_window = 0.0;
};

/// One asynchronous interaction: uniform sender, uniform belief edge,
/// uniform neighbour as receiver. Zealot receivers are left untouched.
InteractionEvent step(Population& pop, const ModelParams& params, Rng& rng);

/// Fraction of nodes (zealots included) whose sign pattern equals target.
double adoption_fraction(const Population& pop, const SignPattern& target);

Trajectory run(Population pop, const SimulationConfig& cfg);

/// Trajectory CSV: step,adoption_fraction[,belief_0,...].
void write_trajectory_csv(const Trajectory& t, std::ostream& out);

struct EnsembleStats {
    std::vector<double> outcomes;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single run
    double stderr_mean = 0.0;
};

EnsembleStats summarize(std::vector<double> outcomes);

using Metric = std::function<double(const Trajectory&)>;
/// Builds the initial population of replica `index` from its derived seed.
using PopulationFactory = std::function<Population(std::uint64_t seed)>;

/// 1 if `node` ends with the target sign pattern, else 0.
Metric flipped(NodeId node, SignPattern target);
/// Trajectory::mean_adoption_last_window.
Metric final_adoption();

/// Replica r runs with seed derive_seed(cfg.seed, {r}); results do not
/// depend on `workers`.
EnsembleStats run_ensemble(const Population& initial, const SimulationConfig& cfg, int runs,
                           const Metric& metric, unsigned workers = 1);
/// The factory receives derive_seed(cfg.seed, {r, 1}) for replica r.
EnsembleStats run_ensemble(const PopulationFactory& factory, const SimulationConfig& cfg,
                           int runs, const Metric& metric, unsigned workers = 1);

}  // namespace beliefnet
