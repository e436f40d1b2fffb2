#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beliefnet/dynamics.hpp"
#include "beliefnet/social_graph.hpp"

namespace beliefnet::experiments {

enum class Variant { zealot_similar, free_similar };

std::string to_string(Variant v);
/// "zealot-similar" / "free-similar"; throws std::invalid_argument otherwise.
Variant parse_variant(const std::string& s);

/// Star-network flip-probability campaign: N=40, sigma=0.2, alpha=1.5,
/// beta=1, 50 runs x 10 repeats, 10,000-event measurement horizon.
struct Fig2Config {
    int n = 40;
    double sigma = 0.2;
    double alpha = 1.5;
    double beta = 1.0;
    int runs_per_point = 50;
    int repeats = 10;
    Variant variant = Variant::zealot_similar;
    int scenario = 1;
    std::uint64_t steps = 10'000;

    void validate() const;
};

struct FlipCurveRow {
    int scenario = 1;
    Variant variant = Variant::zealot_similar;
    int m = 0;
    double mean_flip = 0.0;
    double std_flip = 0.0;
    std::optional<double> analytical;  // main variant only
};

/// Star of cfg.n nodes: hub 0, leaves 1..m carry the dissimilar belief
/// system as zealots, the remaining leaves share the hub's initial system
/// (zealots unless the variant frees them).
Population star_population(int n, int scenario, int m, Variant variant);

/// Rows for m = 0..n-1. Seeds derive from (seed, m, repeat, run) only, so
/// `workers` never changes the output.
std::vector<FlipCurveRow> flip_curve(const Fig2Config& cfg, std::uint64_t seed,
                                     unsigned workers = 1);

void write_fig2_csv(const std::vector<FlipCurveRow>& rows, std::ostream& out);

enum class Phase { none, local, global };
std::string to_string(Phase p);

struct PhaseThresholds {
    double global_min = 0.9;
    double local_min = 0.35;
    double local_max = 0.65;
    double none_margin = 0.05;  // none if rho_inf <= rho0 + margin
};

Phase classify_phase(double rho0, double rho_inf, const PhaseThresholds& th = {});

/// Optimal-modularity campaign on two-community graphs (N=100, M=1500,
/// sigma=0.2, alpha=2, beta=1, 40 ensembles). The dynamics run a fixed budget of
/// budget_per_node * n events and rho_inf is the adoption fraction averaged
/// over the last window_per_node * n events.
struct Fig4Config {
    int n = 100;
    std::size_t m_edges = 1500;
    double sigma = 0.2;
    double alpha = 2.0;
    double beta = 1.0;
    int ensembles = 40;
    std::vector<double> rho0_grid;
    std::vector<double> omega_grid;
    std::vector<double> cross_rho0 = {0.03, 0.06, 0.09};
    std::uint64_t budget_per_node = 5'000;
    std::uint64_t window_per_node = 50;
    double stationarity_tol = 0.01;
    bool stop_at_stationarity = false;
    PhaseThresholds thresholds;

    Fig4Config();
    void validate() const;
};

/// Inclusive arithmetic grid, rounded to 1e-9 so 0.05 steps stay exact.
std::vector<double> grid(double first, double last, double step);

struct PhasePoint {
    double rho0 = 0.0;
    double omega = 0.0;
    double rho_inf_mean = 0.0;
    double rho_inf_stderr = 0.0;
    Phase phase = Phase::none;
};

/// round(rho0 * n) zealots with {+1,+1,+1}, drawn uniformly from community
/// 0; every other node starts non-zealot at {+1,-1,-1}.
Population modularity_population(int n, std::size_t m_edges, double omega, double rho0,
                                 Rng& rng);

/// Adoption target of the modularity campaign: (+,+,+).
SignPattern zealot_pattern();

/// Ensemble-averaged rho_inf for one (rho0, omega). Seeds derive from the
/// grid values, not their position.
PhasePoint modularity_point(const Fig4Config& cfg, double rho0, double omega,
                            std::uint64_t seed, unsigned workers = 1);

/// One PhasePoint per (rho0, omega) in the given grids, rho0-major.
std::vector<PhasePoint> modularity_sweep(const Fig4Config& cfg,
                                         const std::vector<double>& rho0_values,
                                         const std::vector<double>& omega_values,
                                         std::uint64_t seed, unsigned workers = 1);

struct Fig4Result {
    std::vector<PhasePoint> phase;
    std::vector<PhasePoint> cross;
};

/// Full grid plus the cross-sections; shared points are computed once.
Fig4Result modularity_campaign(const Fig4Config& cfg, std::uint64_t seed, unsigned workers = 1);

/// rho0,omega,rho_inf_mean,rho_inf_stderr,phase
void write_fig4_csv(const std::vector<PhasePoint>& rows, std::ostream& out);

/// Six significant digits, the precision of every campaign CSV.
std::string format_value(double x);

}  // namespace beliefnet::experiments
