#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace beliefnet::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// "PASS name (1.2s): detail"
std::string format_check(const CheckResult& r);

/// Scenario 1 matrix at alpha=3/2, beta=1 against the published 5x5 table,
/// coefficient for coefficient.
CheckResult check_transition_matrix();
/// 5 states for scenario 1, 20 for scenario 2.
CheckResult check_state_counts();
/// Flip probability 0 at m=0 and 1 at m=k, both scenarios, to 1e-9.
CheckResult check_boundary_values();
/// Scenario 1 concave increasing, scenario 2 sigmoidal.
CheckResult check_curve_shapes();
/// |P pi - pi|_inf < 1e-10 and |sum pi - 1| <= 1e-10 for every m.
CheckResult check_stationarity();
/// Central differences of the energy against the gradient, to 1e-12.
CheckResult check_gradient(std::uint64_t networks, std::uint64_t seed);
/// Zealots never change and every belief stays in [-1,1], checked after
/// every event on random two-community graphs.
CheckResult check_zealots_and_bounds(std::uint64_t events, std::uint64_t seed);
/// Mean absolute deviation between simulated and analytical flip
/// probability, m = 0..39, at most 0.05 per scenario.
CheckResult check_flip_agreement(std::uint64_t seed, unsigned workers);
/// Reduced modularity grid: no spread at rho0=0.03, an interior optimum at
/// rho0=0.09.
CheckResult check_optimal_modularity(int ensembles, std::uint64_t seed, unsigned workers);
/// Small fig2, fig4 and simulate runs replayed from their manifests with a
/// different worker count must reproduce every CSV byte for byte.
CheckResult check_determinism(const std::filesystem::path& scratch, unsigned workers);

}  // namespace beliefnet::cli
