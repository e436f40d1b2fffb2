#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "beliefnet/belief.hpp"

namespace beliefnet::markov {

using Rational = boost::multiprecision::cpp_rational;

/// Accepts "3/2", "1.5", "-0.25", "2". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
/// Exact conversion for doubles with a small decimal expansion (at most 12
/// fractional digits); throws when no such representation exists.
Rational to_rational(double x);
double to_double(const Rational& r);
/// "1", "-0.5", or "1/3" when the value has no finite decimal expansion.
std::string format_rational(const Rational& r);

/// A belief vector in canonical edge order, compared and hashed exactly.
struct ExactBeliefState {
    std::vector<Rational> weights;

    ExactBeliefState() = default;
    explicit ExactBeliefState(std::vector<Rational> w);
    ExactBeliefState(std::initializer_list<Rational> w)
        : ExactBeliefState(std::vector<Rational>(w)) {}

    static ExactBeliefState from(const BeliefNetwork& b);
    BeliefNetwork to_network() const;
    SignPattern signs() const;

    friend bool operator==(const ExactBeliefState&, const ExactBeliefState&) = default;
};

struct ExactBeliefStateHash {
    std::size_t operator()(const ExactBeliefState& s) const noexcept;
};

/// "{-1,1,1}" style label.
std::string to_string(const ExactBeliefState& s);

/// Zealot neighbours of the hub, split by whether they share the hub's
/// initial belief system. Each can send any of its beliefs.
struct SenderSet {
    std::vector<ExactBeliefState> dissimilar;  // weighted by u
    std::vector<ExactBeliefState> similar;     // weighted by v
};

/// Deterministic hub update: clip(b_e + alpha*s_e - beta*dE/db_e).
ExactBeliefState deterministic_update(const ExactBeliefState& receiver,
                                      const ExactBeliefState& sender, EdgeId edge,
                                      const Rational& alpha, const Rational& beta);

/// Breadth-first closure of `initial` under every (sender, edge) update, in
/// discovery order. Throws std::runtime_error past `state_cap` states.
std::vector<ExactBeliefState> enumerate_states(const ExactBeliefState& initial,
                                               const SenderSet& senders, const Rational& alpha,
                                               const Rational& beta,
                                               std::size_t state_cap = 10'000);

/// Entry coefficient a*u + b*v.
struct Coefficient {
    int u = 0;
    int v = 0;
    friend bool operator==(Coefficient, Coefficient) = default;
};

/// Column-stochastic in (u, v): entry(dest, src) is the weight of moving
/// from column state src to row state dest.
class TransitionMatrix {
public:
    TransitionMatrix(std::vector<ExactBeliefState> states,
                     std::vector<std::vector<Coefficient>> entries);

    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<ExactBeliefState>& states() const noexcept { return states_; }
    const Coefficient& entry(std::size_t dest, std::size_t src) const {
        return entries_.at(dest).at(src);
    }
    /// Sum of a column's coefficients.
    Coefficient column_sum(std::size_t src) const;
    /// Throws std::out_of_range for a state not in the matrix.
    std::size_t index_of(const ExactBeliefState& s) const;

    Eigen::MatrixXd numeric(double u, double v) const;

private:
    std::vector<ExactBeliefState> states_;
    std::vector<std::vector<Coefficient>> entries_;
};

/// Throws std::runtime_error when an update leaves `states`.
TransitionMatrix build_transition_matrix(const std::vector<ExactBeliefState>& states,
                                         const SenderSet& senders, const Rational& alpha,
                                         const Rational& beta);

/// lim P^t e_initial by repeated squaring, stopping once successive iterates
/// agree to 1e-12 in max-norm. Requires the numeric columns to sum to 1
/// within 1e-12. Throws std::runtime_error if the limit does not settle.
Eigen::VectorXd stationary_from(const TransitionMatrix& matrix, double u, double v,
                                const ExactBeliefState& initial);

double flip_probability(const Eigen::VectorXd& pi, const TransitionMatrix& matrix,
                        const std::vector<ExactBeliefState>& targets);

/// States whose sign pattern equals `pattern`.
std::vector<ExactBeliefState> states_matching(const TransitionMatrix& matrix,
                                              const SignPattern& pattern);

/// Hub-and-zealot setups on the star. Scenario 1: unstable hub {-1,1,1}
/// against stable {1,1,1}. Scenario 2: stable hub {-1,-1,1} against stable
/// {1,1,1}.
struct StarScenario {
    int id = 1;
    ExactBeliefState hub_initial;
    ExactBeliefState dissimilar;

    SenderSet senders() const { return {{dissimilar}, {hub_initial}}; }
    SignPattern target() const { return dissimilar.signs(); }
};

StarScenario star_scenario(int id);

struct CurvePoint {
    int m = 0;
    double u = 0.0;
    double v = 0.0;
    double flip = 0.0;
};

/// u = m/(E k), v = (k-m)/(E k) for m = 0..k with E beliefs per sender.
/// Targets are every enumerated state matching the dissimilar sign pattern.
std::vector<CurvePoint> analytical_curve(const StarScenario& scenario, int k,
                                         const Rational& alpha, const Rational& beta);

void write_numeric_csv(const TransitionMatrix& matrix, double u, double v, std::ostream& out);
/// One line per entry row with "a*u+b*v" cells, columns labelled by state.
void write_symbolic_table(const TransitionMatrix& matrix, std::ostream& out);

}  // namespace beliefnet::markov
