#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beliefnet/random.hpp"

namespace beliefnet {

/// Index of a belief (an edge of the concept graph) in canonical order:
/// pairs (a, b) with a < b, sorted lexicographically. For three concepts the
/// order is (0,1), (0,2), (1,2).
struct EdgeId {
    std::size_t index = 0;
    friend bool operator==(EdgeId, EdgeId) = default;
};

/// Edge/triad bookkeeping for the complete graph over `concept_count`
/// concepts. Shared between all belief networks of the same size.
class ConceptGraph {
public:
    /// The two other edges of a triad that contains a given edge.
    using Partners = std::pair<std::size_t, std::size_t>;

    static std::shared_ptr<const ConceptGraph> of(int concept_count);

    int concept_count() const noexcept { return concept_count_; }
    std::size_t edge_count() const noexcept { return endpoints_.size(); }
    std::size_t triad_count() const noexcept { return triads_.size(); }

    /// Throws std::out_of_range for a == b or concepts outside the graph.
    EdgeId edge(int a, int b) const;
    std::pair<int, int> endpoints(EdgeId e) const;
    /// Throws std::out_of_range for an edge index past edge_count().
    void check(EdgeId e) const;

    std::span<const std::array<std::size_t, 3>> triads() const noexcept { return triads_; }
    std::span<const Partners> partners(EdgeId e) const { return partners_[e.index]; }

    /// Inverse of edge_count = c(c-1)/2; throws when no such c >= 3 exists.
    static int concepts_for_edges(std::size_t edge_count);

private:
    explicit ConceptGraph(int concept_count);

    int concept_count_;
    std::vector<std::pair<int, int>> endpoints_;
    std::vector<std::array<std::size_t, 3>> triads_;
    std::vector<std::vector<Partners>> partners_;
};

/// E = -(1/|T|) sum over triads of the product of their three beliefs.
/// Generic over the number type so the exact analysis shares the formula.
template <class T>
T energy_of(const ConceptGraph& g, std::span<const T> w) {
    T sum{0};
    for (const auto& t : g.triads()) sum += w[t[0]] * w[t[1]] * w[t[2]];
    return -sum / T(static_cast<long>(g.triad_count()));
}

/// dE/db_e = -(1/|T|) sum over triads containing e of the partner product.
template <class T>
T gradient_of(const ConceptGraph& g, std::span<const T> w, EdgeId e) {
    g.check(e);
    T sum{0};
    for (const auto& [p, q] : g.partners(e)) sum += w[p] * w[q];
    return -sum / T(static_cast<long>(g.triad_count()));
}

/// An agent's belief system: a complete concept graph with signed weights
/// in [-1, 1].
class BeliefNetwork {
public:
    /// All-zero network over `concept_count` concepts.
    explicit BeliefNetwork(int concept_count = 3);
    /// Weights in canonical edge order; throws std::invalid_argument when a
    /// weight is outside [-1, 1] or the count does not match a complete graph.
    explicit BeliefNetwork(std::vector<double> weights);
    BeliefNetwork(std::initializer_list<double> weights)
        : BeliefNetwork(std::vector<double>(weights)) {}

    int concept_count() const noexcept { return graph_->concept_count(); }
    std::size_t edge_count() const noexcept { return weights_.size(); }
    const ConceptGraph& graph() const noexcept { return *graph_; }

    double weight(EdgeId e) const {
        graph_->check(e);
        return weights_[e.index];
    }
    double weight(int a, int b) const { return weights_[graph_->edge(a, b).index]; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Adds delta to one belief and clips the result into [-1, 1].
    void nudge(EdgeId e, double delta);

    friend bool operator==(const BeliefNetwork& a, const BeliefNetwork& b) {
        return a.weights_ == b.weights_;
    }

private:
    std::shared_ptr<const ConceptGraph> graph_;
    std::vector<double> weights_;
};

struct ModelParams {
    double alpha = 1.5;  // social influence
    double beta = 1.0;   // coherence drive
    double sigma = 0.0;  // noise std-dev; 0 selects the deterministic rule

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class TriadStability { stable, unstable };

enum class Sign : signed char { negative = -1, zero = 0, positive = 1 };
using SignPattern = std::vector<Sign>;

double internal_energy(const BeliefNetwork& b);
double energy_gradient(const BeliefNetwork& b, EdgeId edge);

/// Mean of the update: alpha * sender_belief - beta * dE/db_edge.
double mean_increment(double sender_belief, const BeliefNetwork& receiver, EdgeId edge,
                      const ModelParams& params);

/// The mean itself when sigma == 0, otherwise one Gaussian draw around it.
double increment(double sender_belief, const BeliefNetwork& receiver, EdgeId edge,
                 const ModelParams& params, Rng& rng);

BeliefNetwork apply_update(BeliefNetwork b, EdgeId edge, double delta);

/// One label per triad in ConceptGraph::triads() order. A zero sign product
/// counts as unstable.
std::vector<TriadStability> classify_triads(const BeliefNetwork& b);

SignPattern sign_pattern(const BeliefNetwork& b);
Sign sign_of(double x) noexcept;
bool matches(const BeliefNetwork& b, const SignPattern& target);

std::string to_string(const SignPattern& p);
std::string to_string(TriadStability s);

}  // namespace beliefnet
