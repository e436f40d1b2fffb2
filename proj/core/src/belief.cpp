#include "beliefnet/belief.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace beliefnet {

ConceptGraph::ConceptGraph(int concept_count) : concept_count_(concept_count) {
    if (concept_count < 3)
        throw std::invalid_argument("belief network needs at least 3 concepts, got " +
                                    std::to_string(concept_count));
    for (int a = 0; a < concept_count; ++a)
        for (int b = a + 1; b < concept_count; ++b) endpoints_.emplace_back(a, b);

    partners_.resize(endpoints_.size());
    for (int a = 0; a < concept_count; ++a)
        for (int b = a + 1; b < concept_count; ++b)
            for (int c = b + 1; c < concept_count; ++c) {
                const std::size_t ab = edge(a, b).index;
                const std::size_t ac = edge(a, c).index;
                const std::size_t bc = edge(b, c).index;
                triads_.push_back({ab, ac, bc});
                partners_[ab].emplace_back(ac, bc);
                partners_[ac].emplace_back(ab, bc);
                partners_[bc].emplace_back(ab, ac);
            }
}

std::shared_ptr<const ConceptGraph> ConceptGraph::of(int concept_count) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const ConceptGraph>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[concept_count];
    if (!slot) {
        try {
            slot.reset(new ConceptGraph(concept_count));
        } catch (...) {
            cache.erase(concept_count);
            throw;
        }
    }
    return slot;
}

EdgeId ConceptGraph::edge(int a, int b) const {
    if (a == b || a < 0 || b < 0 || a >= concept_count_ || b >= concept_count_)
        throw std::out_of_range("no belief edge between concepts " + std::to_string(a) +
                                " and " + std::to_string(b));
    if (a > b) std::swap(a, b);
    // Row offset of a in the lexicographic pair enumeration.
    const int n = concept_count_;
    const auto idx = static_cast<std::size_t>(a * (2 * n - a - 1) / 2 + (b - a - 1));
    return EdgeId{idx};
}

std::pair<int, int> ConceptGraph::endpoints(EdgeId e) const {
    check(e);
    return endpoints_[e.index];
}

void ConceptGraph::check(EdgeId e) const {
    if (e.index >= endpoints_.size())
        throw std::out_of_range("belief edge " + std::to_string(e.index) +
                                " does not exist (edge count " +
                                std::to_string(endpoints_.size()) + ")");
}

int ConceptGraph::concepts_for_edges(std::size_t edge_count) {
    for (int c = 3; static_cast<std::size_t>(c) * (c - 1) / 2 <= edge_count; ++c)
        if (static_cast<std::size_t>(c) * (c - 1) / 2 == edge_count) return c;
    throw std::invalid_argument(std::to_string(edge_count) +
                                " weights do not form a complete graph over >= 3 concepts");
}

BeliefNetwork::BeliefNetwork(int concept_count)
    : graph_(ConceptGraph::of(concept_count)), weights_(graph_->edge_count(), 0.0) {}

BeliefNetwork::BeliefNetwork(std::vector<double> weights)
    : graph_(ConceptGraph::of(ConceptGraph::concepts_for_edges(weights.size()))),
      weights_(std::move(weights)) {
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (!(weights_[i] >= -1.0 && weights_[i] <= 1.0))
            throw std::invalid_argument("belief weight " + std::to_string(i) + " = " +
                                        std::to_string(weights_[i]) + " outside [-1, 1]");
}

void BeliefNetwork::nudge(EdgeId e, double delta) {
    graph_->check(e);
    double& w = weights_[e.index];
    w = std::clamp(w + delta, -1.0, 1.0);
}

void ModelParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument(std::string(name) + " must be finite and >= 0, got " +
                                        std::to_string(v));
    };
    check(alpha, "alpha");
    check(beta, "beta");
    check(sigma, "sigma");
}

double internal_energy(const BeliefNetwork& b) { return energy_of(b.graph(), b.weights()); }

double energy_gradient(const BeliefNetwork& b, EdgeId edge) {
    return gradient_of(b.graph(), b.weights(), edge);
}

double mean_increment(double sender_belief, const BeliefNetwork& receiver, EdgeId edge,
                      const ModelParams& params) {
    return params.alpha * sender_belief - params.beta * energy_gradient(receiver, edge);
}

double increment(double sender_belief, const BeliefNetwork& receiver, EdgeId edge,
                 const ModelParams& params, Rng& rng) {
    const double mu = mean_increment(sender_belief, receiver, edge, params);
    if (params.sigma == 0.0) return mu;
    return std::normal_distribution<double>(mu, params.sigma)(rng);
}

BeliefNetwork apply_update(BeliefNetwork b, EdgeId edge, double delta) {
    b.nudge(edge, delta);
    return b;
}

std::vector<TriadStability> classify_triads(const BeliefNetwork& b) {
    std::vector<TriadStability> out;
    out.reserve(b.graph().triad_count());
    const auto w = b.weights();
    for (const auto& t : b.graph().triads()) {
        const double product = w[t[0]] * w[t[1]] * w[t[2]];
        out.push_back(product > 0.0 ? TriadStability::stable : TriadStability::unstable);
    }
    return out;
}

Sign sign_of(double x) noexcept {
    if (x > 0.0) return Sign::positive;
    if (x < 0.0) return Sign::negative;
    return Sign::zero;
}

SignPattern sign_pattern(const BeliefNetwork& b) {
    SignPattern out;
    out.reserve(b.edge_count());
    for (double w : b.weights()) out.push_back(sign_of(w));
    return out;
}

bool matches(const BeliefNetwork& b, const SignPattern& target) {
    const auto w = b.weights();
    if (w.size() != target.size()) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (sign_of(w[i]) != target[i]) return false;
    return true;
}

std::string to_string(const SignPattern& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += p[i] == Sign::positive ? "+" : p[i] == Sign::negative ? "-" : "0";
    }
    return s + ")";
}

std::string to_string(TriadStability s) {
    return s == TriadStability::stable ? "stable" : "unstable";
}

}  // namespace beliefnet
