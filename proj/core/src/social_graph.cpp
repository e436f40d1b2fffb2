#include "beliefnet/social_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace beliefnet {

SocialGraph::SocialGraph(int node_count, std::vector<Edge> edges) : edges_(std::move(edges)) {
    if (node_count < 0) throw std::invalid_argument("node count must be >= 0");
    adjacency_.resize(static_cast<std::size_t>(node_count));
    for (auto& [u, v] : edges_) {
        if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                        ") outside node range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end())
        throw std::invalid_argument("duplicate edge (" + std::to_string(dup->first) + ", " +
                                    std::to_string(dup->second) + ")");
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool SocialGraph::has_edge(NodeId a, NodeId b) const {
    if (a < 0 || a >= node_count()) return false;
    const auto& nbrs = adjacency_[a];
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

SocialGraph make_star(int n) {
    if (n < 2) throw std::invalid_argument("star needs n >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
    return SocialGraph(n, std::move(edges));
}

std::vector<NodeId> CommunityLayout::members(int community) const {
    std::vector<NodeId> out;
    for (std::size_t v = 0; v < community_of.size(); ++v)
        if (community_of[v] == community) out.push_back(static_cast<NodeId>(v));
    return out;
}

std::size_t intra_edge_count(std::size_t m, double omega) {
    if (!(omega >= 0.0 && omega <= 1.0))
        throw std::invalid_argument("omega must lie in [0, 1], got " + std::to_string(omega));
    return static_cast<std::size_t>(std::floor((1.0 - omega) * static_cast<double>(m) + 0.5));
}

namespace {

// Floyd's algorithm: k distinct values from [0, population), uniformly.
std::vector<std::uint64_t> sample_distinct(std::uint64_t population, std::size_t k, Rng& rng) {
    std::vector<std::uint64_t> out;
    out.reserve(k);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(k * 2);
    for (std::uint64_t j = population - k; j < population; ++j) {
        const auto t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        const auto pick = seen.insert(t).second ? t : j;
        if (pick == j) seen.insert(j);
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Pair index i over {(a, b) : lo <= a < b < hi} in lexicographic order.
Edge unrank_within(std::uint64_t i, int lo, int hi) {
    const auto n = static_cast<std::uint64_t>(hi - lo);
    std::uint64_t a = 0;
    std::uint64_t row = n - 1;
    while (i >= row) {
        i -= row;
        ++a;
        --row;
    }
    return {lo + static_cast<int>(a), lo + static_cast<int>(a + 1 + i)};
}

void sample_group(std::vector<Edge>& out, const char* what, std::size_t k,
                  std::uint64_t capacity, auto&& unrank, Rng& rng) {
    if (k > capacity)
        throw std::invalid_argument(std::string("requested ") + std::to_string(k) + " " + what +
                                    " edges but only " + std::to_string(capacity) +
                                    " distinct pairs exist");
    for (auto idx : sample_distinct(capacity, k, rng)) out.push_back(unrank(idx));
}

}  // namespace

std::pair<SocialGraph, CommunityLayout> make_two_community(int n, std::size_t m, double omega,
                                                           Rng& rng) {
    if (n < 2) throw std::invalid_argument("two-community graph needs n >= 2");
    const int size0 = (n + 1) / 2;
    const int size1 = n - size0;

    CommunityLayout layout;
    layout.omega = omega;
    layout.total_edges = m;
    layout.intra_edges = intra_edge_count(m, omega);
    layout.inter_edges = m - layout.intra_edges;
    layout.community_of.assign(static_cast<std::size_t>(n), 1);
    std::fill_n(layout.community_of.begin(), size0, 0);

    const std::size_t intra1 = layout.intra_edges / 2;
    const std::size_t intra0 = layout.intra_edges - intra1;
    auto pairs = [](std::uint64_t s) { return s * (s - 1) / 2; };

    std::vector<Edge> edges;
    edges.reserve(m);
    sample_group(edges, "intra-community-0", intra0, pairs(size0),
                 [&](std::uint64_t i) { return unrank_within(i, 0, size0); }, rng);
    sample_group(edges, "intra-community-1", intra1, pairs(size1),
                 [&](std::uint64_t i) { return unrank_within(i, size0, n); }, rng);
    sample_group(edges, "inter-community", layout.inter_edges,
                 static_cast<std::uint64_t>(size0) * static_cast<std::uint64_t>(size1),
                 [&](std::uint64_t i) {
                     return Edge{static_cast<int>(i / size1),
                                 size0 + static_cast<int>(i % size1)};
                 },
                 rng);

    return {SocialGraph(n, std::move(edges)), std::move(layout)};
}

void write_edge_list(const SocialGraph& g, std::ostream& out) {
    out << "# nodes " << g.node_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

SocialGraph read_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::optional<int> declared;
    int max_node = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hdr(line.substr(1));
            std::string key;
            int count = 0;
            if (hdr >> key >> count && key == "nodes") declared = count;
            continue;
        }
        std::istringstream row(line);
        int u = 0, v = 0;
        if (!(row >> u >> v))
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": expected \"u v\"");
        edges.emplace_back(u, v);
        max_node = std::max({max_node, u, v});
    }
    return SocialGraph(declared.value_or(max_node + 1), std::move(edges));
}

Population seed_population(std::shared_ptr<const SocialGraph> graph,
                           const std::vector<Assignment>& assignments) {
    if (!graph) throw std::invalid_argument("population needs a graph");
    const int n = graph->node_count();
    std::vector<std::optional<std::size_t>> owner(static_cast<std::size_t>(n));

    for (std::size_t a = 0; a < assignments.size(); ++a) {
        if (a > 0 && assignments[a].beliefs.concept_count() !=
                         assignments[0].beliefs.concept_count())
            throw std::invalid_argument("assignments mix belief networks of different sizes");
        for (NodeId v : assignments[a].nodes) {
            if (v < 0 || v >= n)
                throw std::invalid_argument("assignment names node " + std::to_string(v) +
                                            " outside the graph");
            if (owner[v])
                throw std::invalid_argument("node " + std::to_string(v) +
                                            " assigned more than once");
            owner[v] = a;
        }
    }

    Population pop;
    pop.graph = std::move(graph);
    pop.beliefs.reserve(static_cast<std::size_t>(n));
    pop.zealot.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (!owner[v])
            throw std::invalid_argument("node " + std::to_string(v) + " has no assignment");
        const auto& a = assignments[*owner[v]];
        pop.beliefs.push_back(a.beliefs);
        pop.zealot.push_back(a.zealot ? 1 : 0);
    }
    return pop;
}

}  // namespace beliefnet
