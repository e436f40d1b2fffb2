#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "beliefnet/belief.hpp"
#include "beliefnet/random.hpp"

namespace beliefnet {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

/// Simple undirected, unweighted graph. Edges are stored as (u, v) with
/// u < v, sorted; adjacency lists are sorted as well.
class SocialGraph {
public:
    SocialGraph() = default;
    /// Throws std::invalid_argument on self-loops, duplicates or endpoints
    /// outside [0, node_count).
    SocialGraph(int node_count, std::vector<Edge> edges);

    int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
    std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
    bool has_edge(NodeId a, NodeId b) const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
};

/// Hub is node 0, leaves are 1..n-1.
SocialGraph make_star(int n);

struct CommunityLayout {
    double omega = 0.0;
    std::size_t total_edges = 0;
    std::size_t intra_edges = 0;
    std::size_t inter_edges = 0;
    /// Community 0 holds nodes [0, ceil(n/2)), community 1 the rest.
    std::vector<int> community_of;

    std::vector<NodeId> members(int community) const;
};

/// round((1 - omega) * m) with halves rounded up.
std::size_t intra_edge_count(std::size_t m, double omega);

/// Two equal communities; round((1-omega)*m) intra edges split evenly
/// (remainder to community 0), the rest between communities, each group
/// sampled uniformly without replacement. Throws std::invalid_argument when a
/// group asks for more edges than it has distinct pairs.
std::pair<SocialGraph, CommunityLayout> make_two_community(int n, std::size_t m, double omega,
                                                           Rng& rng);

/// One "u v" line per edge, 0-indexed. The node count is written as a leading
/// "# nodes N" comment so isolated nodes survive a round trip.
void write_edge_list(const SocialGraph& g, std::ostream& out);
SocialGraph read_edge_list(std::istream& in);

/// Agents on a social graph: per-node belief networks and zealot flags.
struct Population {
    std::shared_ptr<const SocialGraph> graph;
    std::vector<BeliefNetwork> beliefs;
    std::vector<char> zealot;

    int size() const noexcept { return static_cast<int>(beliefs.size()); }
    bool is_zealot(NodeId v) const { return zealot.at(v) != 0; }
};

struct Assignment {
    std::vector<NodeId> nodes;
    BeliefNetwork beliefs;
    bool zealot = false;
};

/// Throws std::invalid_argument when the node sets overlap, leave a node
/// uncovered, or mix belief networks of different sizes.
Population seed_population(std::shared_ptr<const SocialGraph> graph,
                           const std::vector<Assignment>& assignments);

}  // namespace beliefnet
