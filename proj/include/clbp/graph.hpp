#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "clbp/weights.hpp"

namespace clbp {

using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph in compressed sparse row form. Neighbor lists are
/// sorted; vertex weights travel with the graph so percolation traces can
/// report infected weight. Vertices are 0-based here; text exports are 1-based.
class Graph {
public:
    Graph() = default;

    /// Builds from an edge list. Throws SelfLoop / IndexOutOfRange; duplicate
    /// edges are merged. Missing weights default to 1.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges, std::vector<double> weights = {});

    std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(Vertex u, Vertex v) const noexcept;

    std::span<const double> weights() const noexcept { return weights_; }
    double weight(Vertex v) const noexcept { return weights_[v]; }

    /// Same vertex set, keeping only edges with both endpoints in `keep`.
    Graph induced(const std::vector<bool>& keep) const;

    /// Edge list with u < v, lexicographically sorted.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> neighbors_;
    std::vector<double> weights_;
};

/// min{w_u w_v / W, 1}. Throws SelfLoop or IndexOutOfRange.
double edge_probability(const WeightSequence& ws, Vertex u, Vertex v);

/// Chung-Lu sample by weight-ordered skip sampling: each row jumps
/// geometrically under the probability of its current candidate (an upper
/// bound for all lighter candidates) and thins by true/bound. Pairs whose
/// probability clamps to 1 are included without a draw. O(n + m) expected.
Graph sample_graph(const WeightSequence& ws, std::uint64_t seed);

/// One Bernoulli draw per pair. Reference sampler for tests, O(n^2).
Graph sample_graph_naive(const WeightSequence& ws, std::uint64_t seed);

/// "u v" lines, u < v, 1-indexed.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace clbp
