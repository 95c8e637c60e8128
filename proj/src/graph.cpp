#include "clbp/graph.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "clbp/error.hpp"
#include "clbp/rng.hpp"

namespace clbp {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, std::vector<double> weights) {
    if (weights.empty()) weights.assign(n, 1.0);
    if (weights.size() != n) throw Error(Errc::InvalidParam, "weight vector size does not match vertex count");

    std::vector<std::size_t> degree(n + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw Error(Errc::IndexOutOfRange, "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") outside [0, " +
                                                   std::to_string(n) + ")");
        }
        if (u == v) throw Error(Errc::SelfLoop, "self-loop at vertex " + std::to_string(u));
        ++degree[u];
        ++degree[v];
    }

    Graph g;
    g.weights_ = std::move(weights);
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
    g.neighbors_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        g.neighbors_[cursor[u]++] = v;
        g.neighbors_[cursor[v]++] = u;
    }

    // Sort rows and squeeze out duplicates.
    std::vector<std::size_t> packed(n + 1, 0);
    std::size_t out = 0;
    for (std::size_t v = 0; v < n; ++v) {
        const auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        const auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(first, last);
        const auto unique_end = std::unique(first, last);
        for (auto it = first; it != unique_end; ++it) g.neighbors_[out++] = *it;
        packed[v + 1] = out;
    }
    g.neighbors_.resize(out);
    g.offsets_ = std::move(packed);
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
    const auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

Graph Graph::induced(const std::vector<bool>& keep) const {
    std::vector<Edge> kept;
    for (Vertex u = 0; u < vertex_count(); ++u) {
        if (!keep[u]) continue;
        for (Vertex v : neighbors(u)) {
            if (u < v && keep[v]) kept.emplace_back(u, v);
        }
    }
    return from_edges(vertex_count(), kept, weights_);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> list;
    list.reserve(edge_count());
    for (Vertex u = 0; u < vertex_count(); ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) list.emplace_back(u, v);
        }
    }
    return list;
}

double edge_probability(const WeightSequence& ws, Vertex u, Vertex v) {
    if (u >= ws.size() || v >= ws.size()) throw Error(Errc::IndexOutOfRange, "vertex index outside the sequence");
    if (u == v) throw Error(Errc::SelfLoop, "no self-loops in the Chung-Lu model");
    return std::min(ws[u] * ws[v] / ws.total_weight(), 1.0);
}

Graph sample_graph(const WeightSequence& ws, std::uint64_t seed) {
    const std::size_t n = ws.size();
    const double total = ws.total_weight();
    CounterRng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(total / 2.0 * 1.1) + 16);

    // Rows run from the heaviest vertex down; within a row candidates get
    // lighter, so the current candidate's probability bounds all later ones.
    for (std::size_t row = n; row-- > 1;) {
        const double wu = ws[row];
        std::size_t col = row;  // next candidate is col - 1
        double bound = std::min(wu * ws[col - 1] / total, 1.0);
        while (col > 0 && bound > 0.0) {
            if (bound < 1.0) {
                const std::uint64_t skip = rng.geometric(bound);
                if (skip >= col - 1 + 1) break;
                col -= skip;
            }
            const std::size_t v = col - 1;
            const double p = std::min(wu * ws[v] / total, 1.0);
            if (p >= 1.0 || rng.uniform() < p / bound) {
                edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(row));
            }
            bound = p;
            --col;
        }
    }
    return Graph::from_edges(n, edges, std::vector<double>(ws.weights().begin(), ws.weights().end()));
}

Graph sample_graph_naive(const WeightSequence& ws, std::uint64_t seed) {
    const std::size_t n = ws.size();
    CounterRng rng(seed);
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double p = edge_probability(ws, static_cast<Vertex>(u), static_cast<Vertex>(v));
            if (p >= 1.0 || rng.uniform() < p) edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        }
    }
    return Graph::from_edges(n, edges, std::vector<double>(ws.weights().begin(), ws.weights().end()));
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
}

}  // namespace clbp
