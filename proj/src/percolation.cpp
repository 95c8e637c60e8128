#include "clbp/percolation.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "clbp/error.hpp"
#include "clbp/rng.hpp"
#include "summation.hpp"

namespace clbp {

namespace {

constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();

void require_threshold(int r) {
    if (r < 2) throw Error(Errc::InvalidParam, "infection threshold r must be >= 2, got " + std::to_string(r));
}

VertexSet normalized(const Graph& g, const VertexSet& set) {
    VertexSet out(set);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!out.empty() && out.back() >= g.vertex_count()) {
        throw Error(Errc::IndexOutOfRange, "vertex " + std::to_string(out.back()) + " is not in the graph");
    }
    return out;
}

// Shared bookkeeping for both engines: infection rounds per vertex and the
// per-round weight records.
class TraceBuilder {
public:
    TraceBuilder(const Graph& g, const VertexSet& a0) : g_(g), round_of_(g.vertex_count(), kNever) {
        for (Vertex v : a0) round_of_[v] = 0;
        close_round(a0);
        initial_size_ = a0.size();
    }

    bool infected(Vertex v) const noexcept { return round_of_[v] != kNever; }

    void infect(Vertex v, std::uint32_t round) noexcept { round_of_[v] = round; }

    void close_round(const VertexSet& fresh) {
        detail::CompensatedSum added;
        for (Vertex v : fresh) added.add(g_.weight(v));
        cumulative_.add(added.value());
        rounds_.push_back({fresh.size(), added.value(), cumulative_.value()});
    }

    Trace finish() && {
        Trace trace;
        trace.rounds = std::move(rounds_);
        trace.initial_set_size = initial_size_;
        trace.steps_taken = static_cast<std::size_t>(
            std::count_if(trace.rounds.begin() + 1, trace.rounds.end(),
                          [](const RoundRecord& rec) { return rec.newly_infected_count > 0; }));
        for (Vertex v = 0; v < g_.vertex_count(); ++v) {
            if (round_of_[v] != kNever) {
                trace.final_set.push_back(v);
                trace.infection_round.push_back(round_of_[v]);
            }
        }
        return trace;
    }

private:
    const Graph& g_;
    std::vector<std::uint32_t> round_of_;
    std::vector<RoundRecord> rounds_;
    detail::CompensatedSum cumulative_;
    std::size_t initial_size_ = 0;
};

}  // namespace

void InfectionParams::validate() const {
    require_threshold(r);
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw Error(Errc::InvalidParam, "initial infection rate must lie in [0, 1]");
}

VertexSet sample_initial(const WeightSequence& ws, const InfectionParams& params, std::uint64_t seed) {
    params.validate();
    CounterRng rng(seed);
    VertexSet out;
    const std::size_t eligible_end = params.init_weight_cap ? ws.first_at_least(*params.init_weight_cap) : ws.size();
    const std::size_t floor_begin = params.init_weight_floor_all ? ws.first_at_least(*params.init_weight_floor_all)
                                                                 : ws.size();
    if (params.p0 > 0.0) {
        for (std::size_t v = 0; v < eligible_end; ++v) {
            if (v >= floor_begin) break;
            if (params.p0 >= 1.0 || rng.bernoulli(params.p0)) out.push_back(static_cast<Vertex>(v));
        }
    }
    for (std::size_t v = floor_begin; v < ws.size(); ++v) out.push_back(static_cast<Vertex>(v));
    return out;
}

Trace run_bootstrap(const Graph& g, const VertexSet& a0_in, int r) {
    require_threshold(r);
    const VertexSet a0 = normalized(g, a0_in);
    TraceBuilder builder(g, a0);
    const auto threshold = static_cast<std::uint32_t>(r);
    std::vector<std::uint32_t> hits(g.vertex_count(), 0);

    VertexSet frontier = a0;
    for (std::uint32_t round = 1; !frontier.empty(); ++round) {
        VertexSet next;
        for (Vertex u : frontier) {
            for (Vertex v : g.neighbors(u)) {
                if (builder.infected(v)) continue;
                // Counters stop at r: once a vertex crosses it is infected and never counted again.
                if (++hits[v] == threshold) {
                    builder.infect(v, round);
                    next.push_back(v);
                }
            }
        }
        std::sort(next.begin(), next.end());
        builder.close_round(next);
        frontier = std::move(next);
    }
    return std::move(builder).finish();
}

VertexSet run_bootstrap_oracle(const Graph& g, const VertexSet& a0_in, int r) {
    require_threshold(r);
    const VertexSet a0 = normalized(g, a0_in);
    std::vector<bool> infected(g.vertex_count(), false);
    for (Vertex v : a0) infected[v] = true;
    for (bool changed = true; changed;) {
        changed = false;
        const std::vector<bool> snapshot = infected;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (snapshot[v]) continue;
            int count = 0;
            for (Vertex u : g.neighbors(v)) count += snapshot[u] ? 1 : 0;
            if (count >= r) {
                infected[v] = true;
                changed = true;
            }
        }
    }
    VertexSet out;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (infected[v]) out.push_back(v);
    }
    return out;
}

Trace run_restricted(const Graph& g, const VertexSet& a0_in, const VertexSet& ground_in, int r,
                     RestrictedCounting counting) {
    require_threshold(r);
    const VertexSet a0 = normalized(g, a0_in);
    const VertexSet ground = normalized(g, ground_in);
    std::vector<bool> in_ground(g.vertex_count(), false);
    for (Vertex v : ground) in_ground[v] = true;

    TraceBuilder builder(g, a0);
    const auto threshold = static_cast<std::uint32_t>(r);
    std::vector<std::uint32_t> hits(g.vertex_count(), 0);
    std::vector<Vertex> touched;

    VertexSet frontier = a0;
    for (std::uint32_t round = 1; !frontier.empty(); ++round) {
        VertexSet next;
        for (Vertex u : frontier) {
            for (Vertex v : g.neighbors(u)) {
                if (!in_ground[v] || builder.infected(v)) continue;
                if (hits[v] == 0) touched.push_back(v);
                if (++hits[v] == threshold) next.push_back(v);
            }
        }
        for (Vertex v : next) builder.infect(v, round);
        if (counting == RestrictedCounting::PreviousStep) {
            for (Vertex v : touched) hits[v] = 0;
            touched.clear();
        }
        std::sort(next.begin(), next.end());
        builder.close_round(next);
        frontier = std::move(next);
    }
    return std::move(builder).finish();
}

bool contained_in(const Trace& restricted, const Trace& full) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < restricted.final_set.size(); ++i) {
        const Vertex v = restricted.final_set[i];
        while (j < full.final_set.size() && full.final_set[j] < v) ++j;
        if (j == full.final_set.size() || full.final_set[j] != v) return false;
        if (full.infection_round[j] > restricted.infection_round[i]) return false;
    }
    return true;
}

double nucleus_fraction(const Trace& trace, const WeightSequence& ws, double psi_K) {
    const std::size_t begin = ws.first_at_least(psi_K);
    if (begin == ws.size()) throw Error(Errc::EmptyNucleusBand, "no vertex has weight >= psi_K");
    detail::CompensatedSum infected;
    for (auto it = std::lower_bound(trace.final_set.begin(), trace.final_set.end(), static_cast<Vertex>(begin));
         it != trace.final_set.end(); ++it) {
        infected.add(ws[*it]);
    }
    return infected.value() / ws.suffix_weight(begin);
}

}  // namespace clbp
