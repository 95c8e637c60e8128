#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "clbp/graph.hpp"
#include "clbp/weights.hpp"

namespace clbp {

/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

struct InfectionParams {
    int r = 2;
    double p0 = 0.0;
    /// Only vertices lighter than the cap may be drawn initially.
    std::optional<double> init_weight_cap;
    /// Every vertex at least this heavy is infected initially.
    std::optional<double> init_weight_floor_all;

    /// Throws InvalidParam unless r >= 2 and 0 <= p0 <= 1.
    void validate() const;
};

struct RoundRecord {
    std::size_t newly_infected_count = 0;
    double newly_infected_weight = 0.0;
    double cumulative_weight = 0.0;
};

/// Per-round history of one run. rounds[0] describes the initial set; the
/// last record is always the first round that infected nobody.
struct Trace {
    std::vector<RoundRecord> rounds;
    std::size_t initial_set_size = 0;
    VertexSet final_set;
    /// Round at which final_set[i] became infected (0 for seeds).
    std::vector<std::uint32_t> infection_round;
    /// Rounds that infected at least one vertex.
    std::size_t steps_taken = 0;

    double final_weight() const noexcept { return rounds.empty() ? 0.0 : rounds.back().cumulative_weight; }
};

/// Independent Bernoulli(p0) over vertices below the cap, united with the floor set.
VertexSet sample_initial(const WeightSequence& ws, const InfectionParams& params, std::uint64_t seed);

/// Synchronous bootstrap: A_{t+1} = A_t + {v : |N(v) & A_t| >= r}. Work is
/// O(n + sum of degrees of infected vertices).
Trace run_bootstrap(const Graph& g, const VertexSet& a0, int r);

/// Full rescans until nothing changes. Reference implementation for tests.
VertexSet run_bootstrap_oracle(const Graph& g, const VertexSet& a0, int r);

enum class RestrictedCounting {
    /// Count only neighbours infected in the immediately preceding step.
    PreviousStep,
    /// Count every infected neighbour (sensitivity runs).
    AllInfected,
};

/// Bootstrap in which only `ground` vertices can become infected after the
/// seeds, each step counting neighbours in A'_{t-1} \ A'_{t-2} by default.
Trace run_restricted(const Graph& g, const VertexSet& a0, const VertexSet& ground, int r,
                     RestrictedCounting counting = RestrictedCounting::PreviousStep);

/// True when every vertex of `restricted` is also infected in `full`, no
/// later than in `restricted`. Both traces must come from the same graph and seeds.
bool contained_in(const Trace& restricted, const Trace& full);

/// Infected share of the weight in V_{>= psi_K}. Throws EmptyNucleusBand if psi_K > w_n.
double nucleus_fraction(const Trace& trace, const WeightSequence& ws, double psi_K);

}  // namespace clbp
