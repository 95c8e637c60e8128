#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clbp/weights.hpp"

namespace clbp {

enum class GeneratorModel { PowerLaw, ExampleA, ExampleB, Uniform, File };

struct GeneratorSpec {
    GeneratorModel model = GeneratorModel::PowerLaw;
    std::size_t n = 0;        ///< power law, uniform
    double exponent = 0.6;    ///< power law
    double scale = 1.0;       ///< power law
    double w_target = 0.0;    ///< example sequences
    double weight = 1.0;      ///< uniform
    std::string path;         ///< weight file
};

WeightSequence generate(const GeneratorSpec& spec);

struct SweepConfig {
    GeneratorSpec generator;
    int r = 2;
    /// p0 = min(1, multiplier * a_c_scale) per cell.
    std::vector<double> multipliers;
    std::size_t replicates = 1;
    std::uint64_t base_seed = 1;
    /// A run is an outbreak when |A_F|/n exceeds this fraction.
    double outbreak_fraction = 0.05;
    std::optional<double> init_weight_cap;
    std::optional<double> init_weight_floor_all;

    void validate() const;
};

struct SweepRow {
    std::size_t n = 0;
    double p0 = 0.0;
    double multiplier = 0.0;
    std::size_t replicate = 0;
    std::size_t initial_size = 0;
    std::size_t final_size = 0;
    double final_fraction = 0.0;
    double infected_weight = 0.0;
    std::size_t rounds = 0;
    bool outbreak = false;
};

struct CellSummary {
    double multiplier = 0.0;
    double p0 = 0.0;
    std::size_t replicates = 0;
    double median_fraction = 0.0;
    double q1_fraction = 0.0;
    double q3_fraction = 0.0;
    double median_final_size = 0.0;
    double outbreak_frequency = 0.0;
};

struct SweepResult {
    ThresholdReport report;
    /// Ordered by (cell, replicate) regardless of how the work was scheduled.
    std::vector<SweepRow> rows;
    std::vector<CellSummary> cells;
};

/// Every (cell, replicate) pair samples its own graph and initial set from
/// seeds derived from (base_seed, cell, replicate), so the result does not
/// depend on `threads`.
SweepResult run_sweep(const SweepConfig& cfg, unsigned threads = 1);
SweepResult run_sweep(const WeightSequence& ws, const SweepConfig& cfg, unsigned threads = 1);

/// Type-7 quantile of an unsorted sample.
double quantile(std::vector<double> values, double q);

/// First grid crossing of outbreak frequency 1/2, interpolated linearly in
/// log p0. Empty when the frequency never passes 1/2 between two cells.
std::optional<double> estimate_transition(const SweepResult& result);

/// Fraction of replicates in which the bootstrap process on the non-heavy
/// subgraph ends with infected weight at most sqrt(mu) * W * p0. Requires
/// p0 <= p_s / mu (throws NotSubcritical).
double subcritical_weight_check(const WeightSequence& ws, int r, double p0, double mu, std::size_t replicates,
                                std::uint64_t seed);

/// Seeds `seed_count` uniformly chosen heavy vertices (clamped to the number
/// of heavy vertices), runs bootstrap on the heavy-induced subgraph and
/// reports whether every heavy vertex ends infected.
bool dense_cascade_check(const WeightSequence& ws, int r, std::size_t seed_count, std::uint64_t seed);

}  // namespace clbp
