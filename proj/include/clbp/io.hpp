#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "clbp/experiments.hpp"
#include "clbp/percolation.hpp"
#include "clbp/weights.hpp"

namespace clbp {

/// One decimal per line, any order; blank lines and '#' comments are skipped.
/// Throws Parse (with the line number) or the WeightSequence errors.
WeightSequence read_weights(std::istream& in);
WeightSequence read_weight_file(const std::string& path);

/// One weight per line, ascending, 17 significant digits.
void write_weights(std::ostream& out, const WeightSequence& ws);

/// %.17g, the formatting used for every real in text outputs.
std::string format_real(double x);

/// Finite reals as numbers, everything else as null.
nlohmann::json real_or_null(double x);

nlohmann::json to_json(const ThresholdReport& report);
nlohmann::json to_json(const TailCheck& check);
nlohmann::json to_json(const BreedingPlan& plan, bool include_ground = false);
nlohmann::json to_json(const LayerPlan& plan);
/// Round records plus a final-set summary; the full final set (1-indexed) on request.
nlohmann::json to_json(const Trace& trace, bool include_final_set = false);

nlohmann::json to_json(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& cfg);
/// Throws Parse on missing or mistyped fields.
SweepConfig sweep_config_from_json(const nlohmann::json& j);

/// Column order: n,p0,multiplier,replicate,initial_size,final_size,
/// final_fraction,infected_weight,rounds,outbreak.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Threshold report, per-cell aggregates and the transition estimate.
nlohmann::json sweep_summary_json(const SweepResult& result);
/// Two columns: p0 and outbreak frequency, one line per cell.
void write_plot_data(std::ostream& out, const SweepResult& result);

}  // namespace clbp
