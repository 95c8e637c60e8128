#include "clbp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "clbp/error.hpp"

namespace clbp {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string_view model_name(GeneratorModel m) {
    switch (m) {
        case GeneratorModel::PowerLaw: return "powerlaw";
        case GeneratorModel::ExampleA: return "example-a";
        case GeneratorModel::ExampleB: return "example-b";
        case GeneratorModel::Uniform: return "uniform";
        case GeneratorModel::File: return "file";
    }
    return "powerlaw";
}

GeneratorModel model_from_name(const std::string& name) {
    if (name == "powerlaw") return GeneratorModel::PowerLaw;
    if (name == "example-a") return GeneratorModel::ExampleA;
    if (name == "example-b") return GeneratorModel::ExampleB;
    if (name == "uniform") return GeneratorModel::Uniform;
    if (name == "file") return GeneratorModel::File;
    throw Error(Errc::Parse, "unknown generator model '" + name + "'");
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

}  // namespace

WeightSequence read_weights(std::istream& in) {
    std::vector<double> weights;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": '" + std::string(text) + "' is not a number");
        }
        weights.push_back(value);
    }
    return WeightSequence(std::move(weights));
}

WeightSequence read_weight_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open weight file '" + path + "'");
    return read_weights(in);
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_weights(std::ostream& out, const WeightSequence& ws) {
    for (double w : ws.weights()) out << format_real(w) << '\n';
}

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const ThresholdReport& report) {
    return {
        {"psi", report.psi},
        {"heavy_count", report.heavy_count},
        {"p_sparse", real_or_null(report.p_sparse)},
        {"p_dense", report.p_dense ? json(*report.p_dense) : json(nullptr)},
        {"a_c_scale", real_or_null(report.a_c_scale)},
        {"dense_exists", report.dense_exists},
    };
}

json to_json(const TailCheck& check) {
    return {{"holds", check.holds}, {"witness", check.witness ? json(*check.witness) : json(nullptr)}};
}

json to_json(const BreedingPlan& plan, bool include_ground) {
    json j = {
        {"f0", plan.f0},
        {"ground_size", plan.ground.size()},
        {"ground_prime_size", plan.ground_prime_size},
        {"phi0", plan.phi0},
        {"mu", real_or_null(plan.mu)},
    };
    if (include_ground) {
        json ground = json::array();
        for (Vertex v : plan.ground) ground.push_back(v + 1);
        j["ground"] = std::move(ground);
    }
    return j;
}

json to_json(const LayerPlan& plan) {
    return {
        {"psi_K", plan.psi_K},   {"C", plan.C},           {"C1", plan.C1},
        {"alpha", plan.alpha},   {"C_prime", plan.C_prime}, {"bounds", plan.bounds},
        {"deltas", plan.deltas}, {"epsilons", plan.epsilons}, {"i_star", plan.i_star},
    };
}

json to_json(const Trace& trace, bool include_final_set) {
    json rounds = json::array();
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
        const RoundRecord& rec = trace.rounds[t];
        rounds.push_back({
            {"round", t},
            {"newly_infected_count", rec.newly_infected_count},
            {"newly_infected_weight", rec.newly_infected_weight},
            {"cumulative_weight", rec.cumulative_weight},
        });
    }
    json j = {
        {"initial_set_size", trace.initial_set_size},
        {"steps_taken", trace.steps_taken},
        {"rounds", std::move(rounds)},
        {"final_set_size", trace.final_set.size()},
        {"final_weight", trace.final_weight()},
    };
    if (include_final_set) {
        json ids = json::array();
        for (Vertex v : trace.final_set) ids.push_back(v + 1);
        j["final_set"] = std::move(ids);
    }
    return j;
}

json to_json(const GeneratorSpec& spec) {
    json j = {{"model", model_name(spec.model)}};
    switch (spec.model) {
        case GeneratorModel::PowerLaw:
            j["n"] = spec.n;
            j["exponent"] = spec.exponent;
            j["scale"] = spec.scale;
            break;
        case GeneratorModel::ExampleA:
        case GeneratorModel::ExampleB: j["W"] = spec.w_target; break;
        case GeneratorModel::Uniform:
            j["n"] = spec.n;
            j["w"] = spec.weight;
            break;
        case GeneratorModel::File: j["path"] = spec.path; break;
    }
    return j;
}

GeneratorSpec generator_from_json(const json& j) {
    try {
        GeneratorSpec spec;
        spec.model = model_from_name(j.at("model").get<std::string>());
        spec.n = field_or<std::size_t>(j, "n", 0);
        spec.exponent = field_or<double>(j, "exponent", spec.exponent);
        spec.scale = field_or<double>(j, "scale", spec.scale);
        spec.w_target = field_or<double>(j, "W", 0.0);
        spec.weight = field_or<double>(j, "w", spec.weight);
        spec.path = field_or<std::string>(j, "path", "");
        return spec;
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, std::string("generator spec: ") + e.what());
    }
}

json to_json(const SweepConfig& cfg) {
    return {
        {"generator", to_json(cfg.generator)},
        {"r", cfg.r},
        {"multipliers", cfg.multipliers},
        {"replicates", cfg.replicates},
        {"base_seed", cfg.base_seed},
        {"outbreak_fraction", cfg.outbreak_fraction},
        {"init_weight_cap", cfg.init_weight_cap ? json(*cfg.init_weight_cap) : json(nullptr)},
        {"init_weight_floor_all", cfg.init_weight_floor_all ? json(*cfg.init_weight_floor_all) : json(nullptr)},
    };
}

SweepConfig sweep_config_from_json(const json& j) {
    try {
        SweepConfig cfg;
        cfg.generator = generator_from_json(j.at("generator"));
        cfg.r = field_or<int>(j, "r", 2);
        cfg.multipliers = j.at("multipliers").get<std::vector<double>>();
        cfg.replicates = field_or<std::size_t>(j, "replicates", 1);
        cfg.base_seed = field_or<std::uint64_t>(j, "base_seed", 1);
        cfg.outbreak_fraction = field_or<double>(j, "outbreak_fraction", 0.05);
        if (j.contains("init_weight_cap") && !j.at("init_weight_cap").is_null()) {
            cfg.init_weight_cap = j.at("init_weight_cap").get<double>();
        }
        if (j.contains("init_weight_floor_all") && !j.at("init_weight_floor_all").is_null()) {
            cfg.init_weight_floor_all = j.at("init_weight_floor_all").get<double>();
        }
        return cfg;
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, std::string("sweep config: ") + e.what());
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "n,p0,multiplier,replicate,initial_size,final_size,final_fraction,infected_weight,rounds,outbreak\n";
    for (const SweepRow& row : result.rows) {
        out << row.n << ',' << format_real(row.p0) << ',' << format_real(row.multiplier) << ',' << row.replicate << ','
            << row.initial_size << ',' << row.final_size << ',' << format_real(row.final_fraction) << ','
            << format_real(row.infected_weight) << ',' << row.rounds << ',' << (row.outbreak ? 1 : 0) << '\n';
    }
}

json sweep_summary_json(const SweepResult& result) {
    json cells = json::array();
    for (const CellSummary& c : result.cells) {
        cells.push_back({
            {"multiplier", c.multiplier},
            {"p0", c.p0},
            {"replicates", c.replicates},
            {"median_fraction", c.median_fraction},
            {"q1_fraction", c.q1_fraction},
            {"q3_fraction", c.q3_fraction},
            {"median_final_size", c.median_final_size},
            {"outbreak_frequency", c.outbreak_frequency},
        });
    }
    std::optional<double> transition;
    if (result.cells.size() >= 2) transition = estimate_transition(result);
    return {
        {"threshold_report", to_json(result.report)},
        {"cells", std::move(cells)},
        {"transition_estimate", transition ? json(*transition) : json(nullptr)},
    };
}

void write_plot_data(std::ostream& out, const SweepResult& result) {
    out << "# p0 outbreak_frequency\n";
    for (const CellSummary& c : result.cells) out << format_real(c.p0) << ' ' << format_real(c.outbreak_frequency) << '\n';
}

}  // namespace clbp
