#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clbp/error.hpp"
#include "clbp/experiments.hpp"
#include "clbp/graph.hpp"
#include "clbp/io.hpp"
#include "clbp/percolation.hpp"
#include "clbp/rng.hpp"
#include "clbp/weights.hpp"
#include "manifest.hpp"

namespace clbp::cli {

namespace {

using nlohmann::json;

// Same stream split as the sweep: purpose 0 samples the graph, 1 the seeds.
constexpr std::uint64_t kGraphStream = 0;
constexpr std::uint64_t kSeedStream = 1;

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned threads = 1;
};

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> opt_field(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

std::size_t as_count(double x, const char* flag) {
    if (!(x >= 0.0) || x != std::floor(x) || x > 4.0e9) {
        throw Error(Errc::InvalidParam, std::string(flag) + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(x);
}

// ---- generator flags (shared by gen and sweep) ----

struct GenFlags {
    std::string model = "powerlaw";
    std::optional<double> n;
    double exponent = 0.6;
    double scale = 1.0;
    std::optional<double> W;
    double w = 1.0;
    std::string path;
};

std::vector<CLI::Option*> add_generator_flags(CLI::App* sub, GenFlags& f) {
    return {
        sub->add_option("--model", f.model, "powerlaw, example-a, example-b, uniform or file")
            ->check(CLI::IsMember({"powerlaw", "example-a", "example-b", "uniform", "file"})),
        sub->add_option("--n", f.n, "vertex count (powerlaw, uniform)"),
        sub->add_option("--exponent,--a", f.exponent, "power-law exponent in (0, 1)"),
        sub->add_option("--scale", f.scale, "power-law scale"),
        sub->add_option("--W", f.W, "target total weight (example-a, example-b)"),
        sub->add_option("--w", f.w, "uniform weight"),
        sub->add_option("--path", f.path, "weight file (file model)"),
    };
}

GeneratorSpec to_spec(const GenFlags& f) {
    json j = {{"model", f.model}, {"exponent", f.exponent}, {"scale", f.scale}, {"w", f.w}, {"path", f.path}};
    if (f.model == "powerlaw" || f.model == "uniform") {
        if (!f.n) throw Error(Errc::InvalidParam, "--n is required for model " + f.model);
        j["n"] = as_count(*f.n, "--n");
    }
    if (f.model == "example-a" || f.model == "example-b") {
        if (!f.W) throw Error(Errc::InvalidParam, "--W is required for model " + f.model);
        j["W"] = *f.W;
    }
    if (f.model == "file" && f.path.empty()) throw Error(Errc::InvalidParam, "--path is required for model file");
    return generator_from_json(j);
}

// ---- output plumbing ----

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(Errc::Io, "cannot write '" + path + "'");
    return f;
}

void emit(Context& ctx, const std::string& path, const std::string& text) {
    if (path.empty()) {
        ctx.out << text;
        return;
    }
    auto f = open_out(path);
    f << text;
}

RunManifest make_manifest(std::string command, json config, std::optional<std::uint64_t> seed,
                          const std::vector<std::string>& inputs, std::string out) {
    RunManifest m;
    m.command = std::move(command);
    m.config = std::move(config);
    m.base_seed = seed;
    m.tool_version = std::string(kToolVersion);
    for (const auto& path : inputs) m.input_digests[path] = file_digest(path);
    m.timestamp = utc_timestamp();
    m.out = std::move(out);
    return m;
}

std::vector<std::string> generator_inputs(const GeneratorSpec& spec) {
    if (spec.model == GeneratorModel::File) return {spec.path};
    return {};
}

// ---- gen ----

void exec_gen(Context& ctx, const GeneratorSpec& spec, const std::string& out) {
    const WeightSequence ws = generate(spec);
    std::ostringstream text;
    write_weights(text, ws);
    emit(ctx, out, text.str());
    if (!out.empty()) {
        write_manifest(out + ".manifest.json", make_manifest("gen", to_json(spec), std::nullopt, generator_inputs(spec), out));
    }
}

// ---- analyze ----

struct AnalyzeOptions {
    std::string weights;
    int r = 2;
    std::optional<double> C, C1, alpha, c, c1, h, p0, psi_K;
    bool allow_small_constants = false;
    bool include_ground = false;
};

json to_json(const AnalyzeOptions& o) {
    return {
        {"weights", o.weights}, {"r", o.r},         {"C", opt(o.C)},           {"C1", opt(o.C1)},
        {"alpha", opt(o.alpha)}, {"c", opt(o.c)},     {"c1", opt(o.c1)},         {"h", opt(o.h)},
        {"p0", opt(o.p0)},       {"psi_K", opt(o.psi_K)}, {"allow_small_constants", o.allow_small_constants},
        {"include_ground", o.include_ground},
    };
}

AnalyzeOptions analyze_from_json(const json& j) {
    try {
        AnalyzeOptions o;
        o.weights = j.at("weights").get<std::string>();
        o.r = j.at("r").get<int>();
        o.C = opt_field(j, "C");
        o.C1 = opt_field(j, "C1");
        o.alpha = opt_field(j, "alpha");
        o.c = opt_field(j, "c");
        o.c1 = opt_field(j, "c1");
        o.h = opt_field(j, "h");
        o.p0 = opt_field(j, "p0");
        o.psi_K = opt_field(j, "psi_K");
        o.allow_small_constants = j.value("allow_small_constants", false);
        o.include_ground = j.value("include_ground", false);
        return o;
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, std::string("analyze config: ") + e.what());
    }
}

json analyze(const WeightSequence& ws, const AnalyzeOptions& o) {
    const ThresholdReport report = threshold_report(ws, o.r);
    json j = {{"n", ws.size()}, {"W", ws.total_weight()}, {"lambda", ws.lambda()}, {"r", o.r}};
    j.update(to_json(report));

    json checks = json::object();
    if (o.C && o.C1) {
        json check = to_json(check_supercritical_tail(ws, *o.C, *o.C1));
        check["C"] = *o.C;
        check["C1"] = *o.C1;
        checks["supercritical_tail"] = std::move(check);
    }
    if (o.c && o.c1 && o.h) {
        json check = to_json(check_subcritical_tail(ws, *o.c, *o.c1, *o.h, o.allow_small_constants));
        check["c"] = *o.c;
        check["c1"] = *o.c1;
        check["h"] = *o.h;
        checks["subcritical_tail"] = std::move(check);
    }
    j["checks"] = std::move(checks);

    if (o.p0) {
        const BreedingPlan plan = breeding_plan(ws, o.r, *o.p0);
        j["breeding_plan"] = to_json(plan, o.include_ground);
        j["nucleus_bound_sparse"] = plan.mu > 1.0 ? json(nucleus_bound_sparse(ws, o.r, plan.mu)) : json(nullptr);
        json dense = {{"bound", nullptr}, {"regime", to_string(DenseNucleusCase::Neither)}};
        if (report.p_dense && *o.p0 / *report.p_dense > 1.0) {
            const DenseNucleusBound b = nucleus_bound_dense(ws, o.r, *o.p0 / *report.p_dense);
            dense = {{"bound", opt(b.bound)}, {"regime", to_string(b.regime)}};
        }
        j["nucleus_bound_dense"] = std::move(dense);
    }

    if (o.C && o.C1 && o.alpha) {
        const double psi_K = o.psi_K.value_or(std::min(report.psi, ws.max_weight()));
        try {
            j["layer_plan"] = to_json(layer_plan(ws, o.r, *o.C, *o.C1, *o.alpha, psi_K, o.allow_small_constants));
        } catch (const DivergentRecursionError& e) {
            j["layer_plan"] = {{"error", to_string(e.code())}, {"witness", e.witness()}, {"psi_K", psi_K}};
        }
    }
    return j;
}

void exec_analyze(Context& ctx, const AnalyzeOptions& o, const std::string& out) {
    const WeightSequence ws = read_weight_file(o.weights);
    emit(ctx, out, analyze(ws, o).dump(2) + "\n");
    if (!out.empty()) write_manifest(out + ".manifest.json", make_manifest("analyze", to_json(o), std::nullopt, {o.weights}, out));
}

// ---- run ----

struct RunOptions {
    std::string weights;
    int r = 2;
    double p0 = 0.0;
    std::uint64_t seed = 1;
    bool restricted = false;
    std::optional<double> cap, floor;
    bool final_set = false;
};

json to_json(const RunOptions& o) {
    return {
        {"weights", o.weights}, {"r", o.r},           {"p0", o.p0},         {"seed", o.seed},
        {"restricted", o.restricted}, {"cap", opt(o.cap)}, {"floor", opt(o.floor)}, {"final_set", o.final_set},
    };
}

RunOptions run_from_json(const json& j) {
    try {
        RunOptions o;
        o.weights = j.at("weights").get<std::string>();
        o.r = j.at("r").get<int>();
        o.p0 = j.at("p0").get<double>();
        o.seed = j.at("seed").get<std::uint64_t>();
        o.restricted = j.value("restricted", false);
        o.cap = opt_field(j, "cap");
        o.floor = opt_field(j, "floor");
        o.final_set = j.value("final_set", false);
        return o;
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, std::string("run config: ") + e.what());
    }
}

json run(const WeightSequence& ws, const RunOptions& o) {
    InfectionParams params{o.r, o.p0, o.cap, o.floor};
    params.validate();
    json j = {{"n", ws.size()}, {"r", o.r}, {"p0", o.p0}, {"seed", o.seed}};

    std::optional<BreedingPlan> plan;
    if (o.restricted) {
        plan = breeding_plan(ws, o.r, o.p0);
        // The breeding phase only seeds vertices lighter than phi0.
        if (!params.init_weight_cap) params.init_weight_cap = plan->phi0;
    }
    j["cap"] = opt(params.init_weight_cap);
    j["floor"] = opt(params.init_weight_floor_all);

    const Graph g = sample_graph(ws, derive_seed(o.seed, {kGraphStream}));
    const VertexSet a0 = sample_initial(ws, params, derive_seed(o.seed, {kSeedStream}));
    j["edges"] = g.edge_count();
    const Trace full = run_bootstrap(g, a0, o.r);

    if (!plan) {
        j["mode"] = "bootstrap";
        j["trace"] = to_json(full, o.final_set);
        return j;
    }
    const VertexSet ground(plan->ground.begin(), plan->ground.end());
    const Trace restricted = run_restricted(g, a0, ground, o.r);
    j["mode"] = "restricted";
    j["breeding_plan"] = to_json(*plan);
    j["trace"] = to_json(restricted, o.final_set);
    j["unrestricted_trace"] = to_json(full, o.final_set);
    j["containment_holds"] = contained_in(restricted, full);
    return j;
}

void exec_run(Context& ctx, const RunOptions& o, const std::string& out) {
    const WeightSequence ws = read_weight_file(o.weights);
    emit(ctx, out, run(ws, o).dump(2) + "\n");
    if (!out.empty()) write_manifest(out + ".manifest.json", make_manifest("run", to_json(o), o.seed, {o.weights}, out));
}

// ---- sweep ----

void exec_sweep(Context& ctx, const SweepConfig& cfg, const std::string& prefix, std::vector<std::string> inputs) {
    if (prefix.empty()) throw Error(Errc::InvalidParam, "sweep needs --out PREFIX");
    const SweepResult result = run_sweep(cfg, ctx.threads);
    {
        auto f = open_out(prefix + ".csv");
        write_sweep_csv(f, result);
    }
    {
        auto f = open_out(prefix + ".summary.json");
        f << sweep_summary_json(result).dump(2) << '\n';
    }
    {
        auto f = open_out(prefix + ".plot.dat");
        write_plot_data(f, result);
    }
    for (const auto& path : generator_inputs(cfg.generator)) inputs.push_back(path);
    write_manifest(prefix + ".manifest.json", make_manifest("sweep", to_json(cfg), cfg.base_seed, inputs, prefix));
    ctx.out << "wrote " << prefix << ".csv (" << result.rows.size() << " rows)\n";
}

SweepConfig sweep_config_from_file(const std::string& path) {
    const json j = read_json_file(path);
    if (!is_manifest(j)) return sweep_config_from_json(j);
    const RunManifest m = manifest_from_json(j);
    if (m.command != "sweep") throw Error(Errc::InvalidParam, "manifest '" + path + "' records a '" + m.command + "' run");
    return sweep_config_from_json(m.config);
}

// ---- replay ----

void exec_replay(Context& ctx, const std::string& manifest_path, std::string out) {
    const RunManifest m = manifest_from_json(read_json_file(manifest_path));
    for (const auto& [path, digest] : m.input_digests) {
        std::string now;
        try {
            now = file_digest(path);
        } catch (const Error&) {
            now = "missing";
        }
        if (now != digest) ctx.err << "warning: input '" << path << "' changed since the manifest was written\n";
    }
    if (out.empty()) out = m.out;
    if (m.command == "gen") {
        exec_gen(ctx, generator_from_json(m.config), out);
    } else if (m.command == "analyze") {
        exec_analyze(ctx, analyze_from_json(m.config), out);
    } else if (m.command == "run") {
        exec_run(ctx, run_from_json(m.config), out);
    } else if (m.command == "sweep") {
        exec_sweep(ctx, sweep_config_from_json(m.config), out, {});
    } else {
        throw Error(Errc::Parse, "manifest records unknown command '" + m.command + "'");
    }
}

unsigned default_threads() {
    if (const char* env = std::getenv("CLBP_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int exit_code(Errc code) {
    switch (code) {
        case Errc::InvalidParam:
        case Errc::TargetTooSmall:
        case Errc::GuardViolated:
        case Errc::InvalidRange:
        case Errc::MuTooSmall: return kUsage;
        case Errc::Parse:
        case Errc::Io:
        case Errc::EmptySequence:
        case Errc::WeightBelowOne:
        case Errc::EmptyBand:
        case Errc::EmptyNucleusBand:
        case Errc::NoHeavyVertices:
        case Errc::NotSubcritical:
        case Errc::DivergentRecursion: return kBadInput;
        case Errc::SelfLoop:
        case Errc::IndexOutOfRange: return kInternal;
    }
    return kInternal;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chung-Lu bootstrap percolation toolkit", "clbp"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    unsigned threads = 0;

    // gen
    GenFlags gen_flags;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "write a weight sequence");
    add_generator_flags(gen, gen_flags).front()->required();
    gen->add_option("-o,--out", gen_out, "output weight file (stdout if omitted)");

    // analyze
    AnalyzeOptions an;
    std::string an_out;
    auto* analyze_cmd = app.add_subcommand("analyze", "threshold report and regime checks for a weight file");
    analyze_cmd->set_help_flag("--help", "print this help and exit");  // frees -h for the tail bound
    analyze_cmd->add_option("--weights", an.weights, "weight file")->required();
    analyze_cmd->add_option("--r", an.r, "infection threshold")->required();
    analyze_cmd->add_option("--C", an.C, "supercritical tail constant");
    analyze_cmd->add_option("--C1", an.C1, "supercritical tail start");
    analyze_cmd->add_option("--alpha", an.alpha, "layer plan alpha");
    analyze_cmd->add_option("--c", an.c, "subcritical tail constant");
    analyze_cmd->add_option("--c1", an.c1, "subcritical tail start");
    analyze_cmd->add_option("--h", an.h, "subcritical tail end");
    analyze_cmd->add_option("--p0", an.p0, "initial rate for the breeding plan and nucleus bounds");
    analyze_cmd->add_option("--psi-K", an.psi_K, "nucleus bound for the layer plan (default min(psi, w_n))");
    analyze_cmd->add_flag("--allow-small-constants", an.allow_small_constants, "skip the constant guards");
    analyze_cmd->add_flag("--ground", an.include_ground, "list the breeding ground vertices");
    analyze_cmd->add_option("-o,--out", an_out, "output JSON (stdout if omitted)");

    // run
    RunOptions ro;
    std::string run_out;
    auto* run_cmd = app.add_subcommand("run", "sample one graph and seed set and trace the process");
    run_cmd->add_option("--weights", ro.weights, "weight file")->required();
    run_cmd->add_option("--r", ro.r, "infection threshold")->required();
    run_cmd->add_option("--p0", ro.p0, "initial infection rate")->required();
    run_cmd->add_option("--seed", ro.seed, "seed")->required();
    run_cmd->add_flag("--restricted", ro.restricted, "restrict to the breeding ground");
    run_cmd->add_option("--cap", ro.cap, "only vertices lighter than this may be seeded");
    run_cmd->add_option("--floor", ro.floor, "seed every vertex at least this heavy");
    run_cmd->add_flag("--final-set", ro.final_set, "list the final infected set");
    run_cmd->add_option("-o,--out", run_out, "output JSON (stdout if omitted)");

    // sweep
    GenFlags sweep_gen;
    SweepConfig sweep_cfg;
    std::string sweep_config_path;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "grid of p0 multipliers times replicates");
    auto* config_opt = sweep->add_option("--config", sweep_config_path, "sweep config or sweep manifest (JSON)");
    std::vector<CLI::Option*> inline_flags = add_generator_flags(sweep, sweep_gen);
    inline_flags.push_back(sweep->add_option("--r", sweep_cfg.r, "infection threshold"));
    inline_flags.push_back(sweep->add_option("--multipliers", sweep_cfg.multipliers, "p0 / a_c_scale per cell")->delimiter(','));
    inline_flags.push_back(sweep->add_option("--replicates", sweep_cfg.replicates, "replicates per cell"));
    inline_flags.push_back(sweep->add_option("--seed", sweep_cfg.base_seed, "base seed"));
    inline_flags.push_back(sweep->add_option("--gamma", sweep_cfg.outbreak_fraction, "outbreak fraction"));
    inline_flags.push_back(sweep->add_option("--cap", sweep_cfg.init_weight_cap, "seed-weight cap"));
    inline_flags.push_back(sweep->add_option("--floor", sweep_cfg.init_weight_floor_all, "seed-everything floor"));
    for (auto* flag : inline_flags) flag->excludes(config_opt);
    sweep->add_option("-o,--out", sweep_out, "output prefix")->required();
    sweep->add_option("--threads", threads, "worker cap (default CLBP_THREADS or all cores)");

    // replay
    std::string replay_path;
    std::string replay_out;
    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("manifest", replay_path, "manifest file")->required();
    replay->add_option("-o,--out", replay_out, "output path (default: the recorded one)");
    replay->add_option("--threads", threads, "worker cap (default CLBP_THREADS or all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Context ctx{out, err, threads > 0 ? threads : default_threads()};
    try {
        if (*gen) {
            exec_gen(ctx, to_spec(gen_flags), gen_out);
        } else if (*analyze_cmd) {
            exec_analyze(ctx, an, an_out);
        } else if (*run_cmd) {
            exec_run(ctx, ro, run_out);
        } else if (*sweep) {
            if (!sweep_config_path.empty()) {
                exec_sweep(ctx, sweep_config_from_file(sweep_config_path), sweep_out, {sweep_config_path});
            } else {
                sweep_cfg.generator = to_spec(sweep_gen);
                exec_sweep(ctx, sweep_cfg, sweep_out, {});
            }
        } else if (*replay) {
            exec_replay(ctx, replay_path, replay_out);
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}

}  // namespace clbp::cli
