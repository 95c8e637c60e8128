#include "clbp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "clbp/error.hpp"
#include "clbp/graph.hpp"
#include "clbp/io.hpp"
#include "clbp/percolation.hpp"
#include "clbp/rng.hpp"

namespace clbp {

namespace {

enum Stream : std::uint64_t { kGraphStream = 0, kSeedStream = 1 };

double cell_p0(double multiplier, double a_c_scale) {
    if (multiplier == 0.0) return 0.0;
    return std::min(1.0, multiplier * a_c_scale);
}

}  // namespace

WeightSequence generate(const GeneratorSpec& spec) {
    switch (spec.model) {
        case GeneratorModel::PowerLaw: return gen_power_law(spec.n, spec.exponent, spec.scale);
        case GeneratorModel::ExampleA: return gen_example_sequence(ExampleVariant::A, spec.w_target);
        case GeneratorModel::ExampleB: return gen_example_sequence(ExampleVariant::B, spec.w_target);
        case GeneratorModel::Uniform: return gen_uniform(spec.n, spec.weight);
        case GeneratorModel::File: return read_weight_file(spec.path);
    }
    throw Error(Errc::InvalidParam, "unknown generator model");
}

void SweepConfig::validate() const {
    if (r < 2) throw Error(Errc::InvalidParam, "infection threshold r must be >= 2");
    if (replicates < 1) throw Error(Errc::InvalidParam, "replicates must be >= 1");
    if (multipliers.empty()) throw Error(Errc::InvalidParam, "sweep needs at least one p0 multiplier");
    for (double m : multipliers) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw Error(Errc::InvalidParam, "p0 multipliers must be finite and >= 0");
    }
    if (!(outbreak_fraction > 0.0 && outbreak_fraction < 1.0)) {
        throw Error(Errc::InvalidParam, "outbreak fraction must lie in (0, 1)");
    }
}

SweepResult run_sweep(const SweepConfig& cfg, unsigned threads) { return run_sweep(generate(cfg.generator), cfg, threads); }

SweepResult run_sweep(const WeightSequence& ws, const SweepConfig& cfg, unsigned threads) {
    cfg.validate();
    SweepResult result;
    result.report = threshold_report(ws, cfg.r);

    const std::size_t cells = cfg.multipliers.size();
    const std::size_t tasks = cells * cfg.replicates;
    result.rows.resize(tasks);

    auto run_task = [&](std::size_t task) {
        const std::size_t cell = task / cfg.replicates;
        const std::size_t rep = task % cfg.replicates;
        InfectionParams params;
        params.r = cfg.r;
        params.p0 = cell_p0(cfg.multipliers[cell], result.report.a_c_scale);
        params.init_weight_cap = cfg.init_weight_cap;
        params.init_weight_floor_all = cfg.init_weight_floor_all;

        const Graph g = sample_graph(ws, derive_seed(cfg.base_seed, {cell, rep, kGraphStream}));
        const VertexSet a0 = sample_initial(ws, params, derive_seed(cfg.base_seed, {cell, rep, kSeedStream}));
        const Trace trace = run_bootstrap(g, a0, cfg.r);

        SweepRow& row = result.rows[task];
        row.n = ws.size();
        row.p0 = params.p0;
        row.multiplier = cfg.multipliers[cell];
        row.replicate = rep;
        row.initial_size = trace.initial_set_size;
        row.final_size = trace.final_set.size();
        row.final_fraction = static_cast<double>(row.final_size) / static_cast<double>(row.n);
        row.infected_weight = trace.final_weight();
        row.rounds = trace.steps_taken;
        row.outbreak = row.final_fraction > cfg.outbreak_fraction;
        if (row.initial_size > row.final_size || row.final_size > row.n) {
            throw std::logic_error("sweep row violates |A_0| <= |A_F| <= n");
        }
    };

    const unsigned workers = static_cast<unsigned>(std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, tasks));
    if (workers == 1) {
        for (std::size_t t = 0; t < tasks; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < tasks; t = next++) {
                    try {
                        run_task(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = tasks;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    for (std::size_t cell = 0; cell < cells; ++cell) {
        const auto first = result.rows.begin() + static_cast<std::ptrdiff_t>(cell * cfg.replicates);
        const auto last = first + static_cast<std::ptrdiff_t>(cfg.replicates);
        std::vector<double> fractions;
        std::vector<double> sizes;
        std::size_t outbreaks = 0;
        for (auto it = first; it != last; ++it) {
            fractions.push_back(it->final_fraction);
            sizes.push_back(static_cast<double>(it->final_size));
            outbreaks += it->outbreak ? 1 : 0;
        }
        CellSummary summary;
        summary.multiplier = cfg.multipliers[cell];
        summary.p0 = first->p0;
        summary.replicates = cfg.replicates;
        summary.median_fraction = quantile(fractions, 0.5);
        summary.q1_fraction = quantile(fractions, 0.25);
        summary.q3_fraction = quantile(fractions, 0.75);
        summary.median_final_size = quantile(sizes, 0.5);
        summary.outbreak_frequency = static_cast<double>(outbreaks) / static_cast<double>(cfg.replicates);
        result.cells.push_back(summary);
    }
    return result;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(Errc::InvalidParam, "quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::optional<double> estimate_transition(const SweepResult& result) {
    if (result.cells.size() < 2) throw Error(Errc::InvalidParam, "transition estimate needs at least two grid cells");
    std::vector<CellSummary> cells;
    for (const auto& c : result.cells) {
        if (c.p0 > 0.0) cells.push_back(c);
    }
    std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.p0 < b.p0; });
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
        const double f0 = cells[i].outbreak_frequency;
        const double f1 = cells[i + 1].outbreak_frequency;
        if (f0 < 0.5 && f1 >= 0.5) {
            const double lo = std::log(cells[i].p0);
            const double hi = std::log(cells[i + 1].p0);
            return std::exp(lo + (0.5 - f0) / (f1 - f0) * (hi - lo));
        }
    }
    return std::nullopt;
}

double subcritical_weight_check(const WeightSequence& ws, int r, double p0, double mu, std::size_t replicates,
                                std::uint64_t seed) {
    if (!(mu > 0.0)) throw Error(Errc::InvalidParam, "mu must be positive");
    if (replicates < 1) throw Error(Errc::InvalidParam, "replicates must be >= 1");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw Error(Errc::InvalidParam, "initial infection rate must lie in [0, 1]");
    const ThresholdReport report = threshold_report(ws, r);
    const double ceiling = report.p_sparse / mu;
    if (p0 > ceiling * (1.0 + 1e-12)) {
        throw Error(Errc::NotSubcritical, "p0 = " + std::to_string(p0) + " exceeds p_s/mu = " + std::to_string(ceiling));
    }
    if (p0 == 0.0) return 1.0;

    const std::size_t light_end = ws.first_at_least(report.psi);
    std::vector<bool> light(ws.size(), false);
    std::fill(light.begin(), light.begin() + static_cast<std::ptrdiff_t>(light_end), true);
    const double bound = std::sqrt(mu) * ws.total_weight() * p0;

    std::size_t passed = 0;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
        const Graph g = sample_graph(ws, derive_seed(seed, {rep, kGraphStream})).induced(light);
        VertexSet a0 = sample_initial(ws, {r, p0, std::nullopt, std::nullopt}, derive_seed(seed, {rep, kSeedStream}));
        std::erase_if(a0, [&](Vertex v) { return v >= light_end; });
        const Trace trace = run_bootstrap(g, a0, r);
        if (trace.final_weight() <= bound) ++passed;
    }
    return static_cast<double>(passed) / static_cast<double>(replicates);
}

bool dense_cascade_check(const WeightSequence& ws, int r, std::size_t seed_count, std::uint64_t seed) {
    if (seed_count < 1) throw Error(Errc::InvalidParam, "dense cascade needs at least one seed");
    const double psi = heavy_bound(ws, r);
    const std::size_t heavy_begin = ws.first_at_least(psi);
    const std::size_t heavy = ws.size() - heavy_begin;
    if (heavy == 0) throw Error(Errc::NoHeavyVertices, "no vertex reaches the heavy bound");

    std::vector<bool> keep(ws.size(), false);
    std::fill(keep.begin() + static_cast<std::ptrdiff_t>(heavy_begin), keep.end(), true);
    const Graph g = sample_graph(ws, derive_seed(seed, {kGraphStream})).induced(keep);

    std::vector<Vertex> pool(heavy);
    for (std::size_t i = 0; i < heavy; ++i) pool[i] = static_cast<Vertex>(heavy_begin + i);
    CounterRng rng(derive_seed(seed, {kSeedStream}));
    const std::size_t picks = std::min(seed_count, heavy);
    for (std::size_t i = 0; i < picks; ++i) {
        std::swap(pool[i], pool[i + rng.below(heavy - i)]);
    }
    VertexSet a0(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(picks));
    std::sort(a0.begin(), a0.end());
    return run_bootstrap(g, a0, r).final_set.size() == heavy;
}

}  // namespace clbp
