#include "clbp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clbp/error.hpp"
#include "summation.hpp"

namespace clbp {

namespace {

void require_threshold(int r) {
    if (r < 2) throw Error(Errc::InvalidParam, "infection threshold r must be >= 2, got " + std::to_string(r));
}

double raise(double w, double exponent) noexcept {
    if (exponent >= 0.0 && exponent <= 32.0 && exponent == std::floor(exponent)) {
        return detail::ipow(w, static_cast<int>(exponent));
    }
    return std::pow(w, exponent);
}

}  // namespace

WeightSequence::WeightSequence(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw Error(Errc::EmptySequence, "weight sequence has no vertices");
    for (double w : w_) {
        if (!(w >= 1.0) || !std::isfinite(w)) {
            throw Error(Errc::WeightBelowOne, "every weight must be a finite value >= 1, got " + std::to_string(w));
        }
    }
    std::sort(w_.begin(), w_.end());
    suffix_.assign(w_.size() + 1, 0.0);
    detail::CompensatedSum acc;
    for (std::size_t i = w_.size(); i-- > 0;) {
        acc.add(w_[i]);
        suffix_[i] = acc.value();
    }
}

std::size_t WeightSequence::first_at_least(double x) const noexcept {
    return static_cast<std::size_t>(std::lower_bound(w_.begin(), w_.end(), x) - w_.begin());
}

double WeightSequence::power_sum(std::size_t begin, std::size_t end, double exponent) const noexcept {
    detail::CompensatedSum acc;
    for (std::size_t i = begin; i < end; ++i) acc.add(raise(w_[i], exponent));
    return acc.value();
}

std::vector<std::size_t> WeightSequence::distinct_starts() const {
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (i == 0 || w_[i] != w_[i - 1]) starts.push_back(i);
    }
    return starts;
}

WeightSequence make_sequence(std::vector<double> weights) { return WeightSequence(std::move(weights)); }

WeightSequence gen_power_law(std::size_t n, double exponent, double scale) {
    if (n == 0) throw Error(Errc::InvalidParam, "power law needs n >= 1");
    if (!(exponent > 0.0 && exponent < 1.0)) throw Error(Errc::InvalidParam, "power law exponent must lie in (0, 1)");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(Errc::InvalidParam, "power law scale must be positive");
    std::vector<double> w(n);
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        w[i - 1] = std::max(1.0, scale * std::pow(nd / static_cast<double>(i), exponent));
    }
    return WeightSequence(std::move(w));
}

WeightSequence gen_uniform(std::size_t n, double weight) {
    if (n == 0) throw Error(Errc::InvalidParam, "uniform sequence needs n >= 1");
    return WeightSequence(std::vector<double>(n, weight));
}

WeightSequence gen_example_sequence(ExampleVariant variant, double w_target) {
    if (!(w_target > 0.0) || !std::isfinite(w_target)) {
        throw Error(Errc::TargetTooSmall, "target total weight must be positive");
    }
    const double top_weight = std::pow(w_target, variant == ExampleVariant::A ? 7.0 / 12.0 : 3.0 / 4.0);
    const double top_count = std::floor(std::pow(w_target, 1.0 / 9.0));
    const double mid_weight = std::cbrt(w_target);
    const double mid_count = std::floor(std::pow(w_target, 2.0 / 3.0) / 20.0);
    const double ones = std::floor(w_target - top_count * top_weight - mid_count * mid_weight);
    if (top_count < 1.0 || mid_count < 1.0 || ones < 1.0) {
        throw Error(Errc::TargetTooSmall,
                    "W_target = " + std::to_string(w_target) + " leaves one of the three weight bands empty");
    }
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(top_count + mid_count + ones));
    w.insert(w.end(), static_cast<std::size_t>(ones), 1.0);
    w.insert(w.end(), static_cast<std::size_t>(mid_count), mid_weight);
    w.insert(w.end(), static_cast<std::size_t>(top_count), top_weight);
    return WeightSequence(std::move(w));
}

double size_biased_tail(const WeightSequence& ws, double x) {
    return ws.suffix_weight(ws.first_at_least(x)) / ws.total_weight();
}

double heavy_bound(const WeightSequence& ws, int r) {
    require_threshold(r);
    // |V_{>=x}| is the constant k on each interval (d_{j-1}, d_j] between
    // consecutive distinct weights, and the requirement k >= (W/(4x^2))^r
    // there reads x >= sqrt(W)/2 * k^{-1/(2r)}. Intervals are scanned left to
    // right; the first one containing its own threshold point gives the min.
    const long double total = ws.total_weight();
    const long double half_root = 0.5L * std::sqrt(total);
    for (std::size_t start : ws.distinct_starts()) {
        const long double d = ws[start];
        const auto k = static_cast<long double>(ws.size() - start);
        const long double needed = std::pow(total / (4.0L * d * d), static_cast<long double>(r));
        if (k >= needed) {
            const long double x = half_root * std::pow(k, -1.0L / (2.0L * r));
            return static_cast<double>(std::min(x, d));
        }
    }
    return ws.max_weight() + 1.0;
}

double candidate_threshold_sparse(const WeightSequence& ws, int r) {
    const double psi = heavy_bound(ws, r);
    const double sparse = ws.power_sum(0, ws.first_at_least(psi), r + 1);
    if (sparse <= 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(ws.total_weight() / sparse, 1.0 / (r - 1));
}

std::optional<double> candidate_threshold_dense(const WeightSequence& ws, int r) {
    const double psi = heavy_bound(ws, r);
    if (psi > ws.max_weight()) return std::nullopt;
    const double dense = ws.power_sum(ws.first_at_least(psi), ws.size(), r);
    return std::pow(1.0 / dense, 1.0 / r);
}

ThresholdReport threshold_report(const WeightSequence& ws, int r) {
    ThresholdReport report;
    report.psi = heavy_bound(ws, r);
    report.heavy_count = ws.count_at_least(report.psi);
    report.p_sparse = candidate_threshold_sparse(ws, r);
    report.p_dense = candidate_threshold_dense(ws, r);
    report.dense_exists = report.p_dense.has_value();
    report.a_c_scale = report.p_dense ? std::min(report.p_sparse, *report.p_dense) : report.p_sparse;
    return report;
}

double restricted_moment(const WeightSequence& ws, double a, double b, int theta) {
    if (!(a > 0.0 && a < b)) throw Error(Errc::InvalidRange, "restricted moment needs 0 < a < b");
    if (theta < 2) throw Error(Errc::InvalidRange, "restricted moment needs theta >= 2");
    return ws.power_sum(ws.first_at_least(a), ws.first_at_least(b), theta);
}

TailCheck check_supercritical_tail(const WeightSequence& ws, double C, double C1) {
    if (!(C > 0.0 && C1 > 0.0)) throw Error(Errc::InvalidParam, "tail constants C and C1 must be positive");
    const double total = ws.total_weight();
    // On (d_{j-1}, d_j] the tail is constant and C/x is largest at the left
    // end, so the infimum of each interval (clipped to C1) is the only point
    // that needs checking.
    double prev = 0.0;
    for (std::size_t start : ws.distinct_starts()) {
        const double d = ws[start];
        if (d >= C1) {
            const double tail = ws.suffix_weight(start) / total;
            const double point = C1 > prev ? C1 : prev;
            if (!(tail >= C / point)) return {false, point};
        }
        prev = d;
    }
    return {};
}

TailCheck check_subcritical_tail(const WeightSequence& ws, double c, double c1, double h, bool allow_any_constant) {
    if (!(c > 0.0)) throw Error(Errc::InvalidParam, "tail constant c must be positive");
    if (!allow_any_constant && !(c < 1.0 / 30.0)) {
        throw Error(Errc::GuardViolated, "subcritical tail constant must satisfy c < 1/30 (override to explore)");
    }
    if (!(c1 > 0.0 && h > 0.0)) throw Error(Errc::InvalidParam, "c1 and h must be positive");
    if (c1 > h) return {};
    // The tail jumps up at each weight value, so c/f is hardest to satisfy at
    // the weights themselves and at the ends of the range.
    auto violates = [&](double f) { return !(size_biased_tail(ws, f) <= c / f); };
    if (violates(c1)) return {false, c1};
    for (std::size_t start : ws.distinct_starts()) {
        const double d = ws[start];
        if (d <= c1) continue;
        if (d > h) break;
        if (violates(d)) return {false, d};
    }
    if (violates(h)) return {false, h};
    return {};
}

BreedingPlan breeding_plan(const WeightSequence& ws, int r, double p0) {
    require_threshold(r);
    if (!(p0 > 0.0 && p0 <= 1.0)) throw Error(Errc::InvalidParam, "breeding plan needs 0 < p0 <= 1");
    const double psi = heavy_bound(ws, r);
    const std::size_t band_end = ws.first_at_least(psi);
    if (band_end == 0) throw Error(Errc::EmptyBand, "no vertex is lighter than the heavy bound");

    const double sparse = ws.power_sum(0, band_end, r + 1);
    const std::vector<std::size_t> starts = ws.distinct_starts();

    BreedingPlan plan;
    std::size_t band_begin = 0;
    detail::CompensatedSum acc;
    std::size_t group_end = band_end;
    for (auto it = std::upper_bound(starts.begin(), starts.end(), band_end - 1); it != starts.begin();) {
        --it;
        for (std::size_t i = *it; i < group_end; ++i) acc.add(detail::ipow(ws[i], r + 1));
        group_end = *it;
        if (acc.value() >= 0.5 * sparse) {
            band_begin = *it;
            break;
        }
    }
    plan.f0 = ws[band_begin];

    std::vector<Vertex> prime;
    for (std::size_t i = band_begin; i < band_end; i += 2) prime.push_back(static_cast<Vertex>(i));
    if (prime.back() != band_end - 1) prime.push_back(static_cast<Vertex>(band_end - 1));
    plan.ground_prime_size = prime.size();

    if (r == 2) {
        const double cap = 9.0 * ws.total_weight() * ws.total_weight();
        detail::CompensatedSum fourth;
        for (Vertex v : prime) {
            detail::CompensatedSum trial = fourth;
            trial.add(detail::ipow(ws[v], 4));
            if (trial.value() > cap) break;
            fourth = trial;
            plan.ground.push_back(v);
        }
    } else {
        plan.ground = std::move(prime);
    }

    const double p_sparse = candidate_threshold_sparse(ws, r);
    plan.mu = p0 / p_sparse;
    plan.phi0 = std::min(plan.f0, static_cast<double>(ws.size()) * p0 / std::sqrt(plan.mu));
    return plan;
}

double nucleus_bound_sparse(const WeightSequence& ws, int r, double mu, double eta_exponent) {
    require_threshold(r);
    if (!(mu > 1.0)) throw Error(Errc::MuTooSmall, "sparse nucleus bound needs mu > 1 (log mu > 0)");
    if (ws.size() < static_cast<std::size_t>(r)) throw Error(Errc::InvalidParam, "sequence has fewer than r vertices");
    const double log_mu = std::log(mu);
    const double psi_prime = heavy_bound(ws, r) * std::pow(log_mu, -0.25);
    const double eta = std::pow(log_mu, eta_exponent);
    const double extreme = ws.total_weight() / ws[ws.size() - static_cast<std::size_t>(r)];
    return psi_prime * eta > extreme ? extreme : psi_prime;
}

std::string_view to_string(DenseNucleusCase c) noexcept {
    switch (c) {
        case DenseNucleusCase::ExtremeWeight: return "extreme_weight";
        case DenseNucleusCase::HeavyBound: return "heavy_bound";
        case DenseNucleusCase::Neither: return "neither";
    }
    return "neither";
}

DenseNucleusBound nucleus_bound_dense(const WeightSequence& ws, int r, double mu_d) {
    require_threshold(r);
    if (!(mu_d > 1.0)) throw Error(Errc::MuTooSmall, "dense nucleus bound needs mu_d > 1 (log mu_d > 0)");
    if (ws.size() < static_cast<std::size_t>(r)) throw Error(Errc::InvalidParam, "sequence has fewer than r vertices");
    const double psi = heavy_bound(ws, r);
    if (psi > ws.max_weight()) return {};
    const double log_mu = std::log(mu_d);
    const double root_w = std::sqrt(ws.total_weight());
    const double w_top = ws[ws.size() - static_cast<std::size_t>(r)];
    if (w_top > root_w * std::pow(log_mu, 1.0 / 16.0)) {
        return {ws.total_weight() / w_top, DenseNucleusCase::ExtremeWeight};
    }
    if (psi <= root_w * std::pow(log_mu, -1.0 / 8.0)) return {psi, DenseNucleusCase::HeavyBound};
    return {};
}

LayerPlan layer_plan(const WeightSequence& ws, int r, double C, double C1, double alpha, double psi_K,
                     bool allow_small_constant) {
    require_threshold(r);
    if (!(C > 0.0 && C1 > 0.0 && alpha > 0.0)) throw Error(Errc::InvalidParam, "C, C1 and alpha must be positive");
    if (!(psi_K > 0.0)) throw Error(Errc::InvalidParam, "nucleus bound psi_K must be positive");
    const double m = std::min(alpha, 0.5);
    if (!allow_small_constant && C < 64.0 * r / (m * m * m)) {
        throw Error(Errc::GuardViolated, "layer constant must satisfy C >= 64 r min{alpha,1/2}^-3 (override to explore)");
    }

    LayerPlan plan;
    plan.psi_K = psi_K;
    plan.C = C;
    plan.C1 = C1;
    plan.alpha = alpha;
    plan.C_prime = C * m / 2.0;

    const double stop = 2.0 * std::max(C1, ws.lambda());
    plan.bounds.push_back(std::min(psi_K, ws.total_weight() / ws.max_weight()));
    while (plan.bounds.back() >= stop) {
        const double current = plan.bounds.back();
        const double tail = size_biased_tail(ws, current);
        const double next = tail > 0.0 ? plan.C_prime / tail : std::numeric_limits<double>::infinity();
        if (!(next < current)) {
            const TailCheck check = check_supercritical_tail(ws, C, C1);
            const double witness = check.witness.value_or(current);
            throw DivergentRecursionError("layer bound " + std::to_string(plan.bounds.size()) + " did not decrease (" +
                                              std::to_string(current) + " -> " + std::to_string(next) +
                                              "); tail condition fails at x = " + std::to_string(witness),
                                          witness);
        }
        plan.bounds.push_back(next);
    }
    plan.i_star = plan.bounds.size() - 1;

    const double ratio = plan.C_prime / C;
    double delta = 0.25;
    double eps = 0.0;
    for (std::size_t i = 0; i <= plan.i_star + 1; ++i) {
        eps += delta;
        plan.deltas.push_back(delta);
        plan.epsilons.push_back(eps);
        delta *= ratio;
    }
    return plan;
}

}  // namespace clbp
