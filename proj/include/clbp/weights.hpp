#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace clbp {

using Vertex = std::uint32_t;

/// Vertex weights sorted ascending (vertex i has the i-th smallest weight),
/// with the total weight and weight suffix sums cached at construction.
/// Immutable; every query is const and thread-safe.
class WeightSequence {
public:
    /// Sorts `weights`. Throws EmptySequence or WeightBelowOne.
    explicit WeightSequence(std::vector<double> weights);

    std::span<const double> weights() const noexcept { return w_; }
    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t i) const noexcept { return w_[i]; }
    double min_weight() const noexcept { return w_.front(); }
    double max_weight() const noexcept { return w_.back(); }

    /// W, summed with compensation.
    double total_weight() const noexcept { return suffix_.front(); }
    /// W / n.
    double lambda() const noexcept { return total_weight() / static_cast<double>(size()); }

    /// Index of the lightest vertex with weight >= x (size() if none).
    std::size_t first_at_least(double x) const noexcept;
    std::size_t count_at_least(double x) const noexcept { return size() - first_at_least(x); }

    /// Sum of w over indices [begin, size()).
    double suffix_weight(std::size_t begin) const noexcept { return suffix_[begin]; }

    /// Compensated sum of w^exponent over the index range [begin, end).
    double power_sum(std::size_t begin, std::size_t end, double exponent) const noexcept;

    /// Start index of every run of equal weights, ascending.
    std::vector<std::size_t> distinct_starts() const;

private:
    std::vector<double> w_;
    std::vector<double> suffix_;
};

WeightSequence make_sequence(std::vector<double> weights);

/// w_i = max(1, scale * (n/i)^exponent) for i = 1..n. exponent = 1/2 is the
/// borderline exponent-3 power law; larger exponents have heavier tails.
WeightSequence gen_power_law(std::size_t n, double exponent, double scale);

WeightSequence gen_uniform(std::size_t n, double weight);

enum class ExampleVariant { A, B };

/// Three-band sequence: floor(W^{1/9}) vertices of weight W^{7/12} (A) or
/// W^{3/4} (B), floor(W^{2/3}/20) of weight W^{1/3}, and weight-1 vertices
/// filling the remainder so the realized total is within 1 of `w_target`.
WeightSequence gen_example_sequence(ExampleVariant variant, double w_target);

/// P[W* >= x] = sum_{w_u >= x} w_u / W.
double size_biased_tail(const WeightSequence& ws, double x);

/// psi = min{x > 0 : |V_{>=x}| >= (W / (4x^2))^r}, or w_n + 1 if no such x.
double heavy_bound(const WeightSequence& ws, int r);

/// (W / sum_{w_u < psi} w_u^{r+1})^{1/(r-1)}. +infinity when no vertex is
/// lighter than psi.
double candidate_threshold_sparse(const WeightSequence& ws, int r);

/// (1 / sum_{w_u >= psi} w_u^r)^{1/r}; empty when psi > w_n.
std::optional<double> candidate_threshold_dense(const WeightSequence& ws, int r);

struct ThresholdReport {
    double psi = 0.0;
    std::size_t heavy_count = 0;
    double p_sparse = 0.0;
    std::optional<double> p_dense;
    double a_c_scale = 0.0;
    bool dense_exists = false;
};

ThresholdReport threshold_report(const WeightSequence& ws, int r);

/// sum_{a <= w_u < b} w_u^theta. Throws InvalidRange unless 0 < a < b and theta >= 2.
double restricted_moment(const WeightSequence& ws, double a, double b, int theta);

struct TailCheck {
    bool holds = true;
    /// Smallest point of the checked range where the inequality fails. For the
    /// supercritical check this is the infimum of the first violating interval.
    std::optional<double> witness;
};

/// P[W* >= x] >= C/x for all x in [C1, w_n].
TailCheck check_supercritical_tail(const WeightSequence& ws, double C, double C1);

/// P[W* >= f] <= c/f for all f in [c1, h]. Requires 0 < c < 1/30 unless
/// `allow_any_constant` is set (throws GuardViolated otherwise).
TailCheck check_subcritical_tail(const WeightSequence& ws, double c, double c1, double h,
                                 bool allow_any_constant = false);

struct BreedingPlan {
    double f0 = 0.0;
    std::vector<Vertex> ground;          ///< S, ascending
    std::size_t ground_prime_size = 0;   ///< |S'|
    double phi0 = 0.0;
    double mu = 0.0;
};

/// Breeding ground for the sparse process at initial rate p0.
BreedingPlan breeding_plan(const WeightSequence& ws, int r, double p0);

/// Sparse nucleus weight bound for mu = p0/p_s > 1, with eta = (log mu)^eta_exponent.
double nucleus_bound_sparse(const WeightSequence& ws, int r, double mu, double eta_exponent = 0.125);

enum class DenseNucleusCase { ExtremeWeight, HeavyBound, Neither };

std::string_view to_string(DenseNucleusCase c) noexcept;

struct DenseNucleusBound {
    std::optional<double> bound;
    DenseNucleusCase regime = DenseNucleusCase::Neither;
};

/// Dense nucleus weight bound for mu_d = p0/p_d > 1. Undefined (Neither)
/// outside its two cases and whenever there are no heavy vertices.
DenseNucleusBound nucleus_bound_dense(const WeightSequence& ws, int r, double mu_d);

struct LayerPlan {
    double psi_K = 0.0;
    double C = 0.0;
    double C1 = 0.0;
    double alpha = 0.0;
    double C_prime = 0.0;
    std::vector<double> bounds;    ///< psi_1 .. psi_{i*+1}
    std::vector<double> deltas;    ///< delta_0 .. delta_{i*+1}
    std::vector<double> epsilons;  ///< eps_0 .. eps_{i*+1}
    std::size_t i_star = 0;
};

/// Layer weight bounds psi_{i+1} = C'/P[W* >= psi_i], iterated while
/// psi_i >= 2 max{C1, lambda}. Requires C >= 64 r min{alpha,1/2}^{-3} unless
/// `allow_small_constant` is set. Throws DivergentRecursionError if a step
/// fails to decrease.
LayerPlan layer_plan(const WeightSequence& ws, int r, double C, double C1, double alpha, double psi_K,
                     bool allow_small_constant = false);

}  // namespace clbp
