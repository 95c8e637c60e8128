#include "clbp/rng.hpp"

#include <cmath>

#include "clbp/error.hpp"

namespace clbp {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::EmptySequence: return "EmptySequence";
        case Errc::WeightBelowOne: return "WeightBelowOne";
        case Errc::InvalidParam: return "InvalidParam";
        case Errc::TargetTooSmall: return "TargetTooSmall";
        case Errc::InvalidRange: return "InvalidRange";
        case Errc::EmptyBand: return "EmptyBand";
        case Errc::MuTooSmall: return "MuTooSmall";
        case Errc::DivergentRecursion: return "DivergentRecursion";
        case Errc::SelfLoop: return "SelfLoop";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::EmptyNucleusBand: return "EmptyNucleusBand";
        case Errc::NotSubcritical: return "NotSubcritical";
        case Errc::NoHeavyVertices: return "NoHeavyVertices";
        case Errc::GuardViolated: return "GuardViolated";
        case Errc::Parse: return "Parse";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t acc = mix64(base);
    for (std::uint64_t tag : path) {
        acc = mix64(acc ^ mix64(tag + 0x9E3779B97F4A7C15ULL));
    }
    return acc;
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection of the biased low zone.
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (low < threshold) {
            x = (*this)();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t CounterRng::geometric(double p) noexcept {
    constexpr double kCap = 0x1.0p62;
    const double skip = std::floor(std::log(uniform_pos()) / std::log1p(-p));
    if (!(skip < kCap)) return static_cast<std::uint64_t>(kCap);
    return static_cast<std::uint64_t>(skip);
}

}  // namespace clbp
