#pragma once

#include <cmath>

namespace clbp::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double ipow(double x, int k) noexcept {
    double result = 1.0;
    for (int i = 0; i < k; ++i) result *= x;
    return result;
}

}  // namespace clbp::detail
