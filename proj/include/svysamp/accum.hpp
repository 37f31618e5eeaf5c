#pragma once

#include <cmath>
#include <cstddef>

namespace svysamp {

/// Neumaier compensated accumulator. All estimator formulas and Monte Carlo
/// reductions go through this so the desk-scale 1e-12 oracle tolerances are
/// reachable and so that aggregation in a fixed order is exactly reproducible.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <typename Range>
double compensated_total(const Range& values) {
    NeumaierSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

} // namespace svysamp
