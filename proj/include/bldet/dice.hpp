#pragma once

#include <vector>

#include "bldet/common.hpp"
#include "bldet/raster.hpp"

namespace bldet {

// Parameters of the modified dice coefficient: an inner mask M(a_inner,
// b_inner) on which the prediction is evaluated, a surrounding mask
// M(a_outer, b_outer) on whose ring the groundtruth is substituted for the
// prediction, and a smoothing constant gamma. Bounds are 1-based inclusive.
struct DiceMaskSpec {
    int n;
    int a_inner;
    int b_inner;
    int a_outer;
    int b_outer;
    double gamma = 1.0;

    void validate() const {
        if (!(1 <= a_outer && a_outer <= a_inner && a_inner <= b_inner && b_inner <= b_outer && b_outer <= n))
            throw InvalidMaskError("dice mask bounds must satisfy 1 <= a_outer <= a_inner <= b_inner <= b_outer <= n");
        if (!(gamma > 0.0)) throw InvalidMaskError("gamma must be positive");
    }

    static DiceMaskSpec full(int n, double gamma = 1.0) { return {n, 1, n, 1, n, gamma}; }
};

// Square filter mask: m_ij = 1 iff a <= i,j <= b, 1-based inclusive.
inline ProbabilityGrid make_mask(int n, int a, int b) {
    if (!(1 <= a && a <= b && b <= n)) throw InvalidMaskError("mask bounds must satisfy 1 <= a <= b <= n");
    ProbabilityGrid m(n, n, 0.0);
    for (int i = a; i <= b; ++i)
        for (int j = a; j <= b; ++j) m.at(j - 1, i - 1) = 1.0;
    return m;
}

namespace detail {

struct DiceSums {
    double y_sum;     // sum of Y over the surrounding mask
    double h_sum;     // sum of the substituted prediction over the surrounding mask
    double prod_sum;  // sum of their elementwise product
};

// The substituted prediction reads H on the inner mask, the groundtruth on
// the ring between inner and surrounding masks, and 0 elsewhere; H outside
// the inner mask never enters any sum.
inline DiceSums dice_sums(const ProbabilityGrid& prediction, const ProbabilityGrid& groundtruth, const DiceMaskSpec& spec) {
    spec.validate();
    if (prediction.width() != spec.n || prediction.height() != spec.n || groundtruth.width() != spec.n ||
        groundtruth.height() != spec.n)
        throw DimensionError("dice inputs must be n x n grids matching the mask spec");

    DiceSums s{0.0, 0.0, 0.0};
    for (int i = spec.a_outer; i <= spec.b_outer; ++i) {
        for (int j = spec.a_outer; j <= spec.b_outer; ++j) {
            const bool inner = i >= spec.a_inner && i <= spec.b_inner && j >= spec.a_inner && j <= spec.b_inner;
            const double y = groundtruth.at(j - 1, i - 1);
            const double h = inner ? prediction.at(j - 1, i - 1) : y;
            s.y_sum += y;
            s.h_sum += h;
            s.prod_sum += y * h;
        }
    }
    return s;
}

}  // namespace detail

inline double modified_dice(const ProbabilityGrid& prediction, const ProbabilityGrid& groundtruth, const DiceMaskSpec& spec) {
    const auto s = detail::dice_sums(prediction, groundtruth, spec);
    return (2.0 * s.prod_sum + spec.gamma) / (s.y_sum + s.h_sum + spec.gamma);
}

inline double dice_error(const ProbabilityGrid& prediction, const ProbabilityGrid& groundtruth, const DiceMaskSpec& spec) {
    return 1.0 - modified_dice(prediction, groundtruth, spec);
}

// Analytic partial derivatives dD/dH_ij, row-major n x n. Entries outside the
// inner mask are exactly zero.
inline std::vector<double> dice_gradient(const ProbabilityGrid& prediction, const ProbabilityGrid& groundtruth,
                                         const DiceMaskSpec& spec) {
    const auto s = detail::dice_sums(prediction, groundtruth, spec);
    const double denom = s.y_sum + s.h_sum + spec.gamma;
    const double numer = 2.0 * s.prod_sum + spec.gamma;

    std::vector<double> grad(static_cast<std::size_t>(spec.n) * spec.n, 0.0);
    for (int i = spec.a_inner; i <= spec.b_inner; ++i) {
        for (int j = spec.a_inner; j <= spec.b_inner; ++j) {
            const double y = groundtruth.at(j - 1, i - 1);
            grad[static_cast<std::size_t>(i - 1) * spec.n + (j - 1)] = (2.0 * y * denom - numer) / (denom * denom);
        }
    }
    return grad;
}

}  // namespace bldet
