#include <doctest.h>

#include <cmath>
#include <vector>

#include "bldet/common.hpp"
#include "bldet/dice.hpp"

using namespace bldet;

namespace {

ProbabilityGrid random_grid(Rng& rng, int n, double lo = 0.0, double hi = 1.0) {
    ProbabilityGrid g(n, n, 0.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) g.at(x, y) = rng.in(lo, hi);
    return g;
}

ProbabilityGrid random_binary(Rng& rng, int n, double density) {
    ProbabilityGrid g(n, n, 0.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) g.at(x, y) = rng.chance(density) ? 1.0 : 0.0;
    return g;
}

double count_ones(const ProbabilityGrid& g) {
    double c = 0.0;
    for (double v : g.values()) c += v;
    return c;
}

// Plain gamma-smoothed dice restricted to a square sub-window, the
// independent route for the mask collapse checks.
double plain_smoothed_dice(const ProbabilityGrid& h, const ProbabilityGrid& y, int a, int b, double gamma) {
    double inter = 0.0, hs = 0.0, ys = 0.0;
    for (int i = a; i <= b; ++i)
        for (int j = a; j <= b; ++j) {
            inter += h.at(j - 1, i - 1) * y.at(j - 1, i - 1);
            hs += h.at(j - 1, i - 1);
            ys += y.at(j - 1, i - 1);
        }
    return (2.0 * inter + gamma) / (hs + ys + gamma);
}

}  // namespace

TEST_CASE("make_mask") {
    const auto full = make_mask(8, 1, 8);
    CHECK(count_ones(full) == 64.0);

    const auto inner = make_mask(160, 40, 120);
    CHECK(count_ones(inner) == 6561.0);  // 81 x 81

    const auto central = make_mask(3, 2, 2);
    CHECK(count_ones(central) == 1.0);
    CHECK(central.at(1, 1) == 1.0);

    CHECK_THROWS_AS(make_mask(3, 2, 1), InvalidMaskError);
    CHECK_THROWS_AS(make_mask(3, 1, 4), InvalidMaskError);
    CHECK_THROWS_AS(make_mask(3, 0, 2), InvalidMaskError);
}

TEST_CASE("dice mask spec validation") {
    CHECK_THROWS_AS((DiceMaskSpec{4, 1, 4, 2, 4, 1.0}.validate()), InvalidMaskError);  // a_outer > a_inner
    CHECK_THROWS_AS((DiceMaskSpec{4, 2, 3, 1, 4, 0.0}.validate()), InvalidMaskError);  // gamma
    DiceMaskSpec{4, 2, 3, 1, 4, 1.0}.validate();
}

TEST_CASE("modified_dice perfect and empty cases") {
    Rng rng(5);
    const auto spec = DiceMaskSpec::full(6, 1.0);
    const auto y = random_binary(rng, 6, 0.4);
    CHECK(modified_dice(y, y, spec) == doctest::Approx(1.0));

    const ProbabilityGrid zeros(6, 6, 0.0);
    CHECK(modified_dice(zeros, zeros, spec) == doctest::Approx(1.0));  // gamma / gamma
}

TEST_CASE("modified_dice ring substitution") {
    // n=4, inner M(2,3), surrounding M(1,4), Y all ones
    const DiceMaskSpec spec{4, 2, 3, 1, 4, 1.0};
    const ProbabilityGrid y(4, 4, 1.0);

    ProbabilityGrid h(4, 4, 0.0);
    h.at(1, 1) = h.at(2, 1) = h.at(1, 2) = h.at(2, 2) = 1.0;  // ones on the inner 2x2 only
    CHECK(modified_dice(h, y, spec) == doctest::Approx(1.0));

    const ProbabilityGrid h_zero(4, 4, 0.0);
    CHECK(modified_dice(h_zero, y, spec) == doctest::Approx(25.0 / 29.0));

    CHECK_THROWS_AS(modified_dice(ProbabilityGrid(5, 5, 0.0), y, spec), DimensionError);
}

TEST_CASE("dice_error") {
    Rng rng(6);
    const auto spec = DiceMaskSpec::full(4, 1.0);
    const auto y = random_binary(rng, 4, 0.5);
    CHECK(dice_error(y, y, spec) == doctest::Approx(0.0));

    const ProbabilityGrid zeros(4, 4, 0.0);
    const ProbabilityGrid ones(4, 4, 1.0);
    CHECK(dice_error(zeros, ones, spec) == doctest::Approx(1.0 - 1.0 / 17.0));
}

TEST_CASE("dice stays within [0,1]") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const DiceMaskSpec spec{12, 4, 9, 2, 11, rng.in(0.1, 3.0)};
        const auto h = random_grid(rng, 12);
        const auto y = random_grid(rng, 12);
        const double d = modified_dice(h, y, spec);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("dice ignores the prediction outside the inner mask exactly") {
    Rng rng(88);
    const DiceMaskSpec spec{10, 4, 7, 2, 9, 1.0};
    const auto y = random_grid(rng, 10);
    auto h = random_grid(rng, 10);
    const double base = modified_dice(h, y, spec);

    for (int trial = 0; trial < 20; ++trial) {
        auto mutated = h;
        for (int i = 1; i <= 10; ++i)
            for (int j = 1; j <= 10; ++j) {
                const bool inner = i >= 4 && i <= 7 && j >= 4 && j <= 7;
                if (!inner) mutated.at(j - 1, i - 1) = rng.unit();
            }
        CHECK(modified_dice(mutated, y, spec) == base);  // bitwise equal
    }
}

TEST_CASE("mask special cases collapse to plain smoothed dice") {
    Rng rng(99);
    const auto h = random_grid(rng, 8);
    const auto y = random_grid(rng, 8);

    // equal masks: dice on the inner square only
    const DiceMaskSpec inner_only{8, 3, 6, 3, 6, 1.0};
    CHECK(modified_dice(h, y, inner_only) == doctest::Approx(plain_smoothed_dice(h, y, 3, 6, 1.0)).epsilon(1e-12));

    // full masks: dice on the whole image
    const auto full = DiceMaskSpec::full(8, 1.0);
    CHECK(modified_dice(h, y, full) == doctest::Approx(plain_smoothed_dice(h, y, 1, 8, 1.0)).epsilon(1e-12));
}

TEST_CASE("substituting groundtruth on the inner mask gives a perfect score") {
    Rng rng(111);
    for (int trial = 0; trial < 20; ++trial) {
        const DiceMaskSpec spec{9, 3, 7, 2, 8, 1.0};
        const auto y = random_binary(rng, 9, 0.5);
        auto h = random_grid(rng, 9);
        for (int i = 3; i <= 7; ++i)
            for (int j = 3; j <= 7; ++j) h.at(j - 1, i - 1) = y.at(j - 1, i - 1);
        CHECK(modified_dice(h, y, spec) == doctest::Approx(1.0));
    }
}

TEST_CASE("dice_gradient vanishes outside the inner mask") {
    Rng rng(121);
    const DiceMaskSpec spec{10, 4, 7, 2, 9, 1.0};
    const auto grad = dice_gradient(random_grid(rng, 10), random_grid(rng, 10), spec);
    for (int i = 1; i <= 10; ++i)
        for (int j = 1; j <= 10; ++j) {
            const bool inner = i >= 4 && i <= 7 && j >= 4 && j <= 7;
            if (!inner) CHECK(grad[static_cast<std::size_t>(i - 1) * 10 + (j - 1)] == 0.0);
        }
}

TEST_CASE("dice_gradient matches central finite differences") {
    const DiceMaskSpec spec{20, 5, 15, 3, 17, 1.0};
    const double h_step = 1e-5;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + static_cast<std::uint64_t>(seed));
        auto h = random_grid(rng, 20, 0.1, 0.9);
        const auto y = random_grid(rng, 20);
        const auto grad = dice_gradient(h, y, spec);

        for (int probe = 0; probe < 6; ++probe) {
            const int i = static_cast<int>(rng.integer(5, 15));
            const int j = static_cast<int>(rng.integer(5, 15));
            const double original = h.at(j - 1, i - 1);
            h.at(j - 1, i - 1) = original + h_step;
            const double up = modified_dice(h, y, spec);
            h.at(j - 1, i - 1) = original - h_step;
            const double down = modified_dice(h, y, spec);
            h.at(j - 1, i - 1) = original;
            const double fd = (up - down) / (2.0 * h_step);
            CHECK(std::abs(grad[static_cast<std::size_t>(i - 1) * 20 + (j - 1)] - fd) < 1e-6);
        }
    }
}

TEST_CASE("dice_gradient with empty groundtruth is nonpositive") {
    Rng rng(131);
    const DiceMaskSpec spec{8, 3, 6, 2, 7, 1.0};
    const auto h = random_grid(rng, 8);
    const ProbabilityGrid y(8, 8, 0.0);
    const auto grad = dice_gradient(h, y, spec);

    double h_bar_sum = 0.0;
    for (int i = 3; i <= 6; ++i)
        for (int j = 3; j <= 6; ++j) h_bar_sum += h.at(j - 1, i - 1);
    const double expected = -1.0 / ((h_bar_sum + 1.0) * (h_bar_sum + 1.0));

    for (int i = 3; i <= 6; ++i)
        for (int j = 3; j <= 6; ++j) {
            const double g = grad[static_cast<std::size_t>(i - 1) * 8 + (j - 1)];
            CHECK(g <= 0.0);
            CHECK(g == doctest::Approx(expected).epsilon(1e-12));
        }
}
