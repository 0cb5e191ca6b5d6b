#include <catch2/catch_amalgamated.hpp>

#include "svehdr/hue_plane.hpp"

using namespace svehdr;

namespace {

Rgb random_pixel(Rng& rng) { return {rng.uniform(), rng.uniform(), rng.uniform()}; }

double linf(const Rgb& a, const Rgb& b) {
    return std::max({std::fabs(a.r - b.r), std::fabs(a.g - b.g), std::fabs(a.b - b.b)});
}

}  // namespace

TEST_CASE("max_saturated_color normalizes onto the saturated locus") {
    Rgb c = max_saturated_color({1.0, 0.0, 0.0});
    CHECK(c.r == 1.0);
    CHECK(c.g == 0.0);
    CHECK(c.b == 0.0);

    c = max_saturated_color({0.6, 0.4, 0.2});
    CHECK_THAT(c.r, Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(c.g, Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(c.b, Catch::Matchers::WithinAbs(0.0, 1e-15));

    CHECK_THROWS_AS(max_saturated_color({0.5, 0.5, 0.5}), AchromaticPixel);
    CHECK_THROWS_AS(max_saturated_color({0.5, 0.5, 0.5 + 1e-7}), AchromaticPixel);
}

TEST_CASE("max_saturated_color output has min 0 and max 1 for chromatic pixels") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        Rgb x = random_pixel(rng);
        if (!is_chromatic(x)) continue;
        Rgb c = max_saturated_color(x);
        CHECK(c.min_channel() == 0.0);
        CHECK(c.max_channel() == 1.0);
    }
}

TEST_CASE("decompose matches the closed form") {
    HuePlaneDecomposition d = decompose({0.6, 0.4, 0.2});
    CHECK_THAT(d.a_w, Catch::Matchers::WithinAbs(0.2, 1e-15));
    CHECK_THAT(d.a_k, Catch::Matchers::WithinAbs(0.4, 1e-15));
    CHECK_THAT(d.a_c, Catch::Matchers::WithinAbs(0.4, 1e-15));
    CHECK_THAT(d.c.g, Catch::Matchers::WithinAbs(0.5, 1e-15));

    d = decompose({1.0, 1.0, 1.0});
    CHECK(d.a_w == 1.0);
    CHECK(d.a_k == 0.0);
    CHECK(d.a_c == 0.0);

    d = decompose({0.0, 0.0, 0.0});
    CHECK(d.a_w == 0.0);
    CHECK(d.a_k == 1.0);
    CHECK(d.a_c == 0.0);
    CHECK(d.c == kAchromaticSentinel);
}

TEST_CASE("recompose evaluates the linear combination") {
    Rgb y = recompose({0.2, 0.4, 0.4, {1.0, 0.5, 0.0}});
    CHECK_THAT(linf(y, {0.6, 0.4, 0.2}), Catch::Matchers::WithinAbs(0.0, 1e-15));

    y = recompose({1.0, 0.0, 0.0, {0.3, 0.9, 0.1}});
    CHECK(y == Rgb{1.0, 1.0, 1.0});
}

TEST_CASE("decompose/recompose round trip, coefficient closure, locus law") {
    Rng rng(42);
    for (int i = 0; i < 10000; ++i) {
        Rgb x = random_pixel(rng);
        HuePlaneDecomposition d = decompose(x);

        CHECK(std::fabs(d.a_w + d.a_k + d.a_c - 1.0) < 1e-12);
        CHECK(d.a_w >= 0.0);
        CHECK(d.a_k >= 0.0);
        CHECK(d.a_c >= 0.0);

        Rgb y = recompose(d);
        CHECK(linf(y, x) < 1e-9);
    }
}

TEST_CASE("transplant_hue replaces only the saturated vertex") {
    // Replacing c with itself is the identity.
    Rgb y = transplant_hue({0.6, 0.4, 0.2}, {1.0, 0.5, 0.0});
    CHECK(linf(y, {0.6, 0.4, 0.2}) < 1e-15);

    // Coefficients stay, hue changes.
    y = transplant_hue({0.6, 0.4, 0.2}, {0.0, 1.0, 0.0});
    CHECK(linf(y, {0.2, 0.6, 0.2}) < 1e-15);

    // Achromatic input: zero chroma coefficient, the hue cannot show.
    y = transplant_hue({0.5, 0.5, 0.5}, {0.0, 1.0, 0.0});
    CHECK(y == Rgb{0.5, 0.5, 0.5});

    CHECK_THROWS_AS(transplant_hue({0.6, 0.4, 0.2}, {0.9, 0.5, 0.1}),
                    InvalidSaturatedColor);
    CHECK_NOTHROW(transplant_hue({0.6, 0.4, 0.2}, kAchromaticSentinel));
}

TEST_CASE("transplant_hue preserves order statistics and is idempotent") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        Rgb x = random_pixel(rng);
        if (!is_chromatic(x)) continue;

        Rgb hue_source = random_pixel(rng);
        if (!is_chromatic(hue_source)) continue;

        HuePlaneDecomposition d = decompose(x);
        Rgb y = transplant_hue(x, max_saturated_color(hue_source));
        CHECK(std::fabs(y.max_channel() - (d.a_w + d.a_c)) < 1e-12);
        CHECK(std::fabs(y.min_channel() - d.a_w) < 1e-12);

        // Transplanting the pixel's own hue is a no-op.
        Rgb same = transplant_hue(x, max_saturated_color(x));
        CHECK(linf(same, x) < 1e-9);
    }
}
