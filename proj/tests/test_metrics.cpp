#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "svehdr/metrics.hpp"

using namespace svehdr;

TEST_CASE("cosine similarity of identical chromatic images is 1") {
    RgbImage img(8, 8);
    Rng rng(4);
    for (Rgb& p : img) p = {rng.uniform(0.2, 1.0), rng.uniform(0.0, 0.5), rng.uniform()};
    CosineSimilarityDetail d = max_sat_cosine_detail(img, img);
    CHECK_THAT(d.mean, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(d.included + d.skipped == img.pixel_count());
}

TEST_CASE("cosine similarity of orthogonal hues is 0") {
    RgbImage ref(4, 4, Rgb{0.8, 0.2, 0.2});   // c = (1,0,0)
    RgbImage test(4, 4, Rgb{0.2, 0.8, 0.2});  // c = (0,1,0)
    CHECK_THAT(max_sat_cosine_similarity(ref, test),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("cosine similarity matches the hand-computed dot product") {
    RgbImage ref(4, 4, Rgb{1.0, 0.5, 0.0});   // already maximally saturated
    RgbImage test(4, 4, Rgb{0.9, 0.1, 0.1});  // c = (1,0,0)
    double expected = 1.0 / std::sqrt(1.25);
    CHECK_THAT(max_sat_cosine_similarity(ref, test),
               Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("achromatic pixels are excluded from the cosine mean") {
    RgbImage ref(4, 4, Rgb{0.8, 0.2, 0.2});
    RgbImage test(4, 4, Rgb{0.8, 0.2, 0.2});
    ref(0, 0) = {0.5, 0.5, 0.5};
    test(3, 3) = {0.2, 0.2, 0.2};
    CosineSimilarityDetail d = max_sat_cosine_detail(ref, test);
    CHECK(d.skipped == 2);
    CHECK(d.included == 14);
    CHECK_THAT(d.mean, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("cosine similarity is invariant to positive scaling before saturation") {
    // Pixels carry a solid chromatic margin so no pixel crosses the
    // achromatic threshold when scaled down.
    RgbImage ref(8, 8), test(8, 8);
    Rng rng(12);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double u = rng.uniform(0.3, 0.9);
            ref(x, y) = {u, u * rng.uniform(0.0, 0.7), u * rng.uniform(0.0, 0.7)};
            u = rng.uniform(0.3, 0.9);
            test(x, y) = {u * rng.uniform(0.0, 0.7), u, u * rng.uniform(0.0, 0.7)};
        }
    double base = max_sat_cosine_similarity(ref, test);
    for (double g : {0.25, 0.5, 0.9}) {
        RgbImage scaled(8, 8);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) scaled(x, y) = test(x, y) * g;
        CHECK_THAT(max_sat_cosine_similarity(ref, scaled),
                   Catch::Matchers::WithinAbs(base, 1e-9));
    }
}

TEST_CASE("hue difference of identical images is 0 and achromatic pairs contribute 0") {
    RgbImage img(8, 8);
    Rng rng(8);
    for (Rgb& p : img) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    CHECK(ciede2000_hue_difference(img, img) == 0.0);

    RgbImage gray_a(4, 4, Rgb{0.2, 0.2, 0.2});
    RgbImage gray_b(4, 4, Rgb{0.9, 0.9, 0.9});
    CHECK(ciede2000_hue_difference(gray_a, gray_b) < 1e-12);
}

TEST_CASE("metric means are independent of pixel iteration order") {
    const int n = 32;
    RgbImage ref(n, n), test(n, n);
    Rng rng(77);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            ref(x, y) = {rng.uniform(), rng.uniform(), rng.uniform()};
            test(x, y) = {rng.uniform(), rng.uniform(), rng.uniform()};
        }

    // The same pixel pairs laid out in a permuted order.
    std::vector<int> perm(n * n);
    for (int i = 0; i < n * n; ++i) perm[static_cast<size_t>(i)] = i;
    for (int i = n * n - 1; i > 0; --i)
        std::swap(perm[static_cast<size_t>(i)],
                  perm[static_cast<size_t>(rng.uniform_int(0, i))]);
    RgbImage ref_p(n, n), test_p(n, n);
    for (int i = 0; i < n * n; ++i) {
        int j = perm[static_cast<size_t>(i)];
        ref_p(i % n, i / n) = ref(j % n, j / n);
        test_p(i % n, i / n) = test(j % n, j / n);
    }

    CHECK(std::fabs(ciede2000_hue_difference(ref, test) -
                    ciede2000_hue_difference(ref_p, test_p)) < 1e-12);
    CHECK(std::fabs(max_sat_cosine_similarity(ref, test) -
                    max_sat_cosine_similarity(ref_p, test_p)) < 1e-12);
}

TEST_CASE("reference is the anchored scene clipped to the display range") {
    HdrImage scene(4, 4, Rgb{1.5, 0.5, -0.0});
    RgbImage ref = reference_ldr(scene);
    CHECK(ref(0, 0).r == 1.0);
    CHECK(ref(0, 0).g == 0.5);
    CHECK(ref(0, 0).b == 0.0);
}

TEST_CASE("evaluate_pair returns identical reports for identical inputs") {
    const int n = 192;  // TMQI needs the full 5-level pyramid
    HdrImage scene(n, n);
    Rng rng(31);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double base = 0.1 + 0.5 * (std::sin(x * 0.21) * std::sin(y * 0.13) * 0.5 + 0.5);
            scene(x, y) = {base, base * 0.7, base * 0.4};
        }
    RgbImage out = reference_ldr(scene);

    auto [conv, prop] = evaluate_pair(scene, out, out);
    CHECK(conv.cosine_similarity_mean == prop.cosine_similarity_mean);
    CHECK(conv.ciede2000_hue_mean == prop.ciede2000_hue_mean);
    CHECK(conv.tmqi == prop.tmqi);

    // Reference against itself: ideal hue scores.
    CHECK_THAT(conv.cosine_similarity_mean, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(conv.ciede2000_hue_mean == 0.0);
    CHECK(conv.pixel_count + conv.skipped_achromatic == scene.pixel_count());
}
