#include <catch2/catch_amalgamated.hpp>

#include "svehdr/pipeline.hpp"

using namespace svehdr;

namespace {

// Reference bilinear demosaic, written from the neighbor tables rather than
// the per-site helper functions the library uses.
RgbImage demosaic_reference(const RawImage& raw) {
    struct Offset {
        int dx, dy;
    };
    auto gather = [&](int x, int y, std::initializer_list<Offset> offsets) {
        double sum = 0.0;
        for (const Offset& o : offsets) {
            int cx = std::clamp(x + o.dx, 0, raw.width() - 1);
            int cy = std::clamp(y + o.dy, 0, raw.height() - 1);
            sum += raw(cx, cy);
        }
        return sum / static_cast<double>(offsets.size());
    };
    const std::initializer_list<Offset> self = {{0, 0}};
    const std::initializer_list<Offset> cross = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    const std::initializer_list<Offset> diag = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
    const std::initializer_list<Offset> horiz = {{-1, 0}, {1, 0}};
    const std::initializer_list<Offset> vert = {{0, -1}, {0, 1}};

    RgbImage out(raw.width(), raw.height());
    for (int y = 0; y < raw.height(); ++y)
        for (int x = 0; x < raw.width(); ++x) {
            bool odd_row = y & 1, odd_col = x & 1;
            Rgb p;
            if (!odd_row && !odd_col) {  // R site
                p = {gather(x, y, self), gather(x, y, cross), gather(x, y, diag)};
            } else if (odd_row && odd_col) {  // B site
                p = {gather(x, y, diag), gather(x, y, cross), gather(x, y, self)};
            } else if (!odd_row) {  // G in red row
                p = {gather(x, y, horiz), gather(x, y, self), gather(x, y, vert)};
            } else {  // G in blue row
                p = {gather(x, y, vert), gather(x, y, self), gather(x, y, horiz)};
            }
            out(x, y) = p;
        }
    return out;
}

BayerSveImage capture_of(const HdrImage& scene, double magnitude, int bits = 8) {
    return simulate_sve_capture(scene, -magnitude, magnitude, {1.0}, bits);
}

}  // namespace

TEST_CASE("exposure compensation is the inverse gain with a re-clip") {
    RawImage x(4, 4, 0.5);
    RawImage c = exposure_compensate(x, 1.0);
    CHECK(c(0, 0) == 0.25);
    c = exposure_compensate(x, 0.0);
    CHECK(c(0, 0) == 0.5);

    RawImage saturated(4, 4, 1.0);
    c = exposure_compensate(saturated, -2.0);
    CHECK(c(0, 0) == 1.0);  // clipped input stays saturated
}

TEST_CASE("demosaic of a constant raster is constant gray") {
    RawImage raw(8, 8, 0.42);
    RgbImage rgb = demosaic(raw);
    for (const Rgb& p : rgb) {
        CHECK(p.r == 0.42);
        CHECK(p.g == 0.42);
        CHECK(p.b == 0.42);
    }
}

TEST_CASE("demosaic passes native samples through") {
    RawImage raw(8, 8);
    Rng rng(2);
    for (double& v : raw) v = rng.uniform();
    RgbImage rgb = demosaic(raw);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double native = raw(x, y);
            switch (cfa_channel_at(x, y)) {
                case CfaChannel::red: CHECK(rgb(x, y).r == native); break;
                case CfaChannel::green: CHECK(rgb(x, y).g == native); break;
                case CfaChannel::blue: CHECK(rgb(x, y).b == native); break;
            }
        }
}

TEST_CASE("demosaic matches the brute-force reference") {
    // 4x4 checkerboard mosaic plus random rasters, borders included.
    RawImage checker(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) checker(x, y) = ((x + y) & 1) ? 0.8 : 0.2;
    RgbImage got = demosaic(checker);
    RgbImage want = demosaic_reference(checker);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            CHECK(got(x, y).r == want(x, y).r);
            CHECK(got(x, y).g == want(x, y).g);
            CHECK(got(x, y).b == want(x, y).b);
        }

    Rng rng(6);
    RawImage random(12, 8);
    for (double& v : random) v = rng.uniform();
    got = demosaic(random);
    want = demosaic_reference(random);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 12; ++x) {
            CHECK(got(x, y).r == want(x, y).r);
            CHECK(got(x, y).g == want(x, y).g);
            CHECK(got(x, y).b == want(x, y).b);
        }
}

TEST_CASE("fusing two equal images returns them unchanged") {
    RgbImage img(4, 4, Rgb{0.3, 0.2, 0.6});
    RgbImage pre_low(4, 4, Rgb{0.1, 0.1, 0.1});
    RgbImage pre_high(4, 4, Rgb{0.9, 0.9, 0.9});
    RgbImage out = fuse(img, img, pre_low, pre_high);
    for (const Rgb& p : out) {
        CHECK_THAT(p.r, Catch::Matchers::WithinAbs(0.3, 1e-15));
        CHECK_THAT(p.g, Catch::Matchers::WithinAbs(0.2, 1e-15));
        CHECK_THAT(p.b, Catch::Matchers::WithinAbs(0.6, 1e-15));
    }
}

TEST_CASE("well-exposedness weight peaks at middle gray") {
    CHECK(well_exposedness_weight(0.5) == 1.0);
    CHECK(well_exposedness_weight(0.1) < well_exposedness_weight(0.3));
    CHECK(well_exposedness_weight(0.9) < well_exposedness_weight(0.7));
    CHECK(well_exposedness_weight(0.0) == well_exposedness_weight(1.0));
}

TEST_CASE("fusion of two constants matches the hand-computed weighted mean") {
    RgbImage y_low(4, 4, Rgb{0.2, 0.2, 0.2});
    RgbImage y_high(4, 4, Rgb{0.4, 0.4, 0.4});
    RgbImage pre_low(4, 4, Rgb{0.4, 0.4, 0.4});
    RgbImage pre_high(4, 4, Rgb{0.7, 0.7, 0.7});
    RgbImage out = fuse(y_low, y_high, pre_low, pre_high);

    double w_low = std::exp(-(0.4 - 0.5) * (0.4 - 0.5) / 0.08);
    double w_high = std::exp(-(0.7 - 0.5) * (0.7 - 0.5) / 0.08);
    double expected = (w_low * 0.2 + w_high * 0.4) / (w_low + w_high);
    CHECK_THAT(out(1, 2).g, Catch::Matchers::WithinAbs(expected, 1e-12));

    RgbImage small(4, 8, Rgb{});
    CHECK_THROWS_AS(fuse(y_low, small, pre_low, pre_high), DimensionMismatch);
}

TEST_CASE("correct_hue takes the low-exposure hue when its raw data is valid") {
    const int n = 4;
    RgbImage y_out(n, n, Rgb{0.9, 0.9, 0.6});
    RgbImage y_low(n, n, Rgb{0.3, 0.2, 0.1});
    RgbImage y_high(n, n, Rgb{0.5, 0.5, 0.5});
    ClipMask valid(n, n, ClipFlag::valid);

    HueBranchStats stats;
    RgbImage out = correct_hue(y_out, y_low, y_high, valid, valid, &stats);

    // a_w = 0.6, a_c = 0.3, c' = (1, 0.5, 0) -> (0.9, 0.75, 0.6)
    for (const Rgb& p : out) {
        CHECK_THAT(p.r, Catch::Matchers::WithinAbs(0.9, 1e-12));
        CHECK_THAT(p.g, Catch::Matchers::WithinAbs(0.75, 1e-12));
        CHECK_THAT(p.b, Catch::Matchers::WithinAbs(0.6, 1e-12));
    }
    CHECK(stats.used_low == n * n);
    CHECK(stats.total() == n * n);
}

TEST_CASE("correct_hue falls through to high and then keeps the fused hue") {
    const int n = 4;
    RgbImage y_out(n, n, Rgb{0.9, 0.9, 0.6});
    RgbImage y_low(n, n, Rgb{0.3, 0.2, 0.1});
    RgbImage y_high(n, n, Rgb{0.1, 0.4, 0.2});
    ClipMask valid(n, n, ClipFlag::valid);
    ClipMask clipped(n, n, ClipFlag::over);

    HueBranchStats stats;
    RgbImage out = correct_hue(y_out, y_low, y_high, clipped, valid, &stats);
    CHECK(stats.used_high == n * n);
    // c_high = (0, 1, 1/3); a_w = 0.6, a_c = 0.3.
    CHECK_THAT(out(0, 0).r, Catch::Matchers::WithinAbs(0.6, 1e-12));
    CHECK_THAT(out(0, 0).g, Catch::Matchers::WithinAbs(0.9, 1e-12));
    CHECK_THAT(out(0, 0).b, Catch::Matchers::WithinAbs(0.7, 1e-12));

    RgbImage kept = correct_hue(y_out, y_low, y_high, clipped, clipped, &stats);
    CHECK(stats.kept_out == n * n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) CHECK(kept(x, y) == y_out(x, y));  // bit-exact
}

TEST_CASE("correct_hue passes achromatic pixels through and skips achromatic donors") {
    const int n = 4;
    RgbImage y_out(n, n, Rgb{0.5, 0.5, 0.5});
    RgbImage y_low(n, n, Rgb{0.3, 0.2, 0.1});
    RgbImage y_high(n, n, Rgb{0.1, 0.4, 0.2});
    ClipMask valid(n, n, ClipFlag::valid);

    HueBranchStats stats;
    RgbImage out = correct_hue(y_out, y_low, y_high, valid, valid, &stats);
    CHECK(stats.achromatic == n * n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) CHECK(out(x, y) == y_out(x, y));

    // Chromatic fused pixel, achromatic low donor: falls through to high.
    RgbImage chroma_out(n, n, Rgb{0.9, 0.9, 0.6});
    RgbImage gray_low(n, n, Rgb{0.4, 0.4, 0.4});
    stats = {};
    correct_hue(chroma_out, gray_low, y_high, valid, valid, &stats);
    CHECK(stats.used_high == n * n);
}

TEST_CASE("a single clipped raw sample invalidates its 3x3 neighborhood") {
    const int n = 8;
    RgbImage y_out(n, n, Rgb{0.9, 0.9, 0.6});
    RgbImage y_low(n, n, Rgb{0.3, 0.2, 0.1});
    RgbImage y_high(n, n, Rgb{0.1, 0.4, 0.2});
    ClipMask mask_low(n, n, ClipFlag::valid);
    mask_low(4, 4) = ClipFlag::over;
    ClipMask valid(n, n, ClipFlag::valid);

    HueBranchStats stats;
    correct_hue(y_out, y_low, y_high, mask_low, valid, &stats);
    CHECK(stats.used_high == 9);  // the 3x3 block around (4,4)
    CHECK(stats.used_low == n * n - 9);
    CHECK(stats.total() == n * n);
}

TEST_CASE("run_pipeline keeps constant gray scenes constant gray") {
    HdrImage scene(8, 8, Rgb{0.3, 0.3, 0.3});
    BayerSveImage x = capture_of(scene, 1.0);
    PipelineConfig cfg;
    for (bool hue : {false, true}) {
        cfg.hue_correction = hue;
        RgbImage out = run_pipeline(x, cfg).image;
        Rgb first = out(0, 0);
        CHECK(first.r == first.g);
        CHECK(first.g == first.b);
        for (const Rgb& p : out) CHECK(p == first);
    }
}

TEST_CASE("run_pipeline is deterministic and reports branch stats when asked") {
    HdrImage scene(16, 16);
    Rng rng(14);
    for (Rgb& p : scene) {
        double v = std::exp(rng.uniform(std::log(0.02), std::log(1.5)));
        p = {v, v * rng.uniform(0.1, 1.0), v * rng.uniform(0.1, 1.0)};
    }
    BayerSveImage x = capture_of(scene, 2.0);

    PipelineConfig conventional;
    PipelineConfig proposed;
    proposed.hue_correction = true;

    PipelineResult a = run_pipeline(x, proposed);
    PipelineResult b = run_pipeline(x, proposed);
    CHECK(a.image == b.image);
    REQUIRE(a.branches.has_value());
    CHECK(a.branches->total() == x.samples.pixel_count());

    PipelineResult c = run_pipeline(x, conventional);
    CHECK(!c.branches.has_value());

    // Achromatic fused pixels pass through: both paths agree bit-exactly.
    for (int y = 0; y < 16; ++y)
        for (int xx = 0; xx < 16; ++xx) {
            const Rgb& pc = c.image(xx, y);
            if (!is_chromatic(pc)) CHECK(a.image(xx, y) == pc);
        }
}

TEST_CASE("pipeline images stay inside the unit cube") {
    HdrImage scene(16, 16);
    Rng rng(99);
    for (Rgb& p : scene) {
        double v = std::exp(rng.uniform(std::log(0.001), std::log(6.0)));
        p = {v, v * rng.uniform(0.05, 1.0), v * rng.uniform(0.05, 1.0)};
    }
    BayerSveImage x = capture_of(scene, 4.0);
    for (bool hue : {false, true}) {
        PipelineConfig cfg;
        cfg.hue_correction = hue;
        RgbImage out = run_pipeline(x, cfg).image;
        for (const Rgb& p : out) {
            CHECK(p.min_channel() >= 0.0);
            CHECK(p.max_channel() <= 1.0);
        }
    }
}
