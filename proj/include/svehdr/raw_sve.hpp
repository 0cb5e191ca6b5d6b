#pragma once

// Row-pair SVE Bayer sensor model: synthesize a raw capture from linear
// scene radiance, split it by exposure, fill the missing row pairs, and
// track which samples were clipped by the sensor range.
//
// Layout is fixed: RGGB color filter array, exposure alternating every two
// rows with the low-exposure rows first (rows 0-1 low, 2-3 high, ...).

#include <cmath>
#include <utility>

#include "svehdr/core.hpp"

namespace svehdr {

enum class CfaChannel { red = 0, green = 1, blue = 2 };

inline CfaChannel cfa_channel_at(int x, int y) {
    bool odd_row = (y & 1) != 0;
    bool odd_col = (x & 1) != 0;
    if (!odd_row && !odd_col) return CfaChannel::red;
    if (odd_row && odd_col) return CfaChannel::blue;
    return CfaChannel::green;
}

inline bool low_exposure_row(int y) { return (y % 4) < 2; }

// Round-half-away-from-zero onto 2^bits - 1 levels, renormalized to [0,1].
inline double quantize(double v, int bit_depth) {
    double levels = static_cast<double>((1u << bit_depth) - 1u);
    return std::round(v * levels) / levels;
}

inline double quantization_step(int bit_depth) {
    return 1.0 / static_cast<double>((1u << bit_depth) - 1u);
}

inline bool valid_bit_depth(int b) {
    return b == 8 || b == 10 || b == 12 || b == 14 || b == 16;
}

// Maps scene radiance to 0 EV sensor exposure. middle_gray() scales the
// scene so its geometric-mean luminance lands on the photographic 18% gray;
// zero-luminance pixels are excluded from the mean.
struct ExposureAnchor {
    double gain = 1.0;

    static ExposureAnchor middle_gray(const HdrImage& scene, double target = 0.18) {
        KahanSum log_sum;
        std::int64_t n = 0;
        for (const Rgb& p : scene) {
            double l = luma709(p);
            if (l > 0.0) {
                log_sum.add(std::log(l));
                ++n;
            }
        }
        if (n == 0) return {1.0};
        double geo_mean = std::exp(log_sum.value() / static_cast<double>(n));
        return {target / geo_mean};
    }
};

struct BayerSveImage {
    RawImage samples;  // in [0,1], quantized
    double ev_low = 0.0;
    double ev_high = 0.0;
    int bit_depth = 8;

    int width() const { return samples.width(); }
    int height() const { return samples.height(); }
    double row_ev(int y) const { return low_exposure_row(y) ? ev_low : ev_high; }
};

enum class ClipFlag : std::uint8_t { valid = 0, under = 1, over = 2 };
using ClipMask = Plane<ClipFlag>;

inline void require_sve_dimensions(int width, int height) {
    if (width <= 0 || height <= 0 || width % 4 != 0 || height % 4 != 0)
        throw BadDimensions("SVE images need width and height divisible by 4");
}

inline BayerSveImage simulate_sve_capture(const HdrImage& scene, double ev_low,
                                          double ev_high, ExposureAnchor anchor,
                                          int bit_depth = 8) {
    if (!(ev_low < ev_high))
        throw InvalidExposurePair("simulate_sve_capture: requires ev_low < ev_high");
    if (!valid_bit_depth(bit_depth))
        throw BadDimensions("simulate_sve_capture: unsupported bit depth");
    require_sve_dimensions(scene.width(), scene.height());

    BayerSveImage out;
    out.samples = RawImage(scene.width(), scene.height());
    out.ev_low = ev_low;
    out.ev_high = ev_high;
    out.bit_depth = bit_depth;

    double gain_low = anchor.gain * std::exp2(ev_low);
    double gain_high = anchor.gain * std::exp2(ev_high);
    for (int y = 0; y < scene.height(); ++y) {
        double gain = low_exposure_row(y) ? gain_low : gain_high;
        for (int x = 0; x < scene.width(); ++x) {
            double radiance = scene(x, y)[static_cast<int>(cfa_channel_at(x, y))];
            out.samples(x, y) = quantize(clamp01(radiance * gain), bit_depth);
        }
    }
    return out;
}

// One exposure band of a capture; rows of the other band are missing.
struct SparseRaw {
    RawImage samples;  // missing rows hold zeros and must not be read
    bool low_band = true;

    bool row_present(int y) const { return low_exposure_row(y) == low_band; }
};

inline std::pair<SparseRaw, SparseRaw> separate(const BayerSveImage& x) {
    SparseRaw low{RawImage(x.width(), x.height()), true};
    SparseRaw high{RawImage(x.width(), x.height()), false};
    for (int y = 0; y < x.height(); ++y) {
        RawImage& dst = low_exposure_row(y) ? low.samples : high.samples;
        for (int c = 0; c < x.width(); ++c) dst(c, y) = x.samples(c, y);
    }
    return {std::move(low), std::move(high)};
}

namespace detail {

// Nearest present rows with the same CFA row parity (vertical period 2).
// Returns {above, below}; -1 when the border cuts that side off.
inline std::pair<int, int> interpolation_sources(const SparseRaw& sparse, int y) {
    int above = -1, below = -1;
    for (int r = y - 2; r >= 0; r -= 2)
        if (sparse.row_present(r)) {
            above = r;
            break;
        }
    for (int r = y + 2; r < sparse.samples.height(); r += 2)
        if (sparse.row_present(r)) {
            below = r;
            break;
        }
    return {above, below};
}

}  // namespace detail

// Fills the missing row pairs by distance-weighted linear interpolation
// between the nearest same-channel rows; border rows replicate the single
// available neighbor. Present rows are passed through untouched.
inline RawImage interpolate(const SparseRaw& sparse) {
    RawImage out = sparse.samples;
    for (int y = 0; y < out.height(); ++y) {
        if (sparse.row_present(y)) continue;
        auto [above, below] = detail::interpolation_sources(sparse, y);
        if (above >= 0 && below >= 0) {
            double w_above = static_cast<double>(below - y) / (below - above);
            double w_below = static_cast<double>(y - above) / (below - above);
            for (int x = 0; x < out.width(); ++x)
                out(x, y) = w_above * sparse.samples(x, above) +
                            w_below * sparse.samples(x, below);
        } else {
            int src = above >= 0 ? above : below;
            for (int x = 0; x < out.width(); ++x) out(x, y) = sparse.samples(x, src);
        }
    }
    return out;
}

inline ClipFlag clip_flag_of_sample(double v) {
    if (v == 0.0) return ClipFlag::under;
    if (v == 1.0) return ClipFlag::over;
    return ClipFlag::valid;
}

namespace detail {

inline ClipFlag combine_flags(ClipFlag a, ClipFlag b) {
    // A filled sample inherits any clip flag of its sources, so hue
    // correction never trusts a value fabricated from clipped data.
    if (a == ClipFlag::over || b == ClipFlag::over) return ClipFlag::over;
    if (a == ClipFlag::under || b == ClipFlag::under) return ClipFlag::under;
    return ClipFlag::valid;
}

}  // namespace detail

// Clip mask of the interpolated raster for one exposure band: present
// samples are flagged by value, filled samples inherit their sources' flags.
inline ClipMask clip_mask_of(const SparseRaw& sparse) {
    ClipMask mask(sparse.samples.width(), sparse.samples.height(), ClipFlag::valid);
    for (int y = 0; y < mask.height(); ++y) {
        if (!sparse.row_present(y)) continue;
        for (int x = 0; x < mask.width(); ++x)
            mask(x, y) = clip_flag_of_sample(sparse.samples(x, y));
    }
    for (int y = 0; y < mask.height(); ++y) {
        if (sparse.row_present(y)) continue;
        auto [above, below] = detail::interpolation_sources(sparse, y);
        for (int x = 0; x < mask.width(); ++x) {
            if (above >= 0 && below >= 0)
                mask(x, y) = detail::combine_flags(mask(x, above), mask(x, below));
            else
                mask(x, y) = mask(x, above >= 0 ? above : below);
        }
    }
    return mask;
}

// Per-sample flags of the mosaic itself (no interpolation involved).
inline ClipMask mosaic_clip_mask(const BayerSveImage& x) {
    ClipMask mask(x.width(), x.height(), ClipFlag::valid);
    for (int y = 0; y < x.height(); ++y)
        for (int c = 0; c < x.width(); ++c)
            mask(c, y) = clip_flag_of_sample(x.samples(c, y));
    return mask;
}

// Interpolated clip masks for both exposure bands of a capture.
inline std::pair<ClipMask, ClipMask> clip_masks(const BayerSveImage& x) {
    auto [low, high] = separate(x);
    return {clip_mask_of(low), clip_mask_of(high)};
}

}  // namespace svehdr
