#pragma once

// Reconstruction chain for a row-pair SVE capture: exposure compensation,
// bilinear demosaicing, well-exposedness fusion, and the clip-aware hue
// correction that distinguishes the proposed path from the conventional one.

#include <cmath>
#include <cstdint>
#include <optional>

#include "svehdr/core.hpp"
#include "svehdr/hue_plane.hpp"
#include "svehdr/raw_sve.hpp"

namespace svehdr {

enum class DemosaicMethod { bilinear };
enum class FusionMethod { well_exposedness };

struct PipelineConfig {
    DemosaicMethod demosaic = DemosaicMethod::bilinear;
    FusionMethod fusion = FusionMethod::well_exposedness;
    bool hue_correction = false;  // false: conventional, true: proposed
};

// Brings a raw at the given EV back to the 0 EV reference. Values that were
// clipped on the sensor stay saturated after the re-clip.
inline RawImage exposure_compensate(const RawImage& x, double ev) {
    RawImage out(x.width(), x.height());
    double gain = std::exp2(-ev);
    for (int y = 0; y < x.height(); ++y)
        for (int c = 0; c < x.width(); ++c) out(c, y) = clamp01(x(c, y) * gain);
    return out;
}

namespace detail {

inline int clamp_coord(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

inline double raw_at(const RawImage& x, int cx, int cy) {
    return x(clamp_coord(cx, x.width()), clamp_coord(cy, x.height()));
}

inline double cross_mean(const RawImage& x, int cx, int cy) {
    return 0.25 * (raw_at(x, cx - 1, cy) + raw_at(x, cx + 1, cy) +
                   raw_at(x, cx, cy - 1) + raw_at(x, cx, cy + 1));
}

inline double diagonal_mean(const RawImage& x, int cx, int cy) {
    return 0.25 * (raw_at(x, cx - 1, cy - 1) + raw_at(x, cx + 1, cy - 1) +
                   raw_at(x, cx - 1, cy + 1) + raw_at(x, cx + 1, cy + 1));
}

inline double horizontal_mean(const RawImage& x, int cx, int cy) {
    return 0.5 * (raw_at(x, cx - 1, cy) + raw_at(x, cx + 1, cy));
}

inline double vertical_mean(const RawImage& x, int cx, int cy) {
    return 0.5 * (raw_at(x, cx, cy - 1) + raw_at(x, cx, cy + 1));
}

}  // namespace detail

// Bilinear demosaic of an RGGB raster. Neighbor reads clamp to the border,
// so every output value is a mean over the (clamped) 3x3 window.
inline RgbImage demosaic(const RawImage& x) {
    RgbImage out(x.width(), x.height());
    for (int y = 0; y < x.height(); ++y) {
        for (int c = 0; c < x.width(); ++c) {
            Rgb p;
            switch (cfa_channel_at(c, y)) {
                case CfaChannel::red:
                    p.r = x(c, y);
                    p.g = detail::cross_mean(x, c, y);
                    p.b = detail::diagonal_mean(x, c, y);
                    break;
                case CfaChannel::blue:
                    p.b = x(c, y);
                    p.g = detail::cross_mean(x, c, y);
                    p.r = detail::diagonal_mean(x, c, y);
                    break;
                case CfaChannel::green:
                    p.g = x(c, y);
                    if ((y & 1) == 0) {  // red row
                        p.r = detail::horizontal_mean(x, c, y);
                        p.b = detail::vertical_mean(x, c, y);
                    } else {  // blue row
                        p.r = detail::vertical_mean(x, c, y);
                        p.b = detail::horizontal_mean(x, c, y);
                    }
                    break;
            }
            out(c, y) = p;
        }
    }
    return out;
}

// Gaussian well-exposedness weight, peaked at middle gray of the raw range.
inline double well_exposedness_weight(double u) {
    double d = u - 0.5;
    return std::exp(-d * d / (2.0 * 0.2 * 0.2));
}

// Per-pixel weighted average of the two compensated images. Weights come
// from the pre-compensation images so that clipped regions, whose raw
// values sit at the ends of [0,1], contribute the least.
inline RgbImage fuse(const RgbImage& y_low, const RgbImage& y_high,
                     const RgbImage& pre_low, const RgbImage& pre_high) {
    require_same_size(y_low, y_high, "fuse");
    require_same_size(y_low, pre_low, "fuse");
    require_same_size(y_low, pre_high, "fuse");

    RgbImage out(y_low.width(), y_low.height());
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            double w_low = well_exposedness_weight(luma709(pre_low(x, y)));
            double w_high = well_exposedness_weight(luma709(pre_high(x, y)));
            if (w_low < 1e-6 && w_high < 1e-6) w_low = w_high = 1.0;
            double inv = 1.0 / (w_low + w_high);
            out(x, y) = (w_low * y_low(x, y) + w_high * y_high(x, y)) * inv;
        }
    }
    return out;
}

// Which rule chose the output hue, per pixel. Counters always sum to the
// pixel count.
struct HueBranchStats {
    std::int64_t achromatic = 0;  // fused pixel hueless, passed through
    std::int64_t used_low = 0;    // hue taken from the low-exposure image
    std::int64_t used_high = 0;   // hue taken from the high-exposure image
    std::int64_t kept_out = 0;    // both exposures clipped, fused hue kept

    std::int64_t total() const { return achromatic + used_low + used_high + kept_out; }
};

namespace detail {

// A demosaiced pixel is trusted only if every raw sample under its 3x3
// bilinear support is unclipped. Border windows clamp like the demosaic.
inline Plane<std::uint8_t> demosaic_validity(const ClipMask& mask) {
    Plane<std::uint8_t> ok(mask.width(), mask.height(), 1);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            bool valid = true;
            for (int dy = -1; dy <= 1 && valid; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int cx = clamp_coord(x + dx, mask.width());
                    int cy = clamp_coord(y + dy, mask.height());
                    if (mask(cx, cy) != ClipFlag::valid) {
                        valid = false;
                        break;
                    }
                }
            ok(x, y) = valid ? 1 : 0;
        }
    }
    return ok;
}

}  // namespace detail

// Replaces the hue of each fused pixel with a hue estimated from whichever
// exposure saw the scene unclipped there: the low exposure if its raw
// neighborhood is fully valid, else the high exposure, else the fused hue
// stays. Exposures whose pixel is achromatic cannot donate a hue and fall
// through. Only the middle channel can change: the coefficients, and with
// them the pixel's min and max, come from the fused pixel.
inline RgbImage correct_hue(const RgbImage& y_out, const RgbImage& y_low,
                            const RgbImage& y_high, const ClipMask& mask_low,
                            const ClipMask& mask_high,
                            HueBranchStats* stats = nullptr) {
    require_same_size(y_out, y_low, "correct_hue");
    require_same_size(y_out, y_high, "correct_hue");
    if (y_out.width() != mask_low.width() || y_out.height() != mask_low.height() ||
        y_out.width() != mask_high.width() || y_out.height() != mask_high.height())
        throw DimensionMismatch("correct_hue: mask dimensions differ from images");

    Plane<std::uint8_t> ok_low = detail::demosaic_validity(mask_low);
    Plane<std::uint8_t> ok_high = detail::demosaic_validity(mask_high);

    HueBranchStats local;
    RgbImage out(y_out.width(), y_out.height());
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            const Rgb& fused = y_out(x, y);
            if (!is_chromatic(fused)) {
                out(x, y) = fused;
                ++local.achromatic;
            } else if (ok_low(x, y) && is_chromatic(y_low(x, y))) {
                out(x, y) = transplant_hue(fused, max_saturated_color(y_low(x, y)));
                ++local.used_low;
            } else if (ok_high(x, y) && is_chromatic(y_high(x, y))) {
                out(x, y) = transplant_hue(fused, max_saturated_color(y_high(x, y)));
                ++local.used_high;
            } else {
                out(x, y) = fused;
                ++local.kept_out;
            }
        }
    }
    if (stats) *stats = local;
    return out;
}

struct PipelineResult {
    RgbImage image;
    std::optional<HueBranchStats> branches;  // present when hue correction ran
};

inline PipelineResult run_pipeline(const BayerSveImage& x, const PipelineConfig& cfg) {
    auto [sparse_low, sparse_high] = separate(x);

    RawImage raw_low = interpolate(sparse_low);
    RawImage raw_high = interpolate(sparse_high);

    RgbImage pre_low = demosaic(raw_low);  // pre-compensation, for fusion weights
    RgbImage pre_high = demosaic(raw_high);

    RgbImage y_low = demosaic(exposure_compensate(raw_low, x.ev_low));
    RgbImage y_high = demosaic(exposure_compensate(raw_high, x.ev_high));

    RgbImage fused = fuse(y_low, y_high, pre_low, pre_high);

    PipelineResult result;
    if (cfg.hue_correction) {
        ClipMask mask_low = clip_mask_of(sparse_low);
        ClipMask mask_high = clip_mask_of(sparse_high);
        HueBranchStats stats;
        result.image = correct_hue(fused, y_low, y_high, mask_low, mask_high, &stats);
        result.branches = stats;
    } else {
        result.image = std::move(fused);
    }
    return result;
}

}  // namespace svehdr
