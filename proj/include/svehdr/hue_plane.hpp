#pragma once

// Constant-hue-plane color math. In RGB space all pixels sharing a hue lie
// on the triangle spanned by white (1,1,1), black (0,0,0) and the maximally
// saturated color of that hue. Decomposing a pixel over those vertices
// separates its hue (the saturated vertex) from its lightness/saturation
// (the barycentric coefficients), which is what allows transplanting a hue
// onto a pixel without touching its luminance order statistics.

#include "svehdr/core.hpp"

namespace svehdr {

// Channel spread at or below this is treated as hueless by every consumer
// that needs a defined hue (max_saturated_color, hue correction, metrics).
inline constexpr double kAchromaticEpsilon = 1e-6;

// Sentinel stored by decompose() for pixels with exactly zero channel
// spread; its coefficient is zero there, so it never affects recomposition.
inline constexpr Rgb kAchromaticSentinel{1.0, 0.0, 0.0};

inline bool is_chromatic(const Rgb& x) {
    return x.max_channel() - x.min_channel() > kAchromaticEpsilon;
}

struct HuePlaneDecomposition {
    double a_w = 0.0;  // white coefficient  = min(x)
    double a_k = 0.0;  // black coefficient  = 1 - max(x)
    double a_c = 0.0;  // chroma coefficient = max(x) - min(x)
    Rgb c;             // maximally saturated color, min 0 / max 1 when a_c > 0
};

// Normalizes a pixel onto the saturated-color locus (min channel 0, max 1).
// Throws AchromaticPixel when the spread is within kAchromaticEpsilon: the
// hue of a (near-)gray pixel is undefined and callers must decide policy.
inline Rgb max_saturated_color(const Rgb& x) {
    double mn = x.min_channel();
    double mx = x.max_channel();
    if (mx - mn <= kAchromaticEpsilon)
        throw AchromaticPixel("max_saturated_color: channel spread below epsilon");
    double d = mx - mn;
    return {(x.r - mn) / d, (x.g - mn) / d, (x.b - mn) / d};
}

// Closed-form barycentric decomposition over {white, black, c}. Total for
// every input: pixels with exactly equal channels get a_c = 0 and the
// sentinel, so recomposition reproduces them bit-exactly. Pixels with a
// tiny nonzero spread keep the exact formula (numerically stable, and the
// only choice that makes the round trip exact for all inputs).
inline HuePlaneDecomposition decompose(const Rgb& x) {
    double mn = x.min_channel();
    double mx = x.max_channel();
    HuePlaneDecomposition d;
    d.a_w = mn;
    d.a_k = 1.0 - mx;
    d.a_c = mx - mn;
    if (mx == mn) {
        d.a_c = 0.0;
        d.c = kAchromaticSentinel;
    } else {
        double s = mx - mn;
        d.c = {(x.r - mn) / s, (x.g - mn) / s, (x.b - mn) / s};
    }
    return d;
}

inline Rgb recompose(const HuePlaneDecomposition& d) {
    // a_k multiplies black and drops out.
    Rgb y{d.a_w + d.a_c * d.c.r, d.a_w + d.a_c * d.c.g, d.a_w + d.a_c * d.c.b};
    return clamp01(y);  // absorbs float drift only; never more than ~1 ulp
}

inline bool on_saturated_locus(const Rgb& c, double tol = 1e-9) {
    return c.min_channel() >= -tol && c.min_channel() <= tol &&
           c.max_channel() >= 1.0 - tol && c.max_channel() <= 1.0 + tol;
}

// Rebuilds x with its hue replaced by c_new: coefficients from x, hue from
// c_new. Achromatic x has a zero chroma coefficient and passes through.
inline Rgb transplant_hue(const Rgb& x, const Rgb& c_new) {
    if (!on_saturated_locus(c_new))
        throw InvalidSaturatedColor("transplant_hue: replacement color not maximally saturated");
    HuePlaneDecomposition d = decompose(x);
    d.c = c_new;
    return recompose(d);
}

}  // namespace svehdr
