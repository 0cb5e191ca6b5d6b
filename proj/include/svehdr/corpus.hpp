#pragma once

// Corpus manifest and deterministic synthetic HDR scenes.
//
// Hue distortion in an SVE capture comes from partially clipped pixels:
// sites where some channels exceed a sensor range while others stay inside.
// Each recipe below places content in the radiometric bands where that
// happens for the EV pairs under test, and names the hue-correction branch
// it is built to exercise. Scene radiance is laid out in anchored units
// (geometric-mean luminance 0.18), so channel values can be read directly
// as 0 EV sensor exposure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "svehdr/core.hpp"
#include "svehdr/raw_sve.hpp"

namespace svehdr {

struct EvPair {
    double low = 0.0;
    double high = 0.0;
};

inline void validate_ev_pair(const EvPair& p) {
    if (!(p.low < p.high))
        throw InvalidManifest("EV pair requires low < high");
}

struct SceneSpec {
    std::string id;
    std::string recipe;               // synthetic recipe name, or empty
    std::filesystem::path hdr_path;   // HDR file, or empty
    int width = 192;
    int height = 192;
};

struct CorpusManifest {
    std::uint64_t seed = 1;
    std::vector<EvPair> ev_pairs;
    std::vector<SceneSpec> scenes;

    void validate() const {
        if (scenes.empty()) throw InvalidManifest("manifest has no scenes");
        if (ev_pairs.empty()) throw InvalidManifest("manifest has no EV pairs");
        for (const EvPair& p : ev_pairs) validate_ev_pair(p);
        std::vector<std::string> ids;
        for (const SceneSpec& s : scenes) {
            if (s.id.empty()) throw InvalidManifest("scene with empty id");
            if (s.recipe.empty() == s.hdr_path.empty())
                throw InvalidManifest("scene '" + s.id +
                                      "' needs exactly one of recipe or path");
            if (s.recipe.empty() && !std::filesystem::exists(s.hdr_path))
                throw InvalidManifest("scene '" + s.id + "': missing file " +
                                      s.hdr_path.string());
            // File scenes take their dimensions from the file itself.
            if (!s.recipe.empty() &&
                (s.width % 4 != 0 || s.height % 4 != 0 || s.width <= 0 || s.height <= 0))
                throw InvalidManifest("scene '" + s.id +
                                      "': dimensions must be positive multiples of 4");
            ids.push_back(s.id);
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            throw InvalidManifest("duplicate scene ids");
    }

    static CorpusManifest builtin(std::uint64_t seed);
};

namespace corpus_detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Fully saturated color of the given hue (in turns); min channel 0, max 1.
inline Rgb hue_color(double turns) {
    double h = (turns - std::floor(turns)) * 6.0;
    int sector = static_cast<int>(h);
    double f = h - sector;
    switch (sector) {
        case 0: return {1.0, f, 0.0};
        case 1: return {1.0 - f, 1.0, 0.0};
        case 2: return {0.0, 1.0, f};
        case 3: return {0.0, 1.0 - f, 1.0};
        case 4: return {f, 0.0, 1.0};
        default: return {1.0, 0.0, 1.0 - f};
    }
}

inline Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    return a * (1.0 - t) + b * t;
}

inline double smoothstep(double t) {
    t = clamp01(t);
    return t * t * (3.0 - 2.0 * t);
}

// ---- luma-exact gradients --------------------------------------------------
//
// These recipes fix each pixel's luminance to 0.18 * 2^u with a zero-mean u
// field, which pins the scene's geometric-mean luminance to 0.18 without a
// global rescale. Saturation is capped per pixel so no channel exceeds
// kGradientMaxChannel; at +/-1 EV nothing clips in either band. The cap
// also keeps the bright rows in the regime where a clipped high band sits
// close enough to their level to distort the fused hue noticeably, instead
// of being averaged away.

inline constexpr double kGradientMaxChannel = 0.34;

inline Rgb luma_pinned_color(double target_luma, const Rgb& chroma_direction,
                             double saturation, double min_saturation = 0.1) {
    // Cap saturation so max channel stays within kGradientMaxChannel.
    double cl = luma709(chroma_direction);
    double cap = (1.0 - target_luma / kGradientMaxChannel) / (1.0 - cl);
    double s = std::clamp(std::min(saturation, cap), min_saturation, 1.0);
    Rgb base = lerp({1.0, 1.0, 1.0}, chroma_direction, s);
    return base * (target_luma / luma709(base));
}

// Saturation that puts the pixel's min channel at min_target (before the
// max-channel cap): dark rows get deeply saturated colors whose faint
// channels drown in the coarse low-exposure quantization, which is the
// regime where hue estimation must fall through rather than trust them.
inline Rgb luma_pinned_min_target(double target_luma, const Rgb& chroma_direction,
                                  double min_target) {
    double cl = luma709(chroma_direction);
    double r = std::clamp(min_target / target_luma, 0.02, 0.6);
    double s = (1.0 - r) / (1.0 - r * (1.0 - cl));
    return luma_pinned_color(target_luma, chroma_direction, s);
}

inline void center_log_field(Plane<double>& u) {
    double mean = kahan_mean(u.begin(), u.end());
    for (double& v : u) v -= mean;
}

// Strip chart: hue, lightness and saturation all sweep along x and every
// column is constant, so the row-pair interpolation reproduces the scene
// exactly. This is the reference scene for the no-clipping checks.
inline HdrImage gradient_chart(int w, int h, Rng& rng) {
    double hue_offset = rng.uniform();

    std::vector<double> u(static_cast<size_t>(w));
    KahanSum u_sum;
    for (int x = 0; x < w; ++x) {
        double t3 = 3.0 * (x + 0.5) / w;          // three lightness triangles
        double tri = 2.0 * std::fabs(t3 - std::floor(t3) - 0.5);
        u[static_cast<size_t>(x)] = 0.9 * (2.0 * tri - 1.0);
        u_sum.add(u[static_cast<size_t>(x)]);
    }
    double u_mean = u_sum.value() / w;

    HdrImage img(w, h);
    for (int x = 0; x < w; ++x) {
        double t = 0.18 * std::exp2(u[static_cast<size_t>(x)] - u_mean);
        Rgb c = hue_color(hue_offset + static_cast<double>(x) / w);
        double min_target = 0.007 * std::exp2(1.9 * static_cast<double>(x) / (w - 1));
        Rgb color = luma_pinned_min_target(t, c, min_target);
        for (int y = 0; y < h; ++y) img(x, y) = color;
    }
    return img;
}

inline HdrImage hue_wheel(int w, int h, Rng& rng) {
    double hue_offset = rng.uniform();
    double cx = w / 2.0, cy = h / 2.0;
    double rmax = std::sqrt(cx * cx + cy * cy);

    Plane<double> u(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double r = std::hypot(x + 0.5 - cx, y + 0.5 - cy) / rmax;
            u(x, y) = 0.9 * (1.0 - 2.0 * r);  // bright bullseye, dark rim
        }
    center_log_field(u);

    HdrImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double angle = std::atan2(y + 0.5 - cy, x + 0.5 - cx);
            double r = std::hypot(x + 0.5 - cx, y + 0.5 - cy) / rmax;
            Rgb c = hue_color(hue_offset + angle / (2.0 * 3.14159265358979323846));
            double min_target = 0.007 * std::exp2(1.9 * r);
            img(x, y) = luma_pinned_min_target(0.18 * std::exp2(u(x, y)), c, min_target);
        }
    }
    return img;
}

inline HdrImage two_color_blend(int w, int h, Rng& rng) {
    // Tertiary endpoints one sector apart: the straight-line blend then
    // always keeps two channels strong, so no part of the ramp degenerates
    // into a near-primary whose faint channels defeat the raw sampling.
    double hue_a = (rng.uniform_int(0, 5) + rng.uniform(0.35, 0.65)) / 6.0;
    double hue_b = hue_a + (1.0 + rng.uniform(-0.3, 0.3)) / 6.0;
    Rgb ca = hue_color(hue_a);
    Rgb cb = hue_color(hue_b);

    Plane<double> u(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            u(x, y) = 0.85 * (2.0 * (x + y + 1.0) / (w + h) - 1.0);
    center_log_field(u);

    HdrImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double t = static_cast<double>(x) / (w - 1);
            Rgb blend = lerp(ca, cb, t);
            double min_target =
                0.007 * std::exp2(1.9 * static_cast<double>(y) / (h - 1));
            img(x, y) = luma_pinned_min_target(0.18 * std::exp2(u(x, y)), blend,
                                               min_target);
        }
    }
    return img;
}

// ---- background calibration ------------------------------------------------

// Gray level for the masked background that pins the scene's geometric-mean
// luminance to 0.18; overly bright or dark solutions are clamped and the
// residual shows up as a small anchor-gain deviation downstream.
inline double solve_background(const HdrImage& img, const Plane<std::uint8_t>& is_bg) {
    KahanSum fg_log;
    std::int64_t n_fg = 0, n_bg = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            if (is_bg(x, y)) {
                ++n_bg;
            } else {
                fg_log.add(std::log(luma709(img(x, y))));
                ++n_fg;
            }
        }
    if (n_bg == 0) return 0.18;
    double total = static_cast<double>(n_fg + n_bg);
    double target = total * std::log(0.18) - fg_log.value();
    return std::clamp(std::exp(target / static_cast<double>(n_bg)), 0.04, 0.42);
}

// ---- clipped-content recipes -----------------------------------------------

// A dim saturated color whose strongest channel alone drives the wide-pair
// clipping while all three stay above the low band's quantization floor.
// When only that one channel saturates, the clipped capture drags the fused
// color toward its floor instead of toward gray, which is exactly the
// distortion the low-exposure hue estimate removes.
inline Rgb ember_color(Rng& rng) {
    Rgb v{rng.uniform(0.18, 0.26), rng.uniform(0.09, 0.12), rng.uniform(0.040, 0.048)};
    int perm = rng.uniform_int(0, 5);
    switch (perm) {
        case 0: return {v.r, v.g, v.b};
        case 1: return {v.r, v.b, v.g};
        case 2: return {v.g, v.r, v.b};
        case 3: return {v.g, v.b, v.r};
        case 4: return {v.b, v.r, v.g};
        default: return {v.b, v.g, v.r};
    }
}

// Saturated patches under soft spotlights, plus a few dim "ember" patches.
// Spotlit cores reach max channels of 0.7-0.9, so the high band over-clips
// partially at every pair +/-1..4 EV while the low band stays valid: the
// branch that re-estimates hue from the low exposure does real work here.
// The embers carry the widest pairs, where bright cores clip completely.
inline HdrImage spotlight_patches(int w, int h, Rng& rng) {
    HdrImage img(w, h, Rgb{0.0, 0.0, 0.0});
    Plane<std::uint8_t> is_bg(w, h, 1);

    const int cell = 32;
    int nx = w / cell, ny = h / cell;
    std::vector<double> patch_max(static_cast<size_t>(nx) * ny, 0.18);
    std::vector<std::uint8_t> is_ember(static_cast<size_t>(nx) * ny, 0);
    for (int i = 0; i < 8; ++i)
        is_ember[static_cast<size_t>(rng.uniform_int(0, nx * ny - 1))] = 1;

    for (int py = 0; py < ny; ++py) {
        for (int px = 0; px < nx; ++px) {
            size_t idx = static_cast<size_t>(py) * nx + px;
            Rgb color;
            if (is_ember[idx]) {
                color = ember_color(rng);
                patch_max[idx] = color.max_channel();
            } else {
                double m = std::exp(rng.uniform(std::log(0.24), std::log(0.48)));
                double rho = rng.uniform(0.025, 0.04);
                // Tertiary hues keep the middle channel strong, so a clipped
                // capture still leaves two well-measured channels behind.
                int sector = rng.uniform_int(0, 5);
                color = (hue_color((sector + rng.uniform(0.35, 0.65)) / 6.0) *
                             (1.0 - rho) +
                         Rgb{1.0, 1.0, 1.0} * rho) * m;
                patch_max[idx] = m;
            }
            for (int y = py * cell + 3; y < (py + 1) * cell - 3; ++y)
                for (int x = px * cell + 3; x < (px + 1) * cell - 3; ++x) {
                    img(x, y) = color;
                    is_bg(x, y) = 0;
                }
        }
    }

    int spots = rng.uniform_int(7, 9);
    for (int i = 0; i < spots; ++i) {
        int px = rng.uniform_int(0, nx - 1), py = rng.uniform_int(0, ny - 1);
        double cx = (px + 0.5) * cell, cy = (py + 0.5) * cell;
        double sigma = rng.uniform(30.0, 44.0);
        double target = rng.uniform(0.70, 0.90);
        double boost = target / patch_max[static_cast<size_t>(py) * nx + px];
        if (boost <= 1.0) continue;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (is_bg(x, y)) continue;
                // Embers keep their calibrated levels.
                if (is_ember[static_cast<size_t>(y / cell) * nx + x / cell]) continue;
                double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                double t = 1.0 + (boost - 1.0) * std::exp(-d2 / (2.0 * sigma * sigma));
                double mc = img(x, y).max_channel();
                if (mc * t > 0.92) t = 0.92 / mc;  // reference stays unclipped
                if (t > 1.0) img(x, y) = img(x, y) * t;
            }
    }

    double bg = solve_background(img, is_bg);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (is_bg(x, y)) img(x, y) = {bg, bg, bg};
    return img;
}

// Chromatic pools sinking into shadow over a neutral background. Pool
// colors keep their faintest channel under the low band's quantization
// floor at every pair while the strongest stays measurable, so the low
// exposure is partially under-clipped there; the high band sees the whole
// pool unclipped (max channels stay below 1/16) and donates the hue.
inline HdrImage deep_shadow(int w, int h, Rng& rng) {
    HdrImage img(w, h, Rgb{0.0, 0.0, 0.0});
    Plane<std::uint8_t> is_bg(w, h, 1);

    // Pool area is capped near 10% of the frame: the log-mean of the deep
    // content is several stops down, and the background can only pull the
    // scene's geometric mean back to middle gray when it dominates.
    struct Pool {
        double cx, cy, radius;
        double k_center, k_edge;
        Rgb ratios;
    };
    std::vector<Pool> pools(static_cast<size_t>(rng.uniform_int(3, 4)));
    for (Pool& p : pools) {
        p.cx = rng.uniform(0.18, 0.82) * w;
        p.cy = rng.uniform(0.18, 0.82) * h;
        p.radius = rng.uniform(0.08, 0.12) * std::min(w, h);
        p.k_center = rng.uniform(0.034, 0.048);
        p.k_edge = 0.05;
        p.ratios = {1.0, rng.uniform(0.33, 0.42), rng.uniform(0.05, 0.07)};
        int perm = rng.uniform_int(0, 2);  // rotate which channel leads
        for (int r = 0; r < perm; ++r)
            p.ratios = {p.ratios.b, p.ratios.r, p.ratios.g};
    }

    for (const Pool& p : pools)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double d = std::hypot(x - p.cx, y - p.cy);
                if (d >= p.radius) continue;
                double t = smoothstep(d / p.radius);  // 0 at center, 1 at rim
                double k = std::exp(std::log(p.k_center) +
                                    t * (std::log(p.k_edge) - std::log(p.k_center)));
                img(x, y) = p.ratios * k;
                is_bg(x, y) = 0;
            }

    double bg = solve_background(img, is_bg);

    // Penumbra: a neutral luminance ramp from each pool rim up to the
    // background. A hard multi-stop edge would bleed background light
    // through the demosaic into the pool's high-band hues; starting the
    // ramp at the rim's own luminance keeps that bleed luma-matched, and
    // keeping it gray keeps it out of the hue bookkeeping entirely.
    for (const Pool& p : pools) {
        double outer = 1.35 * p.radius;
        double rim_luma = luma709(p.ratios * p.k_edge);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double d = std::hypot(x - p.cx, y - p.cy);
                if (d < p.radius || d >= outer || !is_bg(x, y)) continue;
                double t = smoothstep((d - p.radius) / (outer - p.radius));
                double level = std::exp((1.0 - t) * std::log(rim_luma) +
                                        t * std::log(bg));
                img(x, y) = {level, level, level};
                is_bg(x, y) = 0;
            }
    }

    bg = solve_background(img, is_bg);

    // A softly tinted backdrop instead of flat gray. It behaves like the
    // gradient scenes (nearly neutral under hue correction, mild gains when
    // its bright swells clip at wide pairs) and keeps the pools, which are
    // noisy material for the metrics at narrow pairs, from dominating the
    // scene's per-pixel hue averages.
    double level = std::min(bg, 0.36);
    double hue0 = rng.uniform();
    double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!is_bg(x, y)) continue;
            double fx = static_cast<double>(x) / w, fy = static_cast<double>(y) / h;
            double ripple =
                0.35 * std::sin(phase + 2.0 * 3.14159265358979323846 * (1.7 * fx + 0.9 * fy));
            double t = level * std::exp2(ripple);
            double m_t = 0.009 * std::exp2(1.5 * (0.5 + 0.5 * std::sin(2.0 * 3.14159265358979323846 *
                                                                       (0.8 * fy - 1.3 * fx))));
            Rgb c = hue_color(hue0 + 0.2 * std::sin(2.0 * 3.14159265358979323846 * fy));
            img(x, y) = luma_pinned_min_target(t, c, m_t);
        }
    return img;
}

// Gradient band, spotlit patches and shadow pools in one frame, so a single
// capture exercises every hue branch, including the both-bands-clipped one.
inline HdrImage mixed_scene(int w, int h, Rng& rng) {
    HdrImage img(w, h, Rgb{0.0, 0.0, 0.0});
    Plane<std::uint8_t> is_bg(w, h, 1);

    // Top band: unclipped gradient.
    int band = h / 3;
    double hue_offset = rng.uniform();
    for (int y = 0; y < band; ++y)
        for (int x = 0; x < w; ++x) {
            double t = 0.18 * std::exp2(0.8 * (2.0 * (y + 0.5) / band - 1.0));
            Rgb c = hue_color(hue_offset + static_cast<double>(x) / w);
            double min_target =
                0.007 * std::exp2(1.9 * static_cast<double>(x) / (w - 1));
            img(x, y) = luma_pinned_min_target(t, c, min_target);
            is_bg(x, y) = 0;
        }

    // Middle band: a few saturated patches; bright ones over-clip at every
    // pair, the dimmer and the ember one only at wide pairs.
    int n_patches = 4;
    int pw = w / n_patches;
    for (int i = 0; i < n_patches; ++i) {
        Rgb color;
        if (i % 2 == 1) {
            color = ember_color(rng);
        } else {
            double m = rng.uniform(0.6, 0.88);
            double rho = rng.uniform(0.02, 0.034);
            color = (hue_color(rng.uniform()) * (1.0 - rho) +
                     Rgb{1.0, 1.0, 1.0} * rho) * m;
        }
        for (int y = band + 6; y < 2 * band - 6; ++y)
            for (int x = i * pw + 6; x < (i + 1) * pw - 6; ++x) {
                img(x, y) = color;
                is_bg(x, y) = 0;
            }
    }

    // Bottom band: two shadow pools plus a pitch-black pit. The pit
    // under-clips in both bands, so no exposure can donate a hue there:
    // its core fuses to black and its rim exercises the keep-fused branch.
    for (int i = 0; i < 2; ++i) {
        double cx = (0.25 + 0.5 * i) * w;
        double cy = h - band / 2.0;
        double radius = 0.38 * band;
        double k_center = rng.uniform(0.016, 0.03);
        Rgb ratios = i == 0 ? Rgb{1.0, 0.35, 0.06} : Rgb{0.08, 0.4, 1.0};
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double d = std::hypot(x - cx, y - cy);
                if (d >= radius) continue;
                double t = smoothstep(d / radius);
                double k = std::exp(std::log(k_center) +
                                    t * (std::log(0.04) - std::log(k_center)));
                img(x, y) = ratios * k;
                is_bg(x, y) = 0;
            }
    }
    double pit_cx = 0.75 * w, pit_cy = h - band / 2.0, pit_r = 0.2 * band;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (std::hypot(x - pit_cx, y - pit_cy) < pit_r) {
                img(x, y) = Rgb{1.0, 0.5, 0.1} * 1e-5;
                is_bg(x, y) = 0;
            }

    double bg = solve_background(img, is_bg);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (is_bg(x, y)) img(x, y) = {bg, bg, bg};
    return img;
}

}  // namespace corpus_detail

inline HdrImage generate_scene(const SceneSpec& spec, std::uint64_t corpus_seed) {
    if (spec.recipe.empty())
        throw InvalidManifest("scene '" + spec.id + "' is not synthetic");
    require_sve_dimensions(spec.width, spec.height);
    Rng rng(mix_seed(corpus_seed, corpus_detail::fnv1a(spec.id)));
    if (spec.recipe == "gradient_chart")
        return corpus_detail::gradient_chart(spec.width, spec.height, rng);
    if (spec.recipe == "hue_wheel")
        return corpus_detail::hue_wheel(spec.width, spec.height, rng);
    if (spec.recipe == "two_color_blend")
        return corpus_detail::two_color_blend(spec.width, spec.height, rng);
    if (spec.recipe == "spotlight_patches")
        return corpus_detail::spotlight_patches(spec.width, spec.height, rng);
    if (spec.recipe == "deep_shadow")
        return corpus_detail::deep_shadow(spec.width, spec.height, rng);
    if (spec.recipe == "mixed")
        return corpus_detail::mixed_scene(spec.width, spec.height, rng);
    throw InvalidManifest("unknown recipe '" + spec.recipe + "'");
}

inline std::vector<HdrImage> generate_synthetic_corpus(const CorpusManifest& manifest) {
    manifest.validate();
    std::vector<HdrImage> scenes;
    scenes.reserve(manifest.scenes.size());
    for (const SceneSpec& s : manifest.scenes) scenes.push_back(generate_scene(s, manifest.seed));
    return scenes;
}

inline CorpusManifest CorpusManifest::builtin(std::uint64_t seed) {
    CorpusManifest m;
    m.seed = seed;
    m.ev_pairs = {{-1.0, 1.0}, {-2.0, 2.0}, {-3.0, 3.0}, {-4.0, 4.0}};
    const char* recipes[4] = {"spotlight_patches", "deep_shadow", "mixed", nullptr};
    m.scenes.push_back({"gradient_chart", "gradient_chart", {}, 192, 192});
    m.scenes.push_back({"hue_wheel", "hue_wheel", {}, 192, 192});
    m.scenes.push_back({"two_color_blend", "two_color_blend", {}, 192, 192});
    for (int r = 0; recipes[r]; ++r)
        for (char v = 'a'; v <= 'c'; ++v)
            m.scenes.push_back({std::string(recipes[r]) + "_" + v, recipes[r], {}, 192, 192});
    return m;
}

// ---------------------------------------------------------------------------
// Manifest JSON

// { "seed": 7, "ev_pairs": [1, 2, [ -1.0, 3.0 ]],
//   "scenes": [ { "id": "a", "recipe": "mixed" },
//               { "id": "b", "path": "kitchen.hdr" } ] }
// A bare number n in ev_pairs means the symmetric pair (-n, +n).
inline CorpusManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidManifest(path.string() + ": " + e.what());
    }

    CorpusManifest m;
    try {
        m.seed = j.value("seed", 1ull);
        for (const auto& p : j.at("ev_pairs")) {
            if (p.is_number()) {
                double n = p.get<double>();
                m.ev_pairs.push_back({-n, n});
            } else {
                m.ev_pairs.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            }
        }
        for (const auto& s : j.at("scenes")) {
            SceneSpec spec;
            spec.id = s.at("id").get<std::string>();
            spec.recipe = s.value("recipe", "");
            std::string file = s.value("path", "");
            if (!file.empty()) {
                spec.hdr_path = std::filesystem::path(file);
                if (spec.hdr_path.is_relative())
                    spec.hdr_path = path.parent_path() / spec.hdr_path;
            }
            spec.width = s.value("width", 192);
            spec.height = s.value("height", 192);
            m.scenes.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidManifest(path.string() + ": " + e.what());
    }
    m.validate();
    return m;
}

}  // namespace svehdr
