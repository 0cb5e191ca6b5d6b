#pragma once

// Objective quality metrics for the A/B evaluation: cosine similarity of
// maximally saturated colors, the CIEDE2000 hue-difference term, and TMQI.

#include <cmath>
#include <cstdint>
#include <utility>

#include "svehdr/color.hpp"
#include "svehdr/core.hpp"
#include "svehdr/hue_plane.hpp"
#include "svehdr/tmqi.hpp"

namespace svehdr {

struct MetricsReport {
    double cosine_similarity_mean = 0.0;  // in [-1,1], larger is better
    double ciede2000_hue_mean = 0.0;      // >= 0, smaller is better
    double tmqi = 0.0;                    // in [0,1], larger is better
    double tmqi_structural = 0.0;
    double tmqi_naturalness = 0.0;
    std::int64_t pixel_count = 0;         // pixels included in the cosine mean
    std::int64_t skipped_achromatic = 0;  // pixels without a defined hue
};

struct CosineSimilarityDetail {
    double mean = 0.0;
    std::int64_t included = 0;
    std::int64_t skipped = 0;
};

// Mean cosine between the maximally saturated colors of co-located pixels.
// Pixels where either side is achromatic have no defined hue and are
// skipped; the mean covers the rest.
inline CosineSimilarityDetail max_sat_cosine_detail(const RgbImage& reference,
                                                    const RgbImage& test) {
    require_same_size(reference, test, "max_sat_cosine_similarity");
    CosineSimilarityDetail detail;
    KahanSum sum;
    for (int y = 0; y < reference.height(); ++y) {
        for (int x = 0; x < reference.width(); ++x) {
            const Rgb& a = reference(x, y);
            const Rgb& b = test(x, y);
            if (!is_chromatic(a) || !is_chromatic(b)) {
                ++detail.skipped;
                continue;
            }
            Rgb ca = max_saturated_color(a);
            Rgb cb = max_saturated_color(b);
            double dot = ca.r * cb.r + ca.g * cb.g + ca.b * cb.b;
            double na = std::sqrt(ca.r * ca.r + ca.g * ca.g + ca.b * ca.b);
            double nb = std::sqrt(cb.r * cb.r + cb.g * cb.g + cb.b * cb.b);
            sum.add(dot / (na * nb));
            ++detail.included;
        }
    }
    detail.mean = detail.included
                      ? sum.value() / static_cast<double>(detail.included)
                      : 0.0;
    return detail;
}

inline double max_sat_cosine_similarity(const RgbImage& reference,
                                        const RgbImage& test) {
    return max_sat_cosine_detail(reference, test).mean;
}

// Mean CIEDE2000 hue-difference magnitude over all pixels. Both images are
// taken as display-referred sRGB. Achromatic pixels contribute zero (the
// hue term vanishes at zero chroma) and are included in the mean.
inline double ciede2000_hue_difference(const RgbImage& reference,
                                       const RgbImage& test) {
    require_same_size(reference, test, "ciede2000_hue_difference");
    KahanSum sum;
    for (int y = 0; y < reference.height(); ++y)
        for (int x = 0; x < reference.width(); ++x)
            sum.add(ciede2000_hue_term(srgb_to_lab(reference(x, y)),
                                       srgb_to_lab(test(x, y))));
    return sum.value() / static_cast<double>(reference.pixel_count());
}

// The ideal noise-free 0 EV capture: the anchored scene clipped to the
// display range. This is the reference the per-pixel hue metrics compare
// against, matching the exposure the pipeline compensates to.
inline RgbImage reference_ldr(const HdrImage& anchored_scene) {
    RgbImage out(anchored_scene.width(), anchored_scene.height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) out(x, y) = clamp01(anchored_scene(x, y));
    return out;
}

inline MetricsReport evaluate_one(const HdrImage& anchored_scene,
                                  const RgbImage& reconstructed) {
    RgbImage reference = reference_ldr(anchored_scene);
    MetricsReport report;
    CosineSimilarityDetail cosine = max_sat_cosine_detail(reference, reconstructed);
    report.cosine_similarity_mean = cosine.mean;
    report.pixel_count = cosine.included;
    report.skipped_achromatic = cosine.skipped;
    report.ciede2000_hue_mean = ciede2000_hue_difference(reference, reconstructed);
    TmqiResult t = tmqi(anchored_scene, reconstructed);
    report.tmqi = t.overall;
    report.tmqi_structural = t.structural;
    report.tmqi_naturalness = t.naturalness;
    return report;
}

// Scores both pipeline outputs against the same HDR-derived reference.
inline std::pair<MetricsReport, MetricsReport> evaluate_pair(
    const HdrImage& anchored_scene, const RgbImage& conventional,
    const RgbImage& proposed) {
    return {evaluate_one(anchored_scene, conventional),
            evaluate_one(anchored_scene, proposed)};
}

}  // namespace svehdr
