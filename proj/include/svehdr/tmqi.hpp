#pragma once

// Tone Mapped image Quality Index after H. Yeganeh and Z. Wang, "Objective
// Quality Assessment of Tone-Mapped Images", IEEE Trans. Image Processing
// 22(2), 2013, including the authors' published constants. Structural
// fidelity compares local signal strength between the HDR and LDR luminance
// across a 5-level pyramid; statistical naturalness scores the LDR's global
// brightness and contrast against the published Gaussian and Beta fits.

#include <cmath>
#include <vector>

#include "svehdr/core.hpp"

namespace svehdr {

struct TmqiResult {
    double overall = 0.0;
    double structural = 0.0;
    double naturalness = 0.0;
};

namespace tmqi_detail {

inline constexpr int kWindowSize = 11;
inline constexpr double kWindowSigma = 1.5;
inline constexpr int kLevels = 5;
inline constexpr double kLevelWeights[kLevels] = {0.0448, 0.2856, 0.3001, 0.2363,
                                                  0.1333};
inline constexpr double kC1 = 0.01;
inline constexpr double kC2 = 10.0;

inline double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

inline std::vector<double> gaussian_window() {
    std::vector<double> w(kWindowSize);
    double sum = 0.0;
    for (int i = 0; i < kWindowSize; ++i) {
        double d = i - (kWindowSize - 1) / 2.0;
        w[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// 'valid'-mode correlation with a separable kernel; output shrinks by
// kWindowSize-1 in each dimension.
inline Plane<double> filter_valid(const Plane<double>& img,
                                  const std::vector<double>& k) {
    int kw = static_cast<int>(k.size());
    Plane<double> rows(img.width() - kw + 1, img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < rows.width(); ++x) {
            double s = 0.0;
            for (int i = 0; i < kw; ++i) s += k[i] * img(x + i, y);
            rows(x, y) = s;
        }
    Plane<double> out(rows.width(), img.height() - kw + 1);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            double s = 0.0;
            for (int i = 0; i < kw; ++i) s += k[i] * rows(x, y + i);
            out(x, y) = s;
        }
    return out;
}

// 2x2 block mean with stride 2; odd trailing blocks clamp to the edge.
inline Plane<double> downsample2(const Plane<double>& img) {
    int w = (img.width() + 1) / 2;
    int h = (img.height() + 1) / 2;
    Plane<double> out(w, h);
    for (int y = 0; y < h; ++y) {
        int y0 = 2 * y;
        int y1 = std::min(2 * y + 1, img.height() - 1);
        for (int x = 0; x < w; ++x) {
            int x0 = 2 * x;
            int x1 = std::min(2 * x + 1, img.width() - 1);
            out(x, y) = 0.25 * (img(x0, y0) + img(x1, y0) + img(x0, y1) + img(x1, y1));
        }
    }
    return out;
}

// Local structural fidelity at one scale. sf is the level's spatial
// frequency in cycles/degree, feeding the contrast sensitivity model that
// sets the signal-strength threshold.
inline double structural_fidelity_level(const Plane<double>& l_hdr,
                                        const Plane<double>& l_ldr, double sf) {
    static const std::vector<double> window = gaussian_window();

    Plane<double> mu1 = filter_valid(l_hdr, window);
    Plane<double> mu2 = filter_valid(l_ldr, window);

    Plane<double> sq1(l_hdr.width(), l_hdr.height());
    Plane<double> sq2(l_hdr.width(), l_hdr.height());
    Plane<double> cross(l_hdr.width(), l_hdr.height());
    for (int y = 0; y < l_hdr.height(); ++y)
        for (int x = 0; x < l_hdr.width(); ++x) {
            double a = l_hdr(x, y);
            double b = l_ldr(x, y);
            sq1(x, y) = a * a;
            sq2(x, y) = b * b;
            cross(x, y) = a * b;
        }
    Plane<double> m11 = filter_valid(sq1, window);
    Plane<double> m22 = filter_valid(sq2, window);
    Plane<double> m12 = filter_valid(cross, window);

    double csf = 100.0 * 2.6 * (0.0192 + 0.114 * sf) *
                 std::exp(-std::pow(0.114 * sf, 1.1));
    double u = 128.0 / (1.4 * csf);
    double sig = u / 3.0;

    KahanSum sum;
    for (int y = 0; y < mu1.height(); ++y)
        for (int x = 0; x < mu1.width(); ++x) {
            double s1 = std::sqrt(std::max(0.0, m11(x, y) - mu1(x, y) * mu1(x, y)));
            double s2 = std::sqrt(std::max(0.0, m22(x, y) - mu2(x, y) * mu2(x, y)));
            double s12 = m12(x, y) - mu1(x, y) * mu2(x, y);
            double p1 = normal_cdf(s1, u, sig);
            double p2 = normal_cdf(s2, u, sig);
            double structure = (s12 + kC2) / (s1 * s2 + kC2);
            double strength = (2.0 * p1 * p2 + kC1) / (p1 * p1 + p2 * p2 + kC1);
            sum.add(strength * structure);
        }
    double n = static_cast<double>(mu1.pixel_count());
    double s = sum.value() / n;
    return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

inline double structural_fidelity(Plane<double> l_hdr, Plane<double> l_ldr) {
    double s = 1.0;
    double sf = 32.0;
    for (int level = 0; level < kLevels; ++level) {
        sf /= 2.0;
        s *= std::pow(structural_fidelity_level(l_hdr, l_ldr, sf),
                      kLevelWeights[level]);
        if (level + 1 < kLevels) {
            l_hdr = downsample2(l_hdr);
            l_ldr = downsample2(l_ldr);
        }
    }
    return s;
}

// Sample standard deviation over 11x11 blocks; trailing partial blocks are
// taken as-is rather than zero-padded.
inline double mean_block_std(const Plane<double>& img) {
    constexpr int kBlock = 11;
    KahanSum block_sum;
    std::int64_t blocks = 0;
    for (int by = 0; by < img.height(); by += kBlock) {
        int y1 = std::min(by + kBlock, img.height());
        for (int bx = 0; bx < img.width(); bx += kBlock) {
            int x1 = std::min(bx + kBlock, img.width());
            int n = (y1 - by) * (x1 - bx);
            double mean = 0.0;
            for (int y = by; y < y1; ++y)
                for (int x = bx; x < x1; ++x) mean += img(x, y);
            mean /= n;
            double var = 0.0;
            for (int y = by; y < y1; ++y)
                for (int x = bx; x < x1; ++x) {
                    double d = img(x, y) - mean;
                    var += d * d;
                }
            block_sum.add(n > 1 ? std::sqrt(var / (n - 1)) : 0.0);
            ++blocks;
        }
    }
    return block_sum.value() / static_cast<double>(blocks);
}

inline double statistical_naturalness(const Plane<double>& l_ldr) {
    double u = kahan_mean(l_ldr.begin(), l_ldr.end());
    double sig = mean_block_std(l_ldr);

    // Brightness: Gaussian model. The normalization constant cancels in
    // the ratio against the density peak.
    constexpr double mu_hat = 115.94;
    constexpr double sigma_hat = 27.99;
    double pb = std::exp(-(u - mu_hat) * (u - mu_hat) / (2.0 * sigma_hat * sigma_hat));

    // Contrast: Beta(4.4, 10.1) model on sig/64.29.
    constexpr double alpha = 4.4;
    constexpr double beta = 10.1;
    auto beta_pdf = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        double log_b =
            std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
        return std::exp((alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log(1.0 - x) -
                        log_b);
    };
    constexpr double mode = (alpha - 1.0) / (alpha + beta - 2.0);
    double pc = beta_pdf(sig / 64.29) / beta_pdf(mode);

    return pb * pc;
}

}  // namespace tmqi_detail

// Both inputs as luminance planes: the HDR in any positive linear scale
// (it is renormalized to the model's 32-bit range internally), the LDR in
// display units [0,255].
inline TmqiResult tmqi_luminance(const Plane<double>& l_hdr,
                                 const Plane<double>& l_ldr) {
    using namespace tmqi_detail;
    if (!l_hdr.same_size(l_ldr))
        throw DimensionMismatch("tmqi: luminance dimensions differ");

    // The 5-level pyramid needs at least one valid 11x11 window at the top.
    int w = l_hdr.width(), h = l_hdr.height();
    for (int level = 1; level < kLevels; ++level) {
        w = (w + 1) / 2;
        h = (h + 1) / 2;
    }
    if (w < kWindowSize || h < kWindowSize)
        throw ImageTooSmall("tmqi: image too small for the 5-level pyramid");

    double lmin = l_hdr(0, 0), lmax = l_hdr(0, 0);
    for (double v : l_hdr) {
        lmin = std::min(lmin, v);
        lmax = std::max(lmax, v);
    }
    if (!(lmax > lmin))
        throw DegenerateImage("tmqi: constant HDR luminance has no structure");
    if (!(lmax > 0.0))
        throw DegenerateImage("tmqi: HDR luminance must be positive somewhere");

    Plane<double> hdr_scaled(l_hdr.width(), l_hdr.height());
    double scale = (std::exp2(32.0) - 1.0) / (lmax - lmin);
    for (int y = 0; y < l_hdr.height(); ++y)
        for (int x = 0; x < l_hdr.width(); ++x)
            hdr_scaled(x, y) = std::round(scale * (l_hdr(x, y) - lmin));

    TmqiResult r;
    r.structural = structural_fidelity(std::move(hdr_scaled), l_ldr);
    r.naturalness = statistical_naturalness(l_ldr);

    constexpr double a = 0.8012;
    constexpr double alpha = 0.3046;
    constexpr double beta = 0.7088;
    r.overall = a * std::pow(r.structural, alpha) +
                (1.0 - a) * std::pow(r.naturalness, beta);
    return r;
}

// HDR in linear radiance, LDR with channels in [0,1].
inline TmqiResult tmqi(const HdrImage& hdr, const RgbImage& ldr) {
    if (!hdr.same_size(ldr)) throw DimensionMismatch("tmqi: dimensions differ");
    Plane<double> l_hdr(hdr.width(), hdr.height());
    Plane<double> l_ldr(hdr.width(), hdr.height());
    for (int y = 0; y < hdr.height(); ++y)
        for (int x = 0; x < hdr.width(); ++x) {
            l_hdr(x, y) = luma709(hdr(x, y));
            l_ldr(x, y) = 255.0 * luma709(ldr(x, y));
        }
    return tmqi_luminance(l_hdr, l_ldr);
}

}  // namespace svehdr
