#pragma once

// sRGB <-> CIELAB conversion and the CIEDE2000 color difference.
//
// The CIEDE2000 implementation follows G. Sharma, W. Wu and E. N. Dalal,
// "The CIEDE2000 Color-Difference Formula: Implementation Notes,
// Supplementary Test Data, and Mathematical Observations", Color Res. Appl.
// 30(1), 2005. The hue-difference term dH is exposed separately because the
// evaluation harness uses it as a standalone hue metric.

#include <cmath>

#include "svehdr/core.hpp"

namespace svehdr {

inline constexpr double kPi = 3.14159265358979323846;

// IEC 61966-2-1 piecewise transfer function.
inline double srgb_decode(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

inline double srgb_encode(double v) {
    v = clamp01(v);
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

inline Rgb srgb_encode(const Rgb& p) {
    return {srgb_encode(p.r), srgb_encode(p.g), srgb_encode(p.b)};
}

struct Lab {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// D65 2-degree reference white (x=0.3127, y=0.3290), matching the matrix
// row sums below so the white point lands exactly on L*=100, a*=b*=0.
inline constexpr double kWhiteX = 0.9504559270516718;
inline constexpr double kWhiteY = 1.0;
inline constexpr double kWhiteZ = 1.0890577507598784;

// Input is a display-referred (gamma-encoded) sRGB triplet in [0,1].
inline Lab srgb_to_lab(const Rgb& srgb) {
    double r = srgb_decode(srgb.r);
    double g = srgb_decode(srgb.g);
    double b = srgb_decode(srgb.b);

    double x = 0.4123907992659595 * r + 0.3575843393838780 * g + 0.1804807884018343 * b;
    double y = 0.2126390058715104 * r + 0.7151686787677559 * g + 0.0721923153607337 * b;
    double z = 0.0193308187155918 * r + 0.1191947797946259 * g + 0.9505321522496608 * b;

    auto fwd = [](double t) {
        constexpr double delta3 = 216.0 / 24389.0;  // (6/29)^3
        constexpr double k = 24389.0 / 27.0;        // (29/3)^3
        return t > delta3 ? std::cbrt(t) : (k * t + 16.0) / 116.0;
    };

    double fx = fwd(x / kWhiteX);
    double fy = fwd(y / kWhiteY);
    double fz = fwd(z / kWhiteZ);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

struct Ciede2000Result {
    double dE = 0.0;  // full color difference
    double dL = 0.0;  // lightness term L2' - L1'
    double dC = 0.0;  // chroma term C2' - C1'
    double dH = 0.0;  // hue term 2*sqrt(C1'*C2')*sin(dh'/2), signed
};

inline Ciede2000Result ciede2000(const Lab& lab1, const Lab& lab2) {
    constexpr double pow25_7 = 6103515625.0;  // 25^7
    const double deg2rad = kPi / 180.0;

    double c1 = std::hypot(lab1.a, lab1.b);
    double c2 = std::hypot(lab2.a, lab2.b);
    double c_mean = 0.5 * (c1 + c2);

    double c_mean7 = std::pow(c_mean, 7.0);
    double g = 0.5 * (1.0 - std::sqrt(c_mean7 / (c_mean7 + pow25_7)));

    double a1p = (1.0 + g) * lab1.a;
    double a2p = (1.0 + g) * lab2.a;
    double c1p = std::hypot(a1p, lab1.b);
    double c2p = std::hypot(a2p, lab2.b);

    auto hue_of = [&](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0;
        double h = std::atan2(b, ap);
        return h < 0.0 ? h + 2.0 * kPi : h;
    };
    double h1p = hue_of(a1p, lab1.b);
    double h2p = hue_of(a2p, lab2.b);

    double dLp = lab2.L - lab1.L;
    double dCp = c2p - c1p;

    double dhp;
    if (c1p * c2p == 0.0) {
        dhp = 0.0;
    } else {
        dhp = h2p - h1p;
        if (dhp > kPi)
            dhp -= 2.0 * kPi;
        else if (dhp < -kPi)
            dhp += 2.0 * kPi;
    }
    double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(0.5 * dhp);

    double L_mean = 0.5 * (lab1.L + lab2.L);
    double Cp_mean = 0.5 * (c1p + c2p);

    double hp_mean;
    if (c1p * c2p == 0.0) {
        hp_mean = h1p + h2p;
    } else {
        hp_mean = 0.5 * (h1p + h2p);
        if (std::fabs(h1p - h2p) > kPi) {
            if (hp_mean < kPi)
                hp_mean += kPi;
            else
                hp_mean -= kPi;
        }
    }

    double t = 1.0 - 0.17 * std::cos(hp_mean - 30.0 * deg2rad) +
               0.24 * std::cos(2.0 * hp_mean) +
               0.32 * std::cos(3.0 * hp_mean + 6.0 * deg2rad) -
               0.20 * std::cos(4.0 * hp_mean - 63.0 * deg2rad);

    double L_mean_sq = (L_mean - 50.0) * (L_mean - 50.0);
    double sL = 1.0 + 0.015 * L_mean_sq / std::sqrt(20.0 + L_mean_sq);
    double sC = 1.0 + 0.045 * Cp_mean;
    double sH = 1.0 + 0.015 * Cp_mean * t;

    double Cp_mean7 = std::pow(Cp_mean, 7.0);
    double rc = 2.0 * std::sqrt(Cp_mean7 / (Cp_mean7 + pow25_7));
    double hp_mean_deg = hp_mean / deg2rad;
    double d_theta = 30.0 * std::exp(-((hp_mean_deg - 275.0) / 25.0) *
                                     ((hp_mean_deg - 275.0) / 25.0));
    double rt = -std::sin(2.0 * d_theta * deg2rad) * rc;

    double tl = dLp / sL;
    double tc = dCp / sC;
    double th = dHp / sH;

    Ciede2000Result out;
    out.dL = dLp;
    out.dC = dCp;
    out.dH = dHp;
    out.dE = std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
    return out;
}

inline double ciede2000_delta_e(const Lab& a, const Lab& b) {
    return ciede2000(a, b).dE;
}

// Magnitude of the CIEDE2000 hue-difference term.
inline double ciede2000_hue_term(const Lab& a, const Lab& b) {
    return std::fabs(ciede2000(a, b).dH);
}

}  // namespace svehdr
