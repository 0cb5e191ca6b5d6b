#pragma once

// Core value types shared by every module: the 2-D plane container, the
// RGB triplet, the error hierarchy, and small numeric helpers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace svehdr {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct BadDimensions : Error {
    using Error::Error;
};
struct AchromaticPixel : Error {
    using Error::Error;
};
struct InvalidSaturatedColor : Error {
    using Error::Error;
};
struct InvalidExposurePair : Error {
    using Error::Error;
};
struct DegenerateImage : Error {
    using Error::Error;
};
struct ImageTooSmall : Error {
    using Error::Error;
};
struct InvalidManifest : Error {
    using Error::Error;
};

// I/O errors are kept distinct so the CLI can map them to exit codes.
struct IoError : Error {
    using Error::Error;
};
struct UnsupportedFormat : IoError {
    using IoError::IoError;
};
struct CorruptHeader : IoError {
    using IoError::IoError;
};
struct TruncatedData : IoError {
    using IoError::IoError;
};
struct IoFailure : IoError {
    using IoError::IoError;
};

// ---------------------------------------------------------------------------
// Pixel and plane

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    double& operator[](int i) { return i == 0 ? r : (i == 1 ? g : b); }
    double operator[](int i) const { return i == 0 ? r : (i == 1 ? g : b); }

    double min_channel() const { return std::min(r, std::min(g, b)); }
    double max_channel() const { return std::max(r, std::max(g, b)); }

    friend Rgb operator+(Rgb a, Rgb b) { return {a.r + b.r, a.g + b.g, a.b + b.b}; }
    friend Rgb operator-(Rgb a, Rgb b) { return {a.r - b.r, a.g - b.g, a.b - b.b}; }
    friend Rgb operator*(Rgb a, double s) { return {a.r * s, a.g * s, a.b * s}; }
    friend Rgb operator*(double s, Rgb a) { return a * s; }
    friend bool operator==(const Rgb& a, const Rgb& b) {
        return a.r == b.r && a.g == b.g && a.b == b.b;
    }
};

// Rec. 709 luma of linear values; used as the scene luminance proxy.
inline double luma709(const Rgb& p) {
    return 0.2126 * p.r + 0.7152 * p.g + 0.0722 * p.b;
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline Rgb clamp01(const Rgb& p) {
    return {clamp01(p.r), clamp01(p.g), clamp01(p.b)};
}

// Row-major 2-D grid. x indexes columns, y rows.
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {
        if (width <= 0 || height <= 0)
            throw BadDimensions("plane dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t pixel_count() const {
        return static_cast<std::int64_t>(width_) * height_;
    }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    bool same_size(const Plane& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    size_t index(int x, int y) const {
        return static_cast<size_t>(y) * static_cast<size_t>(width_) +
               static_cast<size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using RawImage = Plane<double>;  // single CFA channel per site, values in [0,1]
using RgbImage = Plane<Rgb>;     // display-range image, channels in [0,1]
using HdrImage = Plane<Rgb>;     // linear scene radiance, non-negative, unbounded

inline void require_same_size(const RgbImage& a, const RgbImage& b, const char* what) {
    if (!a.same_size(b))
        throw DimensionMismatch(std::string(what) + ": image dimensions differ");
}

// ---------------------------------------------------------------------------
// Numerics

// Kahan compensated accumulator; keeps corpus means stable under pixel
// iteration-order permutations (< 1e-12 drift).
class KahanSum {
public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

template <typename It>
double kahan_mean(It first, It last) {
    KahanSum sum;
    std::int64_t n = 0;
    for (; first != last; ++first, ++n) sum.add(*first);
    return n ? sum.value() / static_cast<double>(n) : 0.0;
}

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// the mapping to doubles below avoids std distributions, whose streams are
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift* variant; fixed algorithm keeps corpora portable.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() %
                                     static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

// Stable seed derivation for per-scene streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace svehdr
