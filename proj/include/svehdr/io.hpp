#pragma once

// Image file I/O: PFM read/write (the lossless interchange format for all
// intermediates), Radiance RGBE read (real-world HDR inputs), and an 8-bit
// PNG writer for display output and masks. All readers/writers work on
// whole files and byte buffers, so results are identical across platforms.

#include <zlib.h>

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "svehdr/core.hpp"

namespace svehdr {

namespace io_detail {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("short write to " + path.string());
}

inline float byteswap_float(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u = ((u & 0xff000000u) >> 24) | ((u & 0x00ff0000u) >> 8) |
        ((u & 0x0000ff00u) << 8) | ((u & 0x000000ffu) << 24);
    std::memcpy(&v, &u, 4);
    return v;
}

inline constexpr bool host_little_endian() {
    return std::endian::native == std::endian::little;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// PFM

struct PfmData {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (Pf) or 3 (PF)
    std::vector<float> samples;  // top-to-bottom row order, interleaved
};

namespace io_detail {

struct PfmHeader {
    int channels = 0;
    int width = 0;
    int height = 0;
    bool little_endian = true;
    size_t data_offset = 0;
};

inline PfmHeader parse_pfm_header(const std::vector<std::uint8_t>& bytes,
                                  const std::string& name) {
    size_t pos = 0;
    auto next_token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        size_t start = pos;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
        if (start == pos) throw CorruptHeader(name + ": truncated PFM header");
        return std::string(bytes.begin() + start, bytes.begin() + pos);
    };

    PfmHeader h;
    std::string magic = next_token();
    if (magic == "PF")
        h.channels = 3;
    else if (magic == "Pf")
        h.channels = 1;
    else
        throw UnsupportedFormat(name + ": not a PFM file");

    try {
        h.width = std::stoi(next_token());
        h.height = std::stoi(next_token());
        double scale = std::stod(next_token());
        if (scale == 0.0) throw CorruptHeader(name + ": zero PFM scale");
        h.little_endian = scale < 0.0;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw CorruptHeader(name + ": malformed PFM header");
    }
    if (h.width <= 0 || h.height <= 0)
        throw CorruptHeader(name + ": bad PFM dimensions");

    if (pos >= bytes.size()) throw TruncatedData(name + ": missing PFM data");
    ++pos;  // single whitespace separates header and raster
    h.data_offset = pos;
    return h;
}

}  // namespace io_detail

inline PfmData read_pfm(const std::filesystem::path& path) {
    auto bytes = io_detail::read_file(path);
    auto h = io_detail::parse_pfm_header(bytes, path.filename().string());

    size_t values = static_cast<size_t>(h.width) * h.height * h.channels;
    if (bytes.size() - h.data_offset < values * 4)
        throw TruncatedData(path.filename().string() + ": PFM raster truncated");

    PfmData out;
    out.width = h.width;
    out.height = h.height;
    out.channels = h.channels;
    out.samples.resize(values);

    bool swap = h.little_endian != io_detail::host_little_endian();
    const std::uint8_t* src = bytes.data() + h.data_offset;
    // PFM stores rows bottom-to-top.
    size_t row_values = static_cast<size_t>(h.width) * h.channels;
    for (int y = 0; y < h.height; ++y) {
        float* dst = out.samples.data() + static_cast<size_t>(h.height - 1 - y) * row_values;
        std::memcpy(dst, src + static_cast<size_t>(y) * row_values * 4, row_values * 4);
    }
    if (swap)
        for (float& v : out.samples) v = io_detail::byteswap_float(v);
    return out;
}

namespace io_detail {

inline void write_pfm_impl(const std::filesystem::path& path, int width, int height,
                           int channels, const float* samples) {
    std::string header = std::string(channels == 3 ? "PF" : "Pf") + "\n" +
                         std::to_string(width) + " " + std::to_string(height) +
                         "\n-1.0\n";
    size_t row_values = static_cast<size_t>(width) * channels;
    std::vector<float> flipped(row_values * height);  // PFM rows run bottom-up
    for (int y = 0; y < height; ++y)
        std::memcpy(flipped.data() + static_cast<size_t>(y) * row_values,
                    samples + static_cast<size_t>(height - 1 - y) * row_values,
                    row_values * 4);
    if (!host_little_endian())
        for (float& v : flipped) v = byteswap_float(v);

    std::vector<std::uint8_t> bytes(header.begin(), header.end());
    size_t base = bytes.size();
    bytes.resize(base + flipped.size() * 4);
    std::memcpy(bytes.data() + base, flipped.data(), flipped.size() * 4);
    write_file(path, bytes);
}

}  // namespace io_detail

inline void write_pfm(const HdrImage& img, const std::filesystem::path& path) {
    std::vector<float> samples(static_cast<size_t>(img.pixel_count()) * 3);
    size_t i = 0;
    for (const Rgb& p : img) {
        samples[i++] = static_cast<float>(p.r);
        samples[i++] = static_cast<float>(p.g);
        samples[i++] = static_cast<float>(p.b);
    }
    io_detail::write_pfm_impl(path, img.width(), img.height(), 3, samples.data());
}

inline void write_pfm(const RawImage& img, const std::filesystem::path& path) {
    std::vector<float> samples(static_cast<size_t>(img.pixel_count()));
    size_t i = 0;
    for (double v : img) samples[i++] = static_cast<float>(v);
    io_detail::write_pfm_impl(path, img.width(), img.height(), 1, samples.data());
}

inline HdrImage read_pfm_color(const std::filesystem::path& path) {
    PfmData d = read_pfm(path);
    HdrImage img(d.width, d.height);
    if (d.channels == 3) {
        size_t i = 0;
        for (Rgb& p : img) {
            p.r = d.samples[i++];
            p.g = d.samples[i++];
            p.b = d.samples[i++];
        }
    } else {
        size_t i = 0;
        for (Rgb& p : img) {
            double v = d.samples[i++];
            p = {v, v, v};
        }
    }
    return img;
}

inline RawImage read_pfm_gray(const std::filesystem::path& path) {
    PfmData d = read_pfm(path);
    if (d.channels != 1)
        throw UnsupportedFormat(path.filename().string() +
                                ": expected single-channel PFM");
    RawImage img(d.width, d.height);
    size_t i = 0;
    for (double& v : img) v = d.samples[i++];
    return img;
}

// ---------------------------------------------------------------------------
// Radiance RGBE (.hdr), read only

namespace io_detail {

inline Rgb rgbe_to_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                       std::uint8_t e) {
    if (e == 0) return {0.0, 0.0, 0.0};
    double f = std::ldexp(1.0, static_cast<int>(e) - 136);  // (m/256)*2^(e-128)
    return {r * f, g * f, b * f};
}

}  // namespace io_detail

inline HdrImage read_rgbe(const std::filesystem::path& path) {
    auto bytes = io_detail::read_file(path);
    const std::string name = path.filename().string();
    size_t pos = 0;

    auto read_line = [&]() -> std::string {
        size_t start = pos;
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        if (pos >= bytes.size()) throw CorruptHeader(name + ": truncated header");
        std::string line(bytes.begin() + start, bytes.begin() + pos);
        ++pos;
        return line;
    };

    std::string magic = read_line();
    if (magic.rfind("#?", 0) != 0)
        throw UnsupportedFormat(name + ": missing #? radiance signature");

    bool format_ok = true;  // FORMAT line is optional in the wild
    for (;;) {
        std::string line = read_line();
        if (line.empty()) break;
        if (line.rfind("FORMAT=", 0) == 0)
            format_ok = line == "FORMAT=32-bit_rle_rgbe";
    }
    if (!format_ok) throw UnsupportedFormat(name + ": not 32-bit_rle_rgbe");

    int width = 0, height = 0;
    if (std::sscanf(read_line().c_str(), "-Y %d +X %d", &height, &width) != 2)
        throw UnsupportedFormat(name + ": unsupported raster orientation");
    if (width <= 0 || height <= 0) throw CorruptHeader(name + ": bad dimensions");

    auto need = [&](size_t n) {
        if (bytes.size() - pos < n) throw TruncatedData(name + ": raster truncated");
    };

    HdrImage img(width, height);
    std::vector<std::uint8_t> scan(static_cast<size_t>(width) * 4);
    for (int y = 0; y < height; ++y) {
        need(4);
        std::uint8_t p0 = bytes[pos], p1 = bytes[pos + 1], p2 = bytes[pos + 2],
                     p3 = bytes[pos + 3];
        if (p0 == 2 && p1 == 2 && ((p2 << 8) | p3) == width && width >= 8 &&
            width < 32768) {
            // New-style RLE: four per-channel streams.
            pos += 4;
            for (int ch = 0; ch < 4; ++ch) {
                int x = 0;
                while (x < width) {
                    need(1);
                    int count = bytes[pos++];
                    if (count > 128) {
                        count -= 128;
                        need(1);
                        std::uint8_t value = bytes[pos++];
                        if (x + count > width)
                            throw TruncatedData(name + ": RLE run overflow");
                        for (int i = 0; i < count; ++i) scan[(x + i) * 4 + ch] = value;
                    } else {
                        if (count == 0 || x + count > width)
                            throw TruncatedData(name + ": RLE literal overflow");
                        need(static_cast<size_t>(count));
                        for (int i = 0; i < count; ++i)
                            scan[(x + i) * 4 + ch] = bytes[pos++];
                    }
                    x += count;
                }
            }
        } else {
            // Flat data, with the old (1,1,1,shift) repeat convention.
            int x = 0;
            int shift = 0;
            while (x < width) {
                need(4);
                std::uint8_t r = bytes[pos], g = bytes[pos + 1], b = bytes[pos + 2],
                             e = bytes[pos + 3];
                pos += 4;
                if (r == 1 && g == 1 && b == 1) {
                    if (x == 0) throw CorruptHeader(name + ": repeat with no pixel");
                    int count = static_cast<int>(e) << shift;
                    if (x + count > width)
                        throw TruncatedData(name + ": repeat overflows scanline");
                    for (int i = 0; i < count; ++i) {
                        std::memcpy(&scan[(x + i) * 4], &scan[(x - 1) * 4], 4);
                    }
                    x += count;
                    shift += 8;
                } else {
                    scan[x * 4 + 0] = r;
                    scan[x * 4 + 1] = g;
                    scan[x * 4 + 2] = b;
                    scan[x * 4 + 3] = e;
                    ++x;
                    shift = 0;
                }
            }
        }
        for (int x = 0; x < width; ++x)
            img(x, y) = io_detail::rgbe_to_rgb(scan[x * 4], scan[x * 4 + 1],
                                               scan[x * 4 + 2], scan[x * 4 + 3]);
    }
    return img;
}

// Reads an HDR scene from Radiance RGBE or PFM, decided by the file magic.
inline HdrImage read_hdr(const std::filesystem::path& path) {
    auto probe = io_detail::read_file(path);
    if (probe.size() < 2) throw CorruptHeader(path.filename().string() + ": empty file");
    if (probe[0] == '#' && probe[1] == '?') return read_rgbe(path);
    if (probe[0] == 'P' && (probe[1] == 'F' || probe[1] == 'f'))
        return read_pfm_color(path);
    throw UnsupportedFormat(path.filename().string() + ": unknown HDR format");
}

// ---------------------------------------------------------------------------
// PNG, write only

namespace io_detail {

inline void png_append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void png_append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                             const std::vector<std::uint8_t>& data) {
    png_append_u32(out, static_cast<std::uint32_t>(data.size()));
    size_t crc_start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    std::uint32_t crc = static_cast<std::uint32_t>(
        ::crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start)));
    png_append_u32(out, crc);
}

inline void write_png_impl(const std::filesystem::path& path, int width, int height,
                           int channels, const std::vector<std::uint8_t>& pixels) {
    // Scanlines with filter byte 0, deflated at a fixed level.
    size_t stride = static_cast<size_t>(width) * channels;
    std::vector<std::uint8_t> raster((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = raster.data() + static_cast<size_t>(y) * (stride + 1);
        row[0] = 0;
        std::memcpy(row + 1, pixels.data() + static_cast<size_t>(y) * stride, stride);
    }

    uLongf bound = ::compressBound(static_cast<uLong>(raster.size()));
    std::vector<std::uint8_t> deflated(bound);
    if (::compress2(deflated.data(), &bound, raster.data(),
                    static_cast<uLong>(raster.size()), 6) != Z_OK)
        throw IoFailure("png deflate failed");
    deflated.resize(bound);

    std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    std::vector<std::uint8_t> ihdr;
    png_append_u32(ihdr, static_cast<std::uint32_t>(width));
    png_append_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);                                  // bit depth
    ihdr.push_back(channels == 3 ? 2 : 0);              // color type
    ihdr.push_back(0);                                  // compression
    ihdr.push_back(0);                                  // filter
    ihdr.push_back(0);                                  // interlace
    png_append_chunk(out, "IHDR", ihdr);
    png_append_chunk(out, "IDAT", deflated);
    png_append_chunk(out, "IEND", {});
    write_file(path, out);
}

}  // namespace io_detail

// Round-half-away-from-zero quantization of [0,1] to a byte.
inline std::uint8_t quantize_u8(double v) {
    return static_cast<std::uint8_t>(std::round(clamp01(v) * 255.0));
}

inline void write_png(const RgbImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(static_cast<size_t>(img.pixel_count()) * 3);
    size_t i = 0;
    for (const Rgb& p : img) {
        pixels[i++] = quantize_u8(p.r);
        pixels[i++] = quantize_u8(p.g);
        pixels[i++] = quantize_u8(p.b);
    }
    io_detail::write_png_impl(path, img.width(), img.height(), 3, pixels);
}

inline void write_png_gray(const Plane<std::uint8_t>& img,
                           const std::filesystem::path& path) {
    std::vector<std::uint8_t> pixels(img.begin(), img.end());
    io_detail::write_png_impl(path, img.width(), img.height(), 1, pixels);
}

}  // namespace svehdr
