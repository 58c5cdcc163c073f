#ifndef FISRG_MASK_IO_HPP
#define FISRG_MASK_IO_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "fisrg/errors.hpp"
#include "fisrg/image.hpp"

namespace fisrg {

/// Decoded 8-bit grayscale raster shared by the mask and image loaders.
struct Gray8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

namespace detail {

// PGM "plain whitespace" scanner: skips blanks and # comments.
inline int pgm_next_int(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw DecodeError("PGM: expected integer in header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 30) throw DecodeError("PGM: header value out of range");
        c = in.get();
    }
    return static_cast<int>(v);
}

inline Gray8 decode_pgm(std::istream& in, const std::string& name) {
    char p = 0, five = 0;
    in.get(p);
    in.get(five);
    if (p != 'P' || five != '5') throw UnsupportedFormat(name + ": only binary PGM (P5) is supported");
    Gray8 g;
    g.width = pgm_next_int(in);
    g.height = pgm_next_int(in);
    const int maxval = pgm_next_int(in);
    if (g.width <= 0 || g.height <= 0) throw DecodeError(name + ": non-positive PGM dimensions");
    if (maxval <= 0 || maxval > 255)
        throw UnsupportedFormat(name + ": only 8-bit PGM is supported (maxval " +
                                std::to_string(maxval) + ")");
    // Single whitespace byte separates the header from the payload.
    g.pixels.resize(static_cast<std::size_t>(g.width) * g.height);
    in.read(reinterpret_cast<char*>(g.pixels.data()), static_cast<std::streamsize>(g.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != g.pixels.size())
        throw DecodeError(name + ": truncated PGM payload");
    return g;
}

inline Gray8 decode_png(const std::filesystem::path& path) {
    std::FILE* fp = std::fopen(path.string().c_str(), "rb");
    if (!fp) throw FileError("cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw DecodeError(path.string() + ": libpng init failed");
    }

    Gray8 g;
    std::string error; // filled inside the setjmp scope, thrown after cleanup
    bool unsupported = false;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw DecodeError(path.string() + ": corrupt PNG");
    }

    png_init_io(png, fp);
    png_read_info(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
        unsupported = true;
        error = path.string() + ": only 8-bit grayscale PNG is supported";
    } else {
        g.width = static_cast<int>(png_get_image_width(png, info));
        g.height = static_cast<int>(png_get_image_height(png, info));
        png_set_interlace_handling(png);
        png_read_update_info(png, info);
        g.pixels.resize(static_cast<std::size_t>(g.width) * g.height);
        std::vector<png_bytep> rows(g.height);
        for (int y = 0; y < g.height; ++y)
            rows[y] = g.pixels.data() + static_cast<std::size_t>(y) * g.width;
        png_read_image(png, rows.data());
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    if (unsupported) throw UnsupportedFormat(error);
    return g;
}

inline bool has_png_signature(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

} // namespace detail

/// Decode a PGM (P5) or 8-bit grayscale PNG file. The format is detected
/// from the file signature, not the extension.
inline Gray8 load_gray8(const std::filesystem::path& path) {
    if (detail::has_png_signature(path)) return detail::decode_png(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path.string());
    char magic[2] = {};
    in.read(magic, 2);
    in.seekg(0);
    if (magic[0] == 'P' && magic[1] == '5') return detail::decode_pgm(in, path.string());
    throw UnsupportedFormat(path.string() + ": not a PGM (P5) or PNG file");
}

/// Load a binary mask; any pixel > 0 maps to true.
inline BinaryMask load_mask(const std::filesystem::path& path) {
    const Gray8 g = load_gray8(path);
    BinaryMask m(g.width, g.height);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) m.bits[i] = g.pixels[i] > 0 ? 1 : 0;
    return m;
}

/// Save a mask as binary PGM with values {0, 255}. save→load round-trips.
inline void save_mask(const BinaryMask& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << "P5\n" << m.width << " " << m.height << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<std::size_t>(m.width));
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) row[x] = m.at(x, y) ? 255 : 0;
        out.write(reinterpret_cast<const char*>(row.data()), m.width);
    }
    if (!out) throw FileError("write failed: " + path.string());
}

/// Load a grayscale image, mapping 8-bit values to intensities in [0,1].
inline GrayImage load_gray(const std::filesystem::path& path) {
    const Gray8 g = load_gray8(path);
    GrayImage img(g.width, g.height);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) img.data[i] = g.pixels[i] / 255.0;
    return img;
}

/// Save a grayscale image as binary PGM (intensities quantized to 8 bits).
inline void save_gray(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double v = img.at(x, y);
            if (v < 0.0) v = 0.0;
            if (v > 1.0) v = 1.0;
            row[x] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), img.width);
    }
    if (!out) throw FileError("write failed: " + path.string());
}

} // namespace fisrg

#endif // FISRG_MASK_IO_HPP
