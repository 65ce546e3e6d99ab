// SPDX-License-Identifier: Apache-2.0
#include "vesselmip/png_io.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include <png.h>

#include "vesselmip/errors.hpp"

namespace vesselmip {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_gray(const std::string& path, int width, int height, int bit_depth,
                const std::vector<png_bytep>& rows) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) {
        throw IoError("cannot open " + path + " for writing");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        throw IoError("png_create_write_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failure writing " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), bit_depth,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) {
        png_set_swap(png);  // rows hold native little-endian samples
    }
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

struct PngImage {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    std::vector<std::uint8_t> bytes;  // row-major, native-endian samples
};

PngImage read_gray(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) {
        throw IoError("cannot open " + path);
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        throw IoError("png_create_read_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng failure reading " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int color_type = png_get_color_type(png, info);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + " is not grayscale");
    }
    PngImage img;
    img.width = int(png_get_image_width(png, info));
    img.height = int(png_get_image_height(png, info));
    img.bit_depth = png_get_bit_depth(png, info);
    if (img.bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        img.bit_depth = 8;
    }
    if (img.bit_depth == 16) {
        png_set_swap(png);
    }
    png_read_update_info(png, info);

    const std::size_t stride = png_get_rowbytes(png, info);
    img.bytes.resize(stride * std::size_t(img.height));
    std::vector<png_bytep> rows(std::size_t(img.height));
    for (int r = 0; r < img.height; ++r) {
        rows[std::size_t(r)] = img.bytes.data() + stride * std::size_t(r);
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

}  // namespace

void write_png16(const std::string& path, const Grid2D<float>& img) {
    Grid2D<std::uint16_t> q(img.nu(), img.nv());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const float v = img[i];
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw IoError("write_png16: value " + std::to_string(v) + " outside [0,1]");
        }
        q[i] = std::uint16_t(std::lround(double(v) * 65535.0));
    }
    write_png16_raw(path, q);
}

void write_png16_raw(const std::string& path, const Grid2D<std::uint16_t>& img) {
    std::vector<png_bytep> rows(std::size_t(img.nv()));
    for (int v = 0; v < img.nv(); ++v) {
        rows[std::size_t(v)] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(img.data() + img.index(0, v)));
    }
    write_gray(path, img.nu(), img.nv(), 16, rows);
}

void write_png8(const std::string& path, const Grid2D<std::uint8_t>& img) {
    Grid2D<std::uint8_t> bytes(img.nu(), img.nv());
    for (std::size_t i = 0; i < img.size(); ++i) {
        bytes[i] = img[i] ? 255 : 0;
    }
    std::vector<png_bytep> rows(std::size_t(img.nv()));
    for (int v = 0; v < img.nv(); ++v) {
        rows[std::size_t(v)] = bytes.data() + bytes.index(0, v);
    }
    write_gray(path, img.nu(), img.nv(), 8, rows);
}

Grid2D<std::uint8_t> read_png8(const std::string& path) {
    const PngImage img = read_gray(path);
    if (img.bit_depth != 8) {
        throw IoError(path + ": expected 8-bit grayscale, got depth " +
                      std::to_string(img.bit_depth));
    }
    Grid2D<std::uint8_t> out(img.width, img.height);
    for (int v = 0; v < img.height; ++v) {
        for (int u = 0; u < img.width; ++u) {
            out(u, v) = img.bytes[std::size_t(v) * std::size_t(img.width) + std::size_t(u)];
        }
    }
    return out;
}

Grid2D<std::uint16_t> read_png16(const std::string& path) {
    const PngImage img = read_gray(path);
    if (img.bit_depth != 16) {
        throw IoError(path + ": expected 16-bit grayscale, got depth " +
                      std::to_string(img.bit_depth));
    }
    Grid2D<std::uint16_t> out(img.width, img.height);
    const auto* samples = reinterpret_cast<const std::uint16_t*>(img.bytes.data());
    for (int v = 0; v < img.height; ++v) {
        for (int u = 0; u < img.width; ++u) {
            out(u, v) = samples[std::size_t(v) * std::size_t(img.width) + std::size_t(u)];
        }
    }
    return out;
}

}  // namespace vesselmip
