#include "desmoke/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace desmoke {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png != nullptr, ErrorKind::io, "png reader allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(ErrorKind::io, "png info allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(ErrorKind::format, "malformed PNG: " + path);
    }
    png_init_io(png, f);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth == 16) png_set_swap(png);  // stream is big-endian

    png_read_update_info(png, info);
    bit_depth = png_get_bit_depth(png, info);
    int nch = png_get_channels(png, info);
    require(nch == 1 || nch == 3, ErrorKind::format, "unsupported PNG channel count");

    std::size_t stride = png_get_rowbytes(png, info);
    std::vector<png_byte> raw(stride * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(static_cast<int>(w), static_cast<int>(h), nch);
    const double maxv = bit_depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* row = raw.data() + y * stride;
        for (png_uint_32 x = 0; x < w; ++x) {
            for (int c = 0; c < nch; ++c) {
                double v;
                if (bit_depth == 16) {
                    const std::uint16_t* row16 = reinterpret_cast<const std::uint16_t*>(row);
                    v = row16[x * nch + c];
                } else {
                    v = row[x * nch + c];
                }
                img.at(c, static_cast<int>(y), static_cast<int>(x)) = v / maxv;
            }
        }
    }
    return img;
}

// Reads the next whitespace-delimited token, skipping '#' comments.
bool ppm_token(std::FILE* f, std::string& out) {
    out.clear();
    int ch = std::fgetc(f);
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = std::fgetc(f);
        } else if (!std::isspace(ch)) {
            break;
        }
        if (ch != EOF) ch = std::fgetc(f);
    }
    while (ch != EOF && !std::isspace(ch)) {
        out.push_back(static_cast<char>(ch));
        ch = std::fgetc(f);
    }
    return !out.empty();
}

Image load_ppm(std::FILE* f, const std::string& path) {
    std::string tok;
    require(ppm_token(f, tok) && tok == "P6", ErrorKind::format, "not a binary PPM: " + path);
    long w = 0, h = 0, maxval = 0;
    require(ppm_token(f, tok), ErrorKind::format, "truncated PPM header");
    w = std::strtol(tok.c_str(), nullptr, 10);
    require(ppm_token(f, tok), ErrorKind::format, "truncated PPM header");
    h = std::strtol(tok.c_str(), nullptr, 10);
    require(ppm_token(f, tok), ErrorKind::format, "truncated PPM header");
    maxval = std::strtol(tok.c_str(), nullptr, 10);
    require(w > 0 && h > 0 && (maxval == 255 || maxval == 65535), ErrorKind::format,
            "unsupported PPM header in " + path);

    const int bytes = maxval == 255 ? 1 : 2;
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * 3 * bytes);
    require(std::fread(raw.data(), 1, raw.size(), f) == raw.size(), ErrorKind::format,
            "truncated PPM pixel data in " + path);

    Image img(static_cast<int>(w), static_cast<int>(h), 3);
    const double maxv = static_cast<double>(maxval);
    std::size_t i = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v;
                if (bytes == 1) {
                    v = raw[i++];
                } else {
                    v = raw[i] * 256.0 + raw[i + 1];  // big-endian
                    i += 2;
                }
                img.at(c, y, x) = v / maxv;
            }
        }
    }
    return img;
}

void save_png(const Image& img, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    require(f != nullptr, ErrorKind::io, "cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    require(png != nullptr, ErrorKind::io, "png writer allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(ErrorKind::io, "png info allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorKind::io, "png write failed: " + path);
    }
    png_init_io(png, f.get());
    const int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, 8, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                row[x * img.channels + c] =
                    static_cast<png_byte>(std::lround(img.at(c, y, x) * 255.0));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_ppm(const Image& img, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    require(f != nullptr, ErrorKind::io, "cannot write " + path);
    std::fprintf(f.get(), "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                // gray images replicate their single plane
                double v = img.at(img.channels == 3 ? c : 0, y, x);
                row[x * 3 + c] = static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
        require(std::fwrite(row.data(), 1, row.size(), f.get()) == row.size(), ErrorKind::io,
                "short write to " + path);
    }
}

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

}  // namespace

Image load_image(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    require(f != nullptr, ErrorKind::io, "cannot open " + path);

    unsigned char magic[8] = {0};
    std::size_t got = std::fread(magic, 1, sizeof magic, f.get());
    std::rewind(f.get());
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) return load_png(f.get(), path);
    if (got >= 2 && magic[0] == 'P' && magic[1] == '6') return load_ppm(f.get(), path);
    fail(ErrorKind::format, "unsupported image format: " + path);
}

void save_image(const Image& img, const std::string& path) {
    require(img.size() == img.data.size() && img.width > 0, ErrorKind::argument,
            "invalid image");
    if (has_suffix(path, ".png")) {
        save_png(img, path);
    } else if (has_suffix(path, ".ppm")) {
        save_ppm(img, path);
    } else {
        fail(ErrorKind::format, "unsupported output extension: " + path);
    }
}

}  // namespace desmoke
