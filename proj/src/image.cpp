#include "gkdcv/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <png.h>

#include "gkdcv/error.hpp"

namespace gkdcv {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
    throw Error("io", path + ": " + what);
}

[[noreturn]] void format_fail(const std::string& path, const std::string& what) {
    throw Error("format", path + ": " + what);
}

// Reads the next PGM header token, skipping whitespace and '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (!std::isspace(ch)) {
            tok.push_back(static_cast<char>(ch));
            while ((ch = in.get()) != EOF && !std::isspace(ch) && ch != '#') {
                tok.push_back(static_cast<char>(ch));
            }
            if (ch == '#') in.unget();
            break;
        }
    }
    return tok;
}

int parse_header_int(std::istream& in, const std::string& path, const char* field) {
    const std::string tok = next_pgm_token(in);
    if (tok.empty()) format_fail(path, std::string("truncated header, missing ") + field);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        format_fail(path, std::string("invalid ") + field + " '" + tok + "'");
    }
}

GrayImage load_pgm(const std::string& path, std::ifstream& in, bool binary) {
    const int width = parse_header_int(in, path, "width");
    const int height = parse_header_int(in, path, "height");
    const int maxval = parse_header_int(in, path, "maxval");
    if (width < 1 || height < 1) format_fail(path, "non-positive dimensions");
    if (maxval != 255) format_fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) + ", expected 255)");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(width) * height);

    if (binary) {
        // Header ends with exactly one whitespace byte before the raster.
        std::vector<unsigned char> raw(img.pixels.size());
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size()) format_fail(path, "truncated pixel data");
        for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i] / 255.0;
    } else {
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            const std::string tok = next_pgm_token(in);
            if (tok.empty()) format_fail(path, "truncated pixel data");
            int v = 0;
            try {
                v = std::stoi(tok);
            } catch (const std::exception&) {
                format_fail(path, "invalid pixel value '" + tok + "'");
            }
            if (v < 0 || v > maxval) format_fail(path, "pixel value " + std::to_string(v) + " out of range");
            img.pixels[i] = v / 255.0;
        }
    }
    return img;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::string& path) {
    PngReadCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) io_fail(path, "cannot open file");

    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) io_fail(path, "png reader allocation failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) io_fail(path, "png info allocation failed");

    if (setjmp(png_jmpbuf(ctx.png))) format_fail(path, "corrupt PNG stream");

    png_init_io(ctx.png, ctx.fp);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    int color_type = png_get_color_type(ctx.png, ctx.info);

    if (bit_depth == 16) format_fail(path, "unsupported bit depth (16-bit PNG)");

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    color_type = png_get_color_type(ctx.png, ctx.info);
    const int channels = png_get_channels(ctx.png, ctx.info);
    if (channels != 1 && channels != 3) {
        format_fail(path, "unsupported PNG layout (" + std::to_string(channels) + " channels after expansion)");
    }

    const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
    std::vector<unsigned char> raster(row_bytes * height);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 r = 0; r < height; ++r) rows[r] = raster.data() + r * row_bytes;
    png_read_image(ctx.png, rows.data());

    GrayImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.pixels.resize(static_cast<std::size_t>(width) * height);
    for (png_uint_32 r = 0; r < height; ++r) {
        const unsigned char* row = rows[r];
        for (png_uint_32 c = 0; c < width; ++c) {
            double v;
            if (channels == 1) {
                v = row[c] / 255.0;
            } else {
                v = kLumaR * (row[3 * c] / 255.0) + kLumaG * (row[3 * c + 1] / 255.0) +
                    kLumaB * (row[3 * c + 2] / 255.0);
            }
            img.pixels[static_cast<std::size_t>(r) * width + c] = clamp01(v);
        }
    }
    return img;
}

}  // namespace

GrayImage GrayImage::filled(int height, int width, double value) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open file");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) format_fail(path, "file too short");

    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        return load_pgm(path, in, magic[1] == '5');
    }
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    format_fail(path, "unrecognized image format (expected PGM P2/P5 or PNG)");
}

GrayImage resize(const GrayImage& img, int height, int width) {
    if (height < 1 || width < 1) throw Error("dimension", "resize target must be at least 1x1");
    if (height == img.height && width == img.width) return img;

    GrayImage out;
    out.width = width;
    out.height = height;
    out.pixels.resize(static_cast<std::size_t>(width) * height);

    const double sy = static_cast<double>(img.height) / height;
    const double sx = static_cast<double>(img.width) / width;
    for (int r = 0; r < height; ++r) {
        double fy = (r + 0.5) * sy - 0.5;
        fy = std::min(std::max(fy, 0.0), static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int c = 0; c < width; ++c) {
            double fx = (c + 0.5) * sx - 0.5;
            fx = std::min(std::max(fx, 0.0), static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            const double top = img.at(y0, x0) * (1.0 - wx) + img.at(y0, x1) * wx;
            const double bot = img.at(y1, x0) * (1.0 - wx) + img.at(y1, x1) * wx;
            out.at(r, c) = top * (1.0 - wy) + bot * wy;
        }
    }
    return out;
}

void save_pgm(const GrayImage& img, const std::string& path, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open file for writing");
    out << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n255\n";
    if (binary) {
        std::vector<unsigned char> raw(img.pixels.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            raw[i] = static_cast<unsigned char>(std::lround(clamp01(img.pixels[i]) * 255.0));
        }
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    } else {
        for (int r = 0; r < img.height; ++r) {
            for (int c = 0; c < img.width; ++c) {
                if (c) out << ' ';
                out << std::lround(clamp01(img.at(r, c)) * 255.0);
            }
            out << '\n';
        }
    }
    if (!out) io_fail(path, "write failed");
}

}  // namespace gkdcv
