#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <png.h>

#include "gkdcv/image.hpp"

namespace testutil {

/// Self-deleting temporary directory.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0;; ++attempt) {
            auto candidate = base / ("gkdcv_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(attempt));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path = candidate;
                return;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_png_gray8(const std::string& path, int width, int height,
                            const std::vector<std::uint8_t>& pixels) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr)) {
        throw std::runtime_error("failed to write test PNG " + path);
    }
}

inline void write_png_rgb8(const std::string& path, int width, int height,
                           const std::vector<std::uint8_t>& rgb) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr)) {
        throw std::runtime_error("failed to write test PNG " + path);
    }
}

inline void write_png_gray16(const std::string& path, int width, int height,
                             const std::vector<std::uint16_t>& pixels) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_LINEAR_Y;
    if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr)) {
        throw std::runtime_error("failed to write test PNG " + path);
    }
}

inline gkdcv::GrayImage random_image(int height, int width, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    gkdcv::GrayImage img;
    img.height = height;
    img.width = width;
    img.pixels.resize(static_cast<std::size_t>(height) * width);
    for (double& p : img.pixels) p = dist(rng);
    return img;
}

/// Deterministic synthetic "face": elliptical head, two eyes and a mouth
/// whose geometry depends on the class, with mild per-image variation.
inline gkdcv::GrayImage blob_face(int cls, int idx, int height = 92, int width = 112) {
    gkdcv::GrayImage img = gkdcv::GrayImage::filled(height, width, 0.0);
    const double cy = height / 2.0 + (cls % 3 - 1) * 2 + idx % 2;
    const double cx = width / 2.0 + (cls % 5 - 2) * 2;
    const double head_a = 30.0 + cls;
    const double head_b = 24.0 + (cls * 3) % 7;
    const double eye_y = cy - 8 - cls % 4;
    const double eye_dx = 8.0 + (cls % 3) * 2;
    const double mouth_y = cy + 12 + cls % 5;
    const double mouth_w = 6.0 + (cls % 4) * 2;

    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double dy = r - cy;
            const double dx = c - cx;
            double v = 0.6 * std::exp(-2.0 * (dy * dy / (head_a * head_a) + dx * dx / (head_b * head_b)));
            for (double ex : {cx - eye_dx, cx + eye_dx}) {
                const double ey = r - eye_y;
                const double exd = c - ex;
                const double eye_b = 3.0 + cls % 2;
                v += 0.35 * std::exp(-2.0 * (ey * ey / 6.25 + exd * exd / (eye_b * eye_b)));
            }
            const double my = r - mouth_y;
            v += 0.3 * std::exp(-1.5 * (my * my / 4.0 + dx * dx / (mouth_w * mouth_w)));
            v *= 0.9 + 0.05 * idx;
            v += 0.02 * std::sin(c / (3.0 + idx)) * std::cos(r / (4.0 + cls % 3));
            img.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return img;
}

/// Gaussian cluster data: one column per sample, labels contiguous.
struct ClusterData {
    Eigen::MatrixXd features;  // d x M
    std::vector<int> labels;
};

inline ClusterData make_clusters(int num_classes, int per_class, int dim, double center_scale,
                                 double noise, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd centers(dim, num_classes);
    for (int c = 0; c < num_classes; ++c) {
        for (int i = 0; i < dim; ++i) centers(i, c) = center_scale * normal(rng);
    }
    ClusterData data;
    data.features.resize(dim, num_classes * per_class);
    for (int c = 0; c < num_classes; ++c) {
        for (int s = 0; s < per_class; ++s) {
            const int col = c * per_class + s;
            for (int i = 0; i < dim; ++i) {
                data.features(i, col) = centers(i, c) + noise * normal(rng);
            }
            data.labels.push_back(c);
        }
    }
    return data;
}

}  // namespace testutil
