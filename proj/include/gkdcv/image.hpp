#pragma once

#include <string>
#include <vector>

namespace gkdcv {

/// Grayscale raster, row-major, pixel values in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
    double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }

    static GrayImage filled(int height, int width, double value);
};

/// Loads a PGM (P2/P5, maxval 255) or PNG (8-bit gray or RGB) file.
/// RGB is converted with BT.601 luma weights 0.299/0.587/0.114.
GrayImage load_image(const std::string& path);

/// Bilinear resize to height x width (half-pixel centers, edge clamp).
/// Identical dimensions return a bit-identical copy.
GrayImage resize(const GrayImage& img, int height, int width);

/// Writes an 8-bit PGM; binary chooses P5 over P2. Values are clamped to
/// [0,1] and quantized with round(v * 255).
void save_pgm(const GrayImage& img, const std::string& path, bool binary = true);

}  // namespace gkdcv
