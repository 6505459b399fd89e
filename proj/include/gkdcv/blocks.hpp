#pragma once

#include <vector>

#include "gkdcv/gabor.hpp"

namespace gkdcv {

/// Window side omega and block side c; c must be odd and < omega/2.
struct BlockConfig {
    int omega = 7;
    int block_side = 3;

    void validate() const;
};

/// Pixelwise sum of all magnitude planes plus its global mean.
struct FusedImage {
    int height = 0;
    int width = 0;
    std::vector<double> grid;  // row-major
    double global_mean = 0.0;

    double at(int row, int col) const { return grid[static_cast<std::size_t>(row) * width + col]; }
    double& at(int row, int col) { return grid[static_cast<std::size_t>(row) * width + col]; }
};

struct FeatureVector {
    std::vector<double> values;
    int num_windows = 0;
    int block_side = 0;
};

FusedImage fuse(const ResponseStack& stack);

/// Low-energized block extraction: tiles the image into omega x omega
/// windows; per window, the c x c block centered at the window minimum is
/// taken from the fused image when the minimum does not exceed the global
/// mean (off-image pixels filled with the mean), otherwise an all-mean
/// pseudo block stands in.
FeatureVector extract(const FusedImage& fused, const BlockConfig& cfg);

}  // namespace gkdcv
