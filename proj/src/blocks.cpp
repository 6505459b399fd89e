#include "gkdcv/blocks.hpp"

#include <string>

#include "gkdcv/error.hpp"

namespace gkdcv {

void BlockConfig::validate() const {
    if (omega < 1) throw Error("config", "window side must be at least 1");
    if (block_side < 1 || block_side % 2 == 0) {
        throw Error("config", "block side must be a positive odd integer, got " + std::to_string(block_side));
    }
    if (2 * block_side >= omega) {
        throw Error("config", "block side " + std::to_string(block_side) +
                                  " must be less than half the window side " + std::to_string(omega));
    }
}

FusedImage fuse(const ResponseStack& stack) {
    if (stack.planes.empty()) throw Error("dimension", "cannot fuse an empty response stack");

    FusedImage fused;
    fused.height = stack.height;
    fused.width = stack.width;
    fused.grid.assign(static_cast<std::size_t>(stack.height) * stack.width, 0.0);
    for (const auto& plane : stack.planes) {
        for (std::size_t i = 0; i < fused.grid.size(); ++i) fused.grid[i] += plane[i];
    }
    double sum = 0.0;
    for (double v : fused.grid) sum += v;
    fused.global_mean = sum / static_cast<double>(fused.grid.size());
    return fused;
}

FeatureVector extract(const FusedImage& fused, const BlockConfig& cfg) {
    cfg.validate();
    const int m = fused.height;
    const int n = fused.width;
    const int rows_w = m / cfg.omega;
    const int cols_w = n / cfg.omega;
    if (rows_w < 1 || cols_w < 1) {
        throw Error("dimension", "image " + std::to_string(m) + "x" + std::to_string(n) +
                                     " is smaller than one " + std::to_string(cfg.omega) + "x" +
                                     std::to_string(cfg.omega) + " window");
    }

    const int c = cfg.block_side;
    const int half = c / 2;
    const double g = fused.global_mean;

    FeatureVector feat;
    feat.num_windows = rows_w * cols_w;
    feat.block_side = c;
    feat.values.reserve(static_cast<std::size_t>(feat.num_windows) * c * c);

    for (int wr = 0; wr < rows_w; ++wr) {
        for (int wc = 0; wc < cols_w; ++wc) {
            // Window minimum; ties resolve to the first position in row-major order.
            int min_r = wr * cfg.omega;
            int min_c = wc * cfg.omega;
            double min_v = fused.at(min_r, min_c);
            for (int r = wr * cfg.omega; r < (wr + 1) * cfg.omega; ++r) {
                for (int col = wc * cfg.omega; col < (wc + 1) * cfg.omega; ++col) {
                    const double v = fused.at(r, col);
                    if (v < min_v) {
                        min_v = v;
                        min_r = r;
                        min_c = col;
                    }
                }
            }

            if (min_v > g) {
                // Pseudo block: window carries no low-energized pixel.
                for (int i = 0; i < c * c; ++i) feat.values.push_back(g);
                continue;
            }
            // Block centered at the minimum, read from the fused image (it may
            // leave the window); pixels outside the image are filled with the mean.
            for (int r = min_r - half; r <= min_r + half; ++r) {
                for (int col = min_c - half; col <= min_c + half; ++col) {
                    const bool inside = r >= 0 && r < m && col >= 0 && col < n;
                    feat.values.push_back(inside ? fused.at(r, col) : g);
                }
            }
        }
    }
    return feat;
}

}  // namespace gkdcv
