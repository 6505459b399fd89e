#pragma once

#include <string>

#include "gkdcv/blocks.hpp"
#include "gkdcv/classify.hpp"
#include "gkdcv/gabor.hpp"
#include "gkdcv/kernels.hpp"

namespace gkdcv {

/// Full pipeline configuration. The defaults are the reference setup:
/// 5-scale x 8-orientation bank, 7x7 windows with 3x3 blocks, normalized
/// cosine kernel, cosine similarity, 92x112 images.
struct PipelineConfig {
    GaborParams gabor;
    int support = 33;
    BlockConfig block;
    KernelSpec kernel;
    Measure measure = Measure::Cos;
    double rank_tol = 1e-10;
    int image_height = 92;
    int image_width = 112;

    void validate() const;
};

/// Parses the flat `key=value` format ('#' comments, dotted keys).
PipelineConfig parse_config(const std::string& text);

PipelineConfig load_config(const std::string& path);

/// Canonical serialization; parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_config(const PipelineConfig& cfg);

}  // namespace gkdcv
