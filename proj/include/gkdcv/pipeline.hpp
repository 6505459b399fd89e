#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gkdcv/blocks.hpp"
#include "gkdcv/config.hpp"
#include "gkdcv/dataset.hpp"
#include "gkdcv/image.hpp"

namespace gkdcv {

/// Worker cap for parallel sections: GKDCV_THREADS when set, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_cap();

/// Runs fn(0..n-1) on up to worker_cap() threads; exceptions from workers are
/// rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// resize -> gabor responses -> fuse -> block extraction for one image.
FeatureVector image_to_feature(const GrayImage& img, const PipelineConfig& cfg);

/// Feature matrix (d x N, column per entry) for manifest entries, computed in
/// a parallel map over images. Errors carry the offending file path.
Eigen::MatrixXd features_for_entries(const DatasetManifest& manifest,
                                     const std::vector<ManifestEntry>& entries,
                                     const PipelineConfig& cfg);

}  // namespace gkdcv
