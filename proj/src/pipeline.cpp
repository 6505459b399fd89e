#include "gkdcv/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "gkdcv/error.hpp"

namespace gkdcv {

std::size_t worker_cap() {
    if (const char* env = std::getenv("GKDCV_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v < 1) throw std::invalid_argument(env);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw Error("config", std::string("invalid GKDCV_THREADS value '") + env + "'");
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers = std::min(n, worker_cap());
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(run);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

FeatureVector image_to_feature(const GrayImage& img, const PipelineConfig& cfg) {
    const GrayImage sized = resize(img, cfg.image_height, cfg.image_width);
    const ResponseStack stack = respond(sized, cfg.gabor, cfg.support);
    return extract(fuse(stack), cfg.block);
}

Eigen::MatrixXd features_for_entries(const DatasetManifest& manifest,
                                     const std::vector<ManifestEntry>& entries,
                                     const PipelineConfig& cfg) {
    cfg.validate();
    const int windows =
        (cfg.image_height / cfg.block.omega) * (cfg.image_width / cfg.block.omega);
    const Eigen::Index dim =
        static_cast<Eigen::Index>(windows) * cfg.block.block_side * cfg.block.block_side;

    Eigen::MatrixXd features(dim, static_cast<Eigen::Index>(entries.size()));
    parallel_for(entries.size(), [&](std::size_t i) {
        const std::string path = manifest.resolve_path(entries[i]);
        try {
            const FeatureVector feat = image_to_feature(load_image(path), cfg);
            features.col(static_cast<Eigen::Index>(i)) =
                Eigen::Map<const Eigen::VectorXd>(feat.values.data(), dim);
        } catch (const Error& e) {
            if (std::string(e.what()).find(path) != std::string::npos) throw;
            throw Error(e.category(), path + ": " + e.what());
        }
    });
    return features;
}

}  // namespace gkdcv
