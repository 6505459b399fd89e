#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "gkdcv/classify.hpp"

namespace gkdcv {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
};

/// Rates are percentages. cmc is filled by closed-set runs (rank k rate at
/// index k-1), threshold by verification runs.
struct EvalReport {
    ConfusionCounts counts;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double accuracy = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    std::vector<double> cmc;
    double threshold = std::numeric_limits<double>::quiet_NaN();
};

/// Sensitivity = tp/(tp+fn), specificity = tn/(fp+tn), accuracy, and the
/// complementary false positive/negative rates, all as percentages.
EvalReport metrics(const ConfusionCounts& counts);

struct LabeledVector {
    Eigen::VectorXd y;
    int label = 0;  // true class (closed-set) or claimed class (verification)
};

/// Closed-set identification over discriminant vectors. Confusion counts use
/// one-vs-rest accounting: each correct rank-1 prediction is a true positive,
/// each error is one false negative (true class) plus one false positive
/// (predicted class); the remaining per-probe class decisions are negatives.
EvalReport closed_set_eval(const Eigen::MatrixXd& class_vectors,
                           const std::vector<LabeledVector>& probes, Measure measure);

/// Verification: a probe is accepted iff its score against the claimed
/// class vector is <= tau.
EvalReport verification_eval(const Eigen::MatrixXd& class_vectors,
                             const std::vector<LabeledVector>& genuine,
                             const std::vector<LabeledVector>& impostor, Measure measure,
                             double tau);

/// Equal-error-rate point of a genuine/impostor score split (acceptance is
/// score <= threshold). Returns the rate as a percentage and writes the
/// crossing threshold.
double equal_error_rate(std::vector<double> genuine_scores, std::vector<double> impostor_scores,
                        double* threshold_out = nullptr);

}  // namespace gkdcv
