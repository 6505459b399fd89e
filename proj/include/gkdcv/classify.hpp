#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gkdcv {

class KdcvModel;

enum class Measure { L1, L2, Cos };

const char* measure_name(Measure measure);
Measure parse_measure(const std::string& text);

/// L1: sum |y_i - m_i|. L2: squared Euclidean distance (no square root).
/// Cos: -<y,m> / (||y|| ||m||), negated so lower is always better.
double score(Measure measure, const Eigen::VectorXd& y, const Eigen::VectorXd& m);

struct RankedClass {
    int class_id = 0;
    double score = 0.0;
};

/// Every class exactly once, ascending score, ties broken by smaller id;
/// front() is the prediction.
using Ranking = std::vector<RankedClass>;

/// Ranks the rows of a C x p class-template matrix against a discriminant
/// vector.
Ranking classify(const Eigen::MatrixXd& class_vectors, const Eigen::VectorXd& y, Measure measure);

Ranking classify(const KdcvModel& model, const Eigen::VectorXd& y, Measure measure);

}  // namespace gkdcv
