#include "gkdcv/classify.hpp"

#include <algorithm>

#include "gkdcv/error.hpp"
#include "gkdcv/kdcv.hpp"

namespace gkdcv {

const char* measure_name(Measure measure) {
    switch (measure) {
        case Measure::L1: return "l1";
        case Measure::L2: return "l2";
        case Measure::Cos: return "cos";
    }
    return "?";
}

Measure parse_measure(const std::string& text) {
    if (text == "l1") return Measure::L1;
    if (text == "l2") return Measure::L2;
    if (text == "cos") return Measure::Cos;
    throw Error("config", "unknown measure '" + text + "' (expected l1, l2 or cos)");
}

double score(Measure measure, const Eigen::VectorXd& y, const Eigen::VectorXd& m) {
    if (y.size() != m.size()) {
        throw Error("dimension", "score arguments differ in length: " + std::to_string(y.size()) +
                                     " vs " + std::to_string(m.size()));
    }
    switch (measure) {
        case Measure::L1:
            return (y - m).lpNorm<1>();
        case Measure::L2:
            return (y - m).squaredNorm();
        case Measure::Cos: {
            const double ny = y.norm();
            const double nm = m.norm();
            if (ny == 0.0 || nm == 0.0) {
                throw Error("eval", "cosine similarity is undefined for a zero vector");
            }
            return -y.dot(m) / (ny * nm);
        }
    }
    throw Error("eval", "unreachable measure");
}

Ranking classify(const Eigen::MatrixXd& class_vectors, const Eigen::VectorXd& y, Measure measure) {
    if (y.size() != class_vectors.cols()) {
        throw Error("dimension", "discriminant vector length " + std::to_string(y.size()) +
                                     " does not match class vector length " +
                                     std::to_string(class_vectors.cols()));
    }
    Ranking ranking;
    ranking.reserve(class_vectors.rows());
    for (Eigen::Index c = 0; c < class_vectors.rows(); ++c) {
        ranking.push_back({static_cast<int>(c), score(measure, y, class_vectors.row(c).transpose())});
    }
    std::sort(ranking.begin(), ranking.end(), [](const RankedClass& a, const RankedClass& b) {
        return a.score < b.score || (a.score == b.score && a.class_id < b.class_id);
    });
    return ranking;
}

Ranking classify(const KdcvModel& model, const Eigen::VectorXd& y, Measure measure) {
    return classify(model.common_vectors(), y, measure);
}

}  // namespace gkdcv
