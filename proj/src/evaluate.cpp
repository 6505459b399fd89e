#include "gkdcv/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "gkdcv/error.hpp"

namespace gkdcv {

EvalReport metrics(const ConfusionCounts& counts) {
    const std::uint64_t genuine = counts.tp + counts.fn;
    const std::uint64_t impostor = counts.fp + counts.tn;
    if (genuine == 0) throw Error("eval", "no genuine probes (tp + fn = 0)");
    if (impostor == 0) throw Error("eval", "no impostor probes (fp + tn = 0)");

    EvalReport report;
    report.counts = counts;
    report.sensitivity = 100.0 * static_cast<double>(counts.tp) / static_cast<double>(genuine);
    report.specificity = 100.0 * static_cast<double>(counts.tn) / static_cast<double>(impostor);
    report.fnr = 100.0 * static_cast<double>(counts.fn) / static_cast<double>(genuine);
    report.fpr = 100.0 * static_cast<double>(counts.fp) / static_cast<double>(impostor);
    report.accuracy = 100.0 * static_cast<double>(counts.tp + counts.tn) /
                      static_cast<double>(genuine + impostor);
    return report;
}

EvalReport closed_set_eval(const Eigen::MatrixXd& class_vectors,
                           const std::vector<LabeledVector>& probes, Measure measure) {
    const int num_classes = static_cast<int>(class_vectors.rows());
    if (probes.empty()) throw Error("eval", "no genuine probes (tp + fn = 0)");
    if (num_classes < 2) throw Error("eval", "closed-set evaluation needs at least 2 classes");

    std::vector<std::uint64_t> rank_hits(num_classes, 0);
    std::uint64_t correct = 0;
    for (const auto& probe : probes) {
        if (probe.label < 0 || probe.label >= num_classes) {
            throw Error("eval", "probe labeled with unknown class " + std::to_string(probe.label));
        }
        const Ranking ranking = classify(class_vectors, probe.y, measure);
        int position = 0;
        while (ranking[position].class_id != probe.label) ++position;
        ++rank_hits[position];
        if (position == 0) ++correct;
    }

    const std::uint64_t n = probes.size();
    const std::uint64_t wrong = n - correct;
    ConfusionCounts counts;
    counts.tp = correct;
    counts.fn = wrong;
    counts.fp = wrong;
    counts.tn = n * static_cast<std::uint64_t>(num_classes - 1) - wrong;

    EvalReport report = metrics(counts);
    report.cmc.resize(num_classes);
    std::uint64_t cumulative = 0;
    for (int k = 0; k < num_classes; ++k) {
        cumulative += rank_hits[k];
        report.cmc[k] = 100.0 * static_cast<double>(cumulative) / static_cast<double>(n);
    }
    return report;
}

EvalReport verification_eval(const Eigen::MatrixXd& class_vectors,
                             const std::vector<LabeledVector>& genuine,
                             const std::vector<LabeledVector>& impostor, Measure measure,
                             double tau) {
    const int num_classes = static_cast<int>(class_vectors.rows());
    auto claimed_score = [&](const LabeledVector& probe) {
        if (probe.label < 0 || probe.label >= num_classes) {
            throw Error("eval", "probe claims unknown class " + std::to_string(probe.label));
        }
        return score(measure, probe.y, class_vectors.row(probe.label).transpose());
    };

    ConfusionCounts counts;
    for (const auto& probe : genuine) {
        if (claimed_score(probe) <= tau) ++counts.tp;
        else ++counts.fn;
    }
    for (const auto& probe : impostor) {
        if (claimed_score(probe) <= tau) ++counts.fp;
        else ++counts.tn;
    }
    EvalReport report = metrics(counts);
    report.threshold = tau;
    return report;
}

double equal_error_rate(std::vector<double> genuine_scores, std::vector<double> impostor_scores,
                        double* threshold_out) {
    if (genuine_scores.empty() || impostor_scores.empty()) {
        throw Error("eval", "equal error rate needs both genuine and impostor scores");
    }
    std::sort(genuine_scores.begin(), genuine_scores.end());
    std::sort(impostor_scores.begin(), impostor_scores.end());

    std::vector<double> candidates = genuine_scores;
    candidates.insert(candidates.end(), impostor_scores.begin(), impostor_scores.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const double g = static_cast<double>(genuine_scores.size());
    const double i = static_cast<double>(impostor_scores.size());
    double best_gap = std::numeric_limits<double>::infinity();
    double best_rate = 0.0;
    double best_tau = candidates.front();
    for (double tau : candidates) {
        const auto rejected = genuine_scores.end() -
                              std::upper_bound(genuine_scores.begin(), genuine_scores.end(), tau);
        const auto accepted =
            std::upper_bound(impostor_scores.begin(), impostor_scores.end(), tau) -
            impostor_scores.begin();
        const double fnr = 100.0 * static_cast<double>(rejected) / g;
        const double fpr = 100.0 * static_cast<double>(accepted) / i;
        const double gap = std::abs(fnr - fpr);
        if (gap < best_gap) {
            best_gap = gap;
            best_rate = (fnr + fpr) / 2.0;
            best_tau = tau;
        }
    }
    if (threshold_out) *threshold_out = best_tau;
    return best_rate;
}

}  // namespace gkdcv
