#include "gkdcv/kernels.hpp"

#include <cmath>

#include "gkdcv/error.hpp"

namespace gkdcv {

namespace {

constexpr double kQuarterPi = 0.7853981633974483;

double raw_eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    switch (spec.kind) {
        case KernelKind::Cosine:
            return kQuarterPi * std::cos(M_PI * spec.cosine_scale * x.dot(y) / 2.0);
        case KernelKind::Rbf:
            return std::exp(-(x - y).squaredNorm() / (spec.rbf_sigma * spec.rbf_sigma));
        case KernelKind::Polynomial:
            return std::pow(x.dot(y) + spec.poly_offset, spec.poly_degree);
    }
    throw Error("kernel", "unreachable kernel kind");
}

double self_eval(const KernelSpec& spec, const Eigen::VectorXd& x) { return raw_eval(spec, x, x); }

[[noreturn]] void bad_self_similarity(const KernelSpec& spec, double value) {
    if (spec.kind == KernelKind::Cosine) {
        throw Error("kernel", "cosine kernel self-similarity " + std::to_string(value) +
                                  " is not positive; the fitted scale bound was violated "
                                  "(probe norm exceeds the training range)");
    }
    throw Error("kernel",
                "kernel normalization undefined: self-similarity " + std::to_string(value));
}

}  // namespace

const char* kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Cosine: return "cosine";
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Polynomial: return "polynomial";
    }
    return "?";
}

KernelKind parse_kernel_kind(const std::string& text) {
    if (text == "cosine") return KernelKind::Cosine;
    if (text == "rbf") return KernelKind::Rbf;
    if (text == "polynomial") return KernelKind::Polynomial;
    throw Error("config", "unknown kernel type '" + text + "'");
}

void KernelSpec::validate() const {
    if (kind == KernelKind::Cosine && !(cosine_scale > 0.0)) {
        throw Error("config", "cosine kernel scale must be positive");
    }
    if (kind == KernelKind::Rbf && !(rbf_sigma > 0.0)) {
        throw Error("config", "rbf sigma must be positive");
    }
    if (kind == KernelKind::Polynomial && (poly_degree < 1 || poly_offset < 0.0)) {
        throw Error("config", "polynomial kernel needs degree >= 1 and offset >= 0");
    }
}

double eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    spec.validate();
    if (x.size() != y.size()) {
        throw Error("dimension", "kernel arguments differ in length: " + std::to_string(x.size()) +
                                     " vs " + std::to_string(y.size()));
    }
    const double k = raw_eval(spec, x, y);
    if (!spec.normalize) return k;
    const double kxx = self_eval(spec, x);
    const double kyy = self_eval(spec, y);
    if (!(kxx > 0.0)) bad_self_similarity(spec, kxx);
    if (!(kyy > 0.0)) bad_self_similarity(spec, kyy);
    return k / std::sqrt(kxx * kyy);
}

KernelSpec fit_cosine_scale(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    KernelSpec fitted = spec;
    if (spec.kind != KernelKind::Cosine) return fitted;
    double max_sq = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) max_sq = std::max(max_sq, X.col(j).squaredNorm());
    fitted.cosine_scale = max_sq > 0.0 ? 0.9 / max_sq : 1.0;
    return fitted;
}

GramMatrix gram(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    spec.validate();
    const Eigen::Index m = X.cols();
    if (m < 2) throw Error("dimension", "gram matrix requires at least 2 samples");

    GramMatrix g;
    g.entries.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            const double v = raw_eval(spec, X.col(i), X.col(j));
            g.entries(i, j) = v;
            g.entries(j, i) = v;
        }
    }
    if (spec.normalize) {
        Eigen::VectorXd diag = g.entries.diagonal();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (!(diag(i) > 0.0)) bad_self_similarity(spec, diag(i));
        }
        const Eigen::VectorXd root = diag.cwiseSqrt();
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const double v = g.entries(i, j) / (root(i) * root(j));
                g.entries(i, j) = v;
                g.entries(j, i) = v;
            }
            g.entries(i, i) = 1.0;
        }
    }
    return g;
}

GramMatrix center(const GramMatrix& g) {
    if (g.centered) throw Error("usage", "gram matrix is already centered");
    const Eigen::Index m = g.entries.rows();
    const Eigen::VectorXd row_mean = g.entries.rowwise().mean();
    const double grand_mean = row_mean.mean();

    GramMatrix out;
    out.centered = true;
    out.entries.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            out.entries(i, j) = g.entries(i, j) - row_mean(i) - row_mean(j) + grand_mean;
        }
    }
    return out;
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& x) {
    const GramMatrix g = gram(spec, X);
    const Eigen::VectorXd col_mean = g.entries.rowwise().mean();
    return kernel_vector(spec, X, x, col_mean, col_mean.mean());
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& gram_col_mean,
                              double gram_grand_mean) {
    spec.validate();
    if (x.size() != X.rows()) {
        throw Error("dimension", "probe length " + std::to_string(x.size()) +
                                     " does not match training feature length " +
                                     std::to_string(X.rows()));
    }
    const Eigen::Index m = X.cols();
    Eigen::VectorXd k(m);
    if (spec.normalize) {
        const double kxx = self_eval(spec, x);
        if (!(kxx > 0.0)) bad_self_similarity(spec, kxx);
        const double root_x = std::sqrt(kxx);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double kii = self_eval(spec, X.col(i));
            if (!(kii > 0.0)) bad_self_similarity(spec, kii);
            k(i) = raw_eval(spec, X.col(i), x) / (std::sqrt(kii) * root_x);
        }
    } else {
        for (Eigen::Index i = 0; i < m; ++i) k(i) = raw_eval(spec, X.col(i), x);
    }
    const double k_mean = k.mean();
    Eigen::VectorXd centered(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        centered(i) = k(i) - gram_col_mean(i) - k_mean + gram_grand_mean;
    }
    return centered;
}

}  // namespace gkdcv
