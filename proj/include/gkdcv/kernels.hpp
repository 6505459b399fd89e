#pragma once

#include <Eigen/Dense>
#include <string>

namespace gkdcv {

enum class KernelKind { Cosine, Rbf, Polynomial };

const char* kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& text);

/// Kernel choice plus parameters. The cosine variant evaluates
/// (pi/4) * cos(pi * scale * <x,y> / 2); its scale is fitted on training data
/// so that scale * max_i <x_i, x_i> <= 0.9, keeping self-similarity positive.
struct KernelSpec {
    KernelKind kind = KernelKind::Cosine;
    bool normalize = true;       // k(x,y) / sqrt(k(x,x) k(y,y))
    double cosine_scale = 1.0;
    double rbf_sigma = 1.0;      // exp(-||x-y||^2 / sigma^2)
    int poly_degree = 1;         // (<x,y> + offset)^degree
    double poly_offset = 0.0;

    void validate() const;
};

/// Symmetric M x M kernel matrix over a sample set.
struct GramMatrix {
    Eigen::MatrixXd entries;
    bool centered = false;
};

double eval(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Returns a copy of spec with the cosine scale fitted to the training
/// columns of X (no-op for other kernel kinds).
KernelSpec fit_cosine_scale(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// Gram matrix over the columns of X (d x M, M >= 2).
GramMatrix gram(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// Double centering K~ = (I - 1_M) K (I - 1_M); rejects a second application.
GramMatrix center(const GramMatrix& g);

/// Centered kernel vector of a probe against the training columns:
/// entry i equals <phi(x_i) - phi_mean, phi(x) - phi_mean>.
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& x);

/// As above with precomputed column means / grand mean of the uncentered
/// training Gram (the form used by a fitted model).
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& gram_col_mean,
                              double gram_grand_mean);

}  // namespace gkdcv
