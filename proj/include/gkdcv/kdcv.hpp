#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gkdcv/kernels.hpp"

namespace gkdcv {

/// Kernel discriminative common vector model.
///
/// Training maps samples into the kernel feature space, keeps the range of
/// the total scatter (eigenpairs of the centered Gram), finds the null space
/// of the reduced within-class scatter, and projects every sample there; all
/// training samples of a class then collapse onto a single common vector,
/// which serves as the class template for nearest-template matching.
class KdcvModel {
public:
    /// features: d x M column-per-sample matrix; labels: class id per column,
    /// contiguous 0..C-1. Requires C >= 2, every class with >= 2 samples and
    /// M >= C + 1.
    static KdcvModel fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                         const KernelSpec& kernel, double rank_tol = 1e-10);

    /// Discriminant vector (p-dim) of a probe feature vector.
    Eigen::VectorXd project(const Eigen::VectorXd& x) const;

    /// C x p matrix, row i = common vector of class i.
    const Eigen::MatrixXd& common_vectors() const { return common_; }

    int num_classes() const { return static_cast<int>(common_.rows()); }
    int num_train() const { return static_cast<int>(train_.cols()); }
    int feature_dim() const { return static_cast<int>(train_.rows()); }
    int rank() const { return static_cast<int>(eig_values_.size()); }
    int discriminant_dim() const { return static_cast<int>(common_.cols()); }
    const KernelSpec& kernel() const { return kernel_; }
    double rank_tol() const { return rank_tol_; }
    /// Retained eigenvalues of the spectrally aligned centered Gram,
    /// descending; all strictly positive.
    const Eigen::VectorXd& eigenvalues() const { return eig_values_; }
    /// +1 when the centered Gram's positive spectrum dominates, -1 when the
    /// kernel is negative-type (the indefinite cosine kernel) and the fit ran
    /// on the reflected Gram.
    double spectral_sign() const { return spectral_sign_; }
    const Eigen::MatrixXd& train_features() const { return train_; }
    const std::vector<int>& labels() const { return labels_; }
    const Eigen::MatrixXd& coefficients() const { return coeff_; }

    void save(const std::string& path) const;
    static KdcvModel load(const std::string& path);

private:
    KdcvModel() = default;

    Eigen::MatrixXd train_;       // d x M
    std::vector<int> labels_;     // M
    KernelSpec kernel_;
    double spectral_sign_ = 1.0;
    double rank_tol_ = 1e-10;
    Eigen::VectorXd eig_values_;  // r, descending
    Eigen::MatrixXd coeff_;       // M x p, projection is coeff^T * k~_x
    Eigen::MatrixXd common_;      // C x p
    Eigen::VectorXd gram_col_mean_;
    double gram_grand_mean_ = 0.0;
};

}  // namespace gkdcv
