#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gkdcv/gabor.hpp"
#include "gkdcv/image.hpp"

namespace oracle {

/// Direct O(m n s^2) zero-padded spatial convolution with the kernel center
/// aligned to each output pixel; the reference for the FFT path.
gkdcv::ComplexPlane direct_convolve(const gkdcv::GrayImage& img, const gkdcv::GaborKernel& kernel);

/// Discriminative-common-vector fit carried out directly in input space
/// (explicit scatter matrices, no Gram matrix); the reference for the
/// kernel-space fit with a linear kernel.
struct ExplicitDcv {
    Eigen::VectorXd data_mean;     // d
    Eigen::MatrixXd projector;     // d x p, orthonormal columns
    Eigen::MatrixXd common;        // C x p
    Eigen::VectorXd scatter_eigs;  // retained eigenvalues of the total scatter, descending
    int rank = 0;

    Eigen::VectorXd project(const Eigen::VectorXd& x) const {
        return projector.transpose() * (x - data_mean);
    }
    int discriminant_dim() const { return static_cast<int>(projector.cols()); }
};

ExplicitDcv explicit_dcv_fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                             double rank_tol = 1e-10);

}  // namespace oracle
