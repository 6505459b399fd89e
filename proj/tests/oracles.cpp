#include "oracles.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

gkdcv::ComplexPlane direct_convolve(const gkdcv::GrayImage& img, const gkdcv::GaborKernel& kernel) {
    const int m = img.height;
    const int n = img.width;
    const int half = kernel.support / 2;

    gkdcv::ComplexPlane out;
    out.height = m;
    out.width = n;
    out.values.assign(static_cast<std::size_t>(m) * n, {0.0, 0.0});

    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < n; ++c) {
            std::complex<double> acc(0.0, 0.0);
            for (int dy = -half; dy <= half; ++dy) {
                const int src_r = r - dy;
                if (src_r < 0 || src_r >= m) continue;
                for (int dx = -half; dx <= half; ++dx) {
                    const int src_c = c - dx;
                    if (src_c < 0 || src_c >= n) continue;
                    acc += kernel.at(dy + half, dx + half) * img.at(src_r, src_c);
                }
            }
            out.values[static_cast<std::size_t>(r) * n + c] = acc;
        }
    }
    return out;
}

ExplicitDcv explicit_dcv_fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                             double rank_tol) {
    const Eigen::Index d = features.rows();
    const Eigen::Index m = features.cols();
    const int num_classes = 1 + *std::max_element(labels.begin(), labels.end());

    ExplicitDcv fit;
    fit.data_mean = features.rowwise().mean();
    Eigen::MatrixXd centered = features.colwise() - fit.data_mean;

    Eigen::MatrixXd scatter_t = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> t_eig(scatter_t);
    if (t_eig.info() != Eigen::Success) throw std::runtime_error("oracle: total scatter eig failed");

    const double lambda_max = t_eig.eigenvalues()(d - 1);
    if (!(lambda_max > 0.0)) throw std::runtime_error("oracle: no data variation");
    const double floor = rank_tol * lambda_max;

    Eigen::Index rank = 0;
    while (rank < d && t_eig.eigenvalues()(d - 1 - rank) > floor) ++rank;
    fit.rank = static_cast<int>(rank);
    fit.scatter_eigs.resize(rank);
    Eigen::MatrixXd basis(d, rank);  // orthonormal range of the total scatter, descending
    for (Eigen::Index i = 0; i < rank; ++i) {
        fit.scatter_eigs(i) = t_eig.eigenvalues()(d - 1 - i);
        basis.col(i) = t_eig.eigenvectors().col(d - 1 - i);
    }

    const Eigen::MatrixXd z = basis.transpose() * centered;  // rank x M

    Eigen::MatrixXd class_mean = Eigen::MatrixXd::Zero(rank, num_classes);
    std::vector<int> counts(num_classes, 0);
    for (Eigen::Index j = 0; j < m; ++j) {
        class_mean.col(labels[j]) += z.col(j);
        ++counts[labels[j]];
    }
    for (int c = 0; c < num_classes; ++c) class_mean.col(c) /= counts[c];

    Eigen::MatrixXd scatter_w = Eigen::MatrixXd::Zero(rank, rank);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd dev = z.col(j) - class_mean.col(labels[j]);
        scatter_w.noalias() += dev * dev.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> w_eig(scatter_w);
    const double null_tol = rank_tol * scatter_w.trace() / static_cast<double>(rank);
    Eigen::Index null_dim = 0;
    while (null_dim < rank && w_eig.eigenvalues()(null_dim) <= null_tol) ++null_dim;
    if (null_dim == 0) throw std::runtime_error("oracle: empty within-class null space");
    Eigen::MatrixXd v = w_eig.eigenvectors().leftCols(null_dim);

    const Eigen::VectorXd z_mean = z.rowwise().mean();
    Eigen::MatrixXd scatter_b = Eigen::MatrixXd::Zero(rank, rank);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd dev = class_mean.col(labels[j]) - z_mean;
        scatter_b.noalias() += dev * dev.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b_eig(v.transpose() * scatter_b * v);
    const double b_max = b_eig.eigenvalues()(null_dim - 1);
    if (!(b_max > 0.0)) throw std::runtime_error("oracle: classes indistinguishable");
    const double b_tol = rank_tol * b_max;
    Eigen::Index kept = 0;
    while (kept < null_dim && b_eig.eigenvalues()(null_dim - 1 - kept) > b_tol) ++kept;
    const Eigen::Index p = std::min<Eigen::Index>(kept, num_classes - 1);

    Eigen::MatrixXd order(null_dim, p);
    for (Eigen::Index i = 0; i < p; ++i) order.col(i) = b_eig.eigenvectors().col(null_dim - 1 - i);
    v = v * order;

    fit.projector = basis * v;  // d x p
    const Eigen::MatrixXd y_train = fit.projector.transpose() * centered;
    fit.common = Eigen::MatrixXd::Zero(num_classes, p);
    for (Eigen::Index j = 0; j < m; ++j) fit.common.row(labels[j]) += y_train.col(j).transpose();
    for (int c = 0; c < num_classes; ++c) fit.common.row(c) /= counts[c];
    return fit;
}

}  // namespace oracle
