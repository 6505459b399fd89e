#include "gkdcv/kdcv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>

#include "gkdcv/error.hpp"

namespace gkdcv {

namespace {

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

constexpr char kMagic[6] = {'K', 'D', 'C', 'V', '1', '\0'};
constexpr std::uint16_t kVersion = 1;

void check_labels(const std::vector<int>& labels, Eigen::Index m) {
    if (static_cast<Eigen::Index>(labels.size()) != m) {
        throw Error("dimension", "label count does not match sample count");
    }
    std::vector<int> counts;
    for (int label : labels) {
        if (label < 0) throw Error("fit", "negative class label");
        if (label >= static_cast<int>(counts.size())) counts.resize(label + 1, 0);
        ++counts[label];
    }
    if (counts.size() < 2) throw Error("fit", "training needs at least 2 classes");
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw Error("fit", "class ids are not contiguous (class " + std::to_string(c) + " is empty)");
        }
        if (counts[c] < 2) {
            throw Error("fit", "class " + std::to_string(c) + " has a single training sample; "
                               "within-class scatter needs at least 2");
        }
    }
    if (m < static_cast<Eigen::Index>(counts.size()) + 1) {
        throw Error("fit", "need at least C + 1 training samples");
    }
}

// --- binary section helpers -------------------------------------------------

void write_bytes(std::ofstream& out, const void* data, std::size_t size) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <typename T>
void write_pod(std::ofstream& out, T value) {
    write_bytes(out, &value, sizeof(T));
}

void begin_section(std::ofstream& out, std::uint64_t payload_bytes) {
    write_pod<std::uint64_t>(out, payload_bytes);
}

void write_matrix_section(std::ofstream& out, const Eigen::MatrixXd& m) {
    begin_section(out, sizeof(double) * static_cast<std::uint64_t>(m.size()));
    // row-major on disk
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) write_pod<double>(out, m(r, c));
    }
}

struct Reader {
    std::ifstream in;
    std::string path;

    void read_bytes(void* data, std::size_t size) {
        in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
        if (static_cast<std::size_t>(in.gcount()) != size) {
            throw Error("format", path + ": truncated model file");
        }
    }
    template <typename T>
    T read_pod() {
        T value;
        read_bytes(&value, sizeof(T));
        return value;
    }
    std::uint64_t expect_section(std::uint64_t expected_bytes) {
        const auto n = read_pod<std::uint64_t>();
        if (n != expected_bytes) {
            throw Error("format", path + ": unexpected section size " + std::to_string(n));
        }
        return n;
    }
    Eigen::MatrixXd read_matrix_section(Eigen::Index rows, Eigen::Index cols) {
        expect_section(sizeof(double) * static_cast<std::uint64_t>(rows) * cols);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_pod<double>();
        }
        return m;
    }
};

}  // namespace

KdcvModel KdcvModel::fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                         const KernelSpec& kernel, double rank_tol) {
    const Eigen::Index m = features.cols();
    check_labels(labels, m);
    if (!(rank_tol > 0.0)) throw Error("config", "rank tolerance must be positive");

    KdcvModel model;
    model.train_ = features;
    model.labels_ = labels;
    model.kernel_ = fit_cosine_scale(kernel, features);
    model.rank_tol_ = rank_tol;

    const int num_classes = 1 + *std::max_element(labels.begin(), labels.end());

    const GramMatrix raw = gram(model.kernel_, features);
    model.gram_col_mean_ = raw.entries.rowwise().mean();
    model.gram_grand_mean_ = model.gram_col_mean_.mean();
    const GramMatrix centered_gram = center(raw);

    // Step 1: eigendecompose the centered Gram. The indefinite cosine kernel
    // puts its spectral mass on the negative side; fitting then proceeds on
    // the reflected Gram so every retained eigenvalue is strictly positive.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eig(centered_gram.entries);
    if (gram_eig.info() != Eigen::Success) throw Error("fit", "gram eigendecomposition failed");

    double pos_mass = 0.0, neg_mass = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double lambda = gram_eig.eigenvalues()(i);
        if (lambda > 0.0) pos_mass += lambda;
        else neg_mass -= lambda;
    }
    model.spectral_sign_ = pos_mass >= neg_mass ? 1.0 : -1.0;

    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return model.spectral_sign_ * gram_eig.eigenvalues()(a) >
               model.spectral_sign_ * gram_eig.eigenvalues()(b);
    });

    const double lambda_max = model.spectral_sign_ * gram_eig.eigenvalues()(order.front());
    if (!(lambda_max > 0.0)) {
        throw Error("fit", "centered gram matrix has no positive eigenvalues; "
                           "the training features carry no variation under this kernel");
    }
    const double lambda_floor = std::max(0.0, rank_tol * lambda_max);

    Eigen::Index rank = 0;
    while (rank < m && model.spectral_sign_ * gram_eig.eigenvalues()(order[rank]) > lambda_floor) {
        ++rank;
    }

    Eigen::VectorXd lambda(rank);
    Eigen::MatrixXd u(m, rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
        lambda(i) = model.spectral_sign_ * gram_eig.eigenvalues()(order[i]);
        u.col(i) = gram_eig.eigenvectors().col(order[i]);
    }
    model.eig_values_ = lambda;

    // Step 2: coordinates on the range of the total scatter.
    // Z = Lambda^{-1/2} U^T (sign K~) collapses to Lambda^{1/2} U^T.
    Eigen::MatrixXd z = lambda.cwiseSqrt().asDiagonal() * u.transpose();  // r x M

    // Class means, then within-class scatter accumulated in sample order
    // (keeps the result bit-identical under class relabeling).
    Eigen::MatrixXd class_mean = Eigen::MatrixXd::Zero(rank, num_classes);
    std::vector<int> class_count(num_classes, 0);
    for (Eigen::Index j = 0; j < m; ++j) {
        class_mean.col(labels[j]) += z.col(j);
        ++class_count[labels[j]];
    }
    for (int c = 0; c < num_classes; ++c) class_mean.col(c) /= class_count[c];

    Eigen::MatrixXd scatter_w = Eigen::MatrixXd::Zero(rank, rank);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd dev = z.col(j) - class_mean.col(labels[j]);
        scatter_w.noalias() += dev * dev.transpose();
    }

    // Step 3: null space of the reduced within-class scatter.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> w_eig(scatter_w);
    if (w_eig.info() != Eigen::Success) throw Error("fit", "within-class eigendecomposition failed");
    const double null_tol = rank_tol * scatter_w.trace() / static_cast<double>(rank);

    Eigen::Index null_dim = 0;
    while (null_dim < rank && w_eig.eigenvalues()(null_dim) <= null_tol) ++null_dim;
    if (null_dim == 0) {
        throw Error("fit", "within-class scatter has an empty null space (no discriminative "
                           "directions); use a larger feature dimension or fewer training "
                           "samples per class");
    }
    Eigen::MatrixXd v = w_eig.eigenvectors().leftCols(null_dim);

    // Step 4: drop directions where the projected between-class scatter
    // vanishes, order the rest by decreasing between-class spread, and cap
    // the dimension at C - 1.
    const Eigen::VectorXd z_mean = z.rowwise().mean();
    Eigen::MatrixXd scatter_b = Eigen::MatrixXd::Zero(rank, rank);
    // One term per sample (sum_c N_c (mu_c - mu)(mu_c - mu)^T expanded), again
    // in sample order for relabeling stability.
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd dev = class_mean.col(labels[j]) - z_mean;
        scatter_b.noalias() += dev * dev.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b_eig(v.transpose() * scatter_b * v);
    if (b_eig.info() != Eigen::Success) throw Error("fit", "between-class eigendecomposition failed");

    const double b_max = b_eig.eigenvalues()(null_dim - 1);
    if (!(b_max > 0.0)) {
        throw Error("fit", "between-class scatter vanishes on the discriminative subspace; "
                           "classes are indistinguishable under this kernel");
    }
    const double b_tol = rank_tol * b_max;
    Eigen::Index kept = 0;
    while (kept < null_dim && b_eig.eigenvalues()(null_dim - 1 - kept) > b_tol) ++kept;
    const Eigen::Index p = std::min<Eigen::Index>(kept, num_classes - 1);

    Eigen::MatrixXd basis(null_dim, p);
    for (Eigen::Index i = 0; i < p; ++i) basis.col(i) = b_eig.eigenvectors().col(null_dim - 1 - i);
    v = v * basis;  // rank x p

    // Projection coefficients: Y = A^T k~_x with A = sign * U Lambda^{-1/2} V.
    model.coeff_ = model.spectral_sign_ *
                   (u * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v);

    const Eigen::MatrixXd y_train = v.transpose() * z;  // p x M
    model.common_ = Eigen::MatrixXd::Zero(num_classes, p);
    for (Eigen::Index j = 0; j < m; ++j) model.common_.row(labels[j]) += y_train.col(j).transpose();
    for (int c = 0; c < num_classes; ++c) model.common_.row(c) /= class_count[c];

    return model;
}

Eigen::VectorXd KdcvModel::project(const Eigen::VectorXd& x) const {
    if (x.size() != train_.rows()) {
        throw Error("dimension", "probe feature length " + std::to_string(x.size()) +
                                     " does not match the model's training feature length " +
                                     std::to_string(train_.rows()));
    }
    const Eigen::VectorXd centered =
        kernel_vector(kernel_, train_, x, gram_col_mean_, gram_grand_mean_);
    return coeff_.transpose() * centered;
}

void KdcvModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", path + ": cannot open model file for writing");

    write_bytes(out, kMagic, sizeof(kMagic));
    write_pod<std::uint16_t>(out, kVersion);

    // kernel spec section: kind, normalize, sign, params
    begin_section(out, 4 + 1 + 5 * sizeof(double));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(kernel_.kind));
    write_pod<std::uint8_t>(out, kernel_.normalize ? 1 : 0);
    write_pod<double>(out, spectral_sign_);
    write_pod<double>(out, kernel_.cosine_scale);
    write_pod<double>(out, kernel_.rbf_sigma);
    write_pod<double>(out, static_cast<double>(kernel_.poly_degree));
    write_pod<double>(out, kernel_.poly_offset);

    // dimensions section: M, d, r, p, C
    begin_section(out, 5 * 4);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(num_train()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(feature_dim()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(rank()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(discriminant_dim()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(num_classes()));

    write_matrix_section(out, train_);

    begin_section(out, 4ull * labels_.size());
    for (int label : labels_) write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(label));

    write_matrix_section(out, eig_values_);
    write_matrix_section(out, coeff_);
    write_matrix_section(out, common_);

    begin_section(out, sizeof(double));
    write_pod<double>(out, rank_tol_);

    if (!out) throw Error("io", path + ": model write failed");
}

KdcvModel KdcvModel::load(const std::string& path) {
    Reader r;
    r.path = path;
    r.in.open(path, std::ios::binary);
    if (!r.in) throw Error("io", path + ": cannot open model file");

    char magic[sizeof(kMagic)];
    r.read_bytes(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("format", path + ": not a KDCV model file");
    }
    const auto version = r.read_pod<std::uint16_t>();
    if (version != kVersion) {
        throw Error("format", path + ": unsupported model version " + std::to_string(version));
    }

    KdcvModel model;
    r.expect_section(4 + 1 + 5 * sizeof(double));
    const auto kind = r.read_pod<std::uint32_t>();
    if (kind > 2) throw Error("format", path + ": invalid kernel kind tag");
    model.kernel_.kind = static_cast<KernelKind>(kind);
    model.kernel_.normalize = r.read_pod<std::uint8_t>() != 0;
    model.spectral_sign_ = r.read_pod<double>();
    model.kernel_.cosine_scale = r.read_pod<double>();
    model.kernel_.rbf_sigma = r.read_pod<double>();
    model.kernel_.poly_degree = static_cast<int>(r.read_pod<double>());
    model.kernel_.poly_offset = r.read_pod<double>();

    r.expect_section(5 * 4);
    const auto m = static_cast<Eigen::Index>(r.read_pod<std::uint32_t>());
    const auto d = static_cast<Eigen::Index>(r.read_pod<std::uint32_t>());
    const auto rank = static_cast<Eigen::Index>(r.read_pod<std::uint32_t>());
    const auto p = static_cast<Eigen::Index>(r.read_pod<std::uint32_t>());
    const auto c = static_cast<Eigen::Index>(r.read_pod<std::uint32_t>());

    model.train_ = r.read_matrix_section(d, m);

    r.expect_section(4ull * m);
    model.labels_.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) model.labels_[i] = static_cast<int>(r.read_pod<std::uint32_t>());

    model.eig_values_ = r.read_matrix_section(rank, 1);
    model.coeff_ = r.read_matrix_section(m, p);
    model.common_ = r.read_matrix_section(c, p);

    r.expect_section(sizeof(double));
    model.rank_tol_ = r.read_pod<double>();

    // Centering statistics are recomputed with the same deterministic code
    // path used at fit time, so reloaded projections are bit-identical.
    const GramMatrix raw = gram(model.kernel_, model.train_);
    model.gram_col_mean_ = raw.entries.rowwise().mean();
    model.gram_grand_mean_ = model.gram_col_mean_.mean();
    return model;
}

}  // namespace gkdcv
