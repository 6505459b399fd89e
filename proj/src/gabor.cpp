#include "gkdcv/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "gkdcv/error.hpp"

namespace gkdcv {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Smallest integer >= n with no prime factor above 7 (fast FFT sizes).
int next_fast_size(int n) {
    for (;; ++n) {
        int m = n;
        for (int f : {2, 3, 5, 7}) {
            while (m % f == 0) m /= f;
        }
        if (m == 1) return n;
    }
}

struct FftwBuffer {
    fftw_complex* data = nullptr;
    explicit FftwBuffer(std::size_t count) : data(fftw_alloc_complex(count)) {
        std::fill_n(reinterpret_cast<double*>(data), 2 * count, 0.0);
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    std::complex<double>* cpx() { return reinterpret_cast<std::complex<double>*>(data); }
};

// Shared state for convolving one image against many kernels of one support:
// the image spectrum is computed once, each kernel reuses the work buffer.
class ConvolutionWorkspace {
public:
    ConvolutionWorkspace(const GrayImage& img, int support)
        : m_(img.height),
          n_(img.width),
          pad_rows_(next_fast_size(img.height + support - 1)),
          pad_cols_(next_fast_size(img.width + support - 1)),
          img_spectrum_(static_cast<std::size_t>(pad_rows_) * pad_cols_),
          work_(static_cast<std::size_t>(pad_rows_) * pad_cols_) {
        if (support > std::min(m_, n_)) {
            throw Error("dimension", "kernel support " + std::to_string(support) +
                                         " exceeds image size " + std::to_string(m_) + "x" +
                                         std::to_string(n_));
        }
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fwd_img_ = fftw_plan_dft_2d(pad_rows_, pad_cols_, img_spectrum_.data, img_spectrum_.data,
                                        FFTW_FORWARD, FFTW_ESTIMATE);
            fwd_work_ = fftw_plan_dft_2d(pad_rows_, pad_cols_, work_.data, work_.data, FFTW_FORWARD,
                                         FFTW_ESTIMATE);
            inv_work_ = fftw_plan_dft_2d(pad_rows_, pad_cols_, work_.data, work_.data, FFTW_BACKWARD,
                                         FFTW_ESTIMATE);
        }
        std::complex<double>* dst = img_spectrum_.cpx();
        for (int r = 0; r < m_; ++r) {
            for (int c = 0; c < n_; ++c) {
                dst[static_cast<std::size_t>(r) * pad_cols_ + c] = img.at(r, c);
            }
        }
        fftw_execute(fwd_img_);
    }

    ~ConvolutionWorkspace() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd_img_);
        fftw_destroy_plan(fwd_work_);
        fftw_destroy_plan(inv_work_);
    }

    ConvolutionWorkspace(const ConvolutionWorkspace&) = delete;
    ConvolutionWorkspace& operator=(const ConvolutionWorkspace&) = delete;

    ComplexPlane run(const GaborKernel& kernel) {
        const int s = kernel.support;
        const int half = s / 2;
        std::complex<double>* w = work_.cpx();
        std::fill_n(w, static_cast<std::size_t>(pad_rows_) * pad_cols_, std::complex<double>(0.0));
        // Kernel coefficients wrap around the origin so index p of the
        // circular result equals the zero-padded "same" output at pixel p.
        for (int dy = -half; dy <= half; ++dy) {
            const int r = (dy + pad_rows_) % pad_rows_;
            for (int dx = -half; dx <= half; ++dx) {
                const int c = (dx + pad_cols_) % pad_cols_;
                w[static_cast<std::size_t>(r) * pad_cols_ + c] = kernel.at(dy + half, dx + half);
            }
        }
        fftw_execute(fwd_work_);

        const std::complex<double>* f = img_spectrum_.cpx();
        const double scale = 1.0 / (static_cast<double>(pad_rows_) * pad_cols_);
        const std::size_t total = static_cast<std::size_t>(pad_rows_) * pad_cols_;
        for (std::size_t i = 0; i < total; ++i) w[i] *= f[i] * scale;
        fftw_execute(inv_work_);

        ComplexPlane out;
        out.height = m_;
        out.width = n_;
        out.values.resize(static_cast<std::size_t>(m_) * n_);
        for (int r = 0; r < m_; ++r) {
            for (int c = 0; c < n_; ++c) {
                out.values[static_cast<std::size_t>(r) * n_ + c] =
                    w[static_cast<std::size_t>(r) * pad_cols_ + c];
            }
        }
        return out;
    }

private:
    int m_, n_, pad_rows_, pad_cols_;
    FftwBuffer img_spectrum_;
    FftwBuffer work_;
    fftw_plan fwd_img_ = nullptr;
    fftw_plan fwd_work_ = nullptr;
    fftw_plan inv_work_ = nullptr;
};

}  // namespace

void GaborParams::validate() const {
    if (!(k_max > 0.0)) throw Error("config", "gabor k_max must be positive");
    if (!(spacing > 1.0)) throw Error("config", "gabor spacing factor must exceed 1");
    if (!(sigma > 0.0)) throw Error("config", "gabor sigma must be positive");
    if (num_scales < 1 || num_orientations < 1) {
        throw Error("config", "gabor scale/orientation counts must be at least 1");
    }
}

double GaborParams::frequency(int nu) const { return k_max / std::pow(spacing, nu); }

double GaborParams::orientation(int mu) const {
    return M_PI * mu / static_cast<double>(num_orientations);
}

GaborKernel make_kernel(int mu, int nu, const GaborParams& params, int support) {
    params.validate();
    if (mu < 0 || mu >= params.num_orientations) {
        throw Error("config", "orientation index " + std::to_string(mu) + " out of range");
    }
    if (nu < 0 || nu >= params.num_scales) {
        throw Error("config", "scale index " + std::to_string(nu) + " out of range");
    }
    if (support < 1 || support % 2 == 0) {
        throw Error("config", "kernel support must be odd, got " + std::to_string(support));
    }

    const double k = params.frequency(nu);
    const double phi = params.orientation(mu);
    const double cos_phi = std::cos(phi);
    const double sin_phi = std::sin(phi);
    const double amp = k * k / (params.sigma * params.sigma);
    const double env_coef = k * k / (2.0 * params.sigma * params.sigma);
    const int half = support / 2;

    GaborKernel kernel;
    kernel.mu = mu;
    kernel.nu = nu;
    kernel.support = support;
    kernel.grid.resize(static_cast<std::size_t>(support) * support);

    std::vector<double> envelope(kernel.grid.size());
    std::vector<std::complex<double>> carrier(kernel.grid.size());

    double env_sum = 0.0;
    std::complex<double> modulated_sum(0.0, 0.0);
    for (int row = 0; row < support; ++row) {
        const double y = row - half;
        for (int col = 0; col < support; ++col) {
            const double x = col - half;
            const std::size_t i = static_cast<std::size_t>(row) * support + col;
            envelope[i] = amp * std::exp(-env_coef * (x * x + y * y));
            carrier[i] = std::polar(1.0, k * (x * cos_phi + y * sin_phi));
            env_sum += envelope[i];
            modulated_sum += envelope[i] * carrier[i];
        }
    }

    // DC compensation evaluated on the sampled grid itself; tends to the
    // continuous-domain constant exp(-sigma^2/2) as the support grows.
    const std::complex<double> dc = modulated_sum / env_sum;
    for (std::size_t i = 0; i < kernel.grid.size(); ++i) {
        kernel.grid[i] = envelope[i] * (carrier[i] - dc);
    }
    return kernel;
}

ComplexPlane convolve(const GrayImage& img, const GaborKernel& kernel) {
    ConvolutionWorkspace ws(img, kernel.support);
    return ws.run(kernel);
}

ResponseStack respond(const GrayImage& img, const GaborParams& params, int support) {
    params.validate();
    ConvolutionWorkspace ws(img, support);

    ResponseStack stack;
    stack.height = img.height;
    stack.width = img.width;
    stack.num_scales = params.num_scales;
    stack.num_orientations = params.num_orientations;
    stack.planes.reserve(static_cast<std::size_t>(params.num_scales) * params.num_orientations);

    for (int nu = 0; nu < params.num_scales; ++nu) {
        for (int mu = 0; mu < params.num_orientations; ++mu) {
            const ComplexPlane conv = ws.run(make_kernel(mu, nu, params, support));
            std::vector<double> plane(conv.values.size());
            for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = std::abs(conv.values[i]);
            stack.planes.push_back(std::move(plane));
        }
    }
    return stack;
}

}  // namespace gkdcv
