#pragma once

#include <complex>
#include <vector>

#include "gkdcv/image.hpp"

namespace gkdcv {

/// Parameters of the Gabor wavelet family: carrier frequencies
/// k_nu = k_max / spacing^nu and orientations phi_mu = pi*mu/num_orientations.
struct GaborParams {
    double k_max = 1.5707963267948966;      // pi/2
    double spacing = 1.4142135623730951;    // sqrt(2)
    double sigma = 6.283185307179586;       // 2*pi
    int num_scales = 5;
    int num_orientations = 8;

    void validate() const;
    double frequency(int nu) const;   // k_nu
    double orientation(int mu) const; // phi_mu
};

/// Complex Gabor kernel sampled on an odd s x s grid centered at the origin.
/// The oscillatory carrier is offset by the constant that zeroes the grid sum,
/// so the kernel is DC-free on its actual (truncated, discrete) support.
struct GaborKernel {
    int mu = 0;
    int nu = 0;
    int support = 0;
    std::vector<std::complex<double>> grid;  // row-major, center at (support/2, support/2)

    std::complex<double> at(int row, int col) const {
        return grid[static_cast<std::size_t>(row) * support + col];
    }
};

struct ComplexPlane {
    int height = 0;
    int width = 0;
    std::vector<std::complex<double>> values;  // row-major

    std::complex<double> at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
};

/// Magnitude responses of one image under the full kernel family,
/// scale-major: plane index = nu * num_orientations + mu.
struct ResponseStack {
    int height = 0;
    int width = 0;
    int num_scales = 0;
    int num_orientations = 0;
    std::vector<std::vector<double>> planes;

    const std::vector<double>& plane(int mu, int nu) const {
        return planes[static_cast<std::size_t>(nu) * num_orientations + mu];
    }
};

GaborKernel make_kernel(int mu, int nu, const GaborParams& params, int support);

/// Zero-padded linear convolution via FFT, cropped to the input size with the
/// kernel center aligned to each output pixel.
ComplexPlane convolve(const GrayImage& img, const GaborKernel& kernel);

ResponseStack respond(const GrayImage& img, const GaborParams& params, int support);

}  // namespace gkdcv
