#pragma once
#include <Eigen/Dense>
#include <complex>

namespace tfp::fft {

// Unnormalized DFT, FFTW sign convention: forward multiplies by e^{-2pi i nk/N}.
Eigen::VectorXcd forward(const Eigen::VectorXcd& in);
Eigen::VectorXcd backward(const Eigen::VectorXcd& in);

// Fractional DFT (Bluestein): g_j = sum_k c_k e^{2pi i beta (j-M/2)(k-N/2)},
// j = 0..M-1 with M = out_size (input length N when out_size < 0).
// beta = 1/N, M = N reproduces the centered inverse-DFT kernel.
Eigen::VectorXcd centered_fractional(const Eigen::VectorXcd& c, double beta, int out_size = -1);

}  // namespace tfp::fft
