#pragma once

#include <complex>
#include <span>
#include <vector>

namespace sketchtensor {

/// Forward DFT of a real vector zero-padded (or truncated) to n points.
std::vector<std::complex<double>> dft(std::span<const double> x, std::size_t n);

/// Inverse DFT returning the real part, normalized by 1/n. The result of
/// every transform in this library is real up to round-off; the imaginary
/// residue is checked against 1e-9 * ||result|| and a std::runtime_error is
/// thrown if it is exceeded.
std::vector<double> idft_real(const std::vector<std::complex<double>>& spectrum);

/// F^-1(F(x_1, n) * ... * F(x_k, n)): the n-point circular convolution of
/// the inputs. With n at least sum(len(x_i)) - k + 1 this is their linear
/// convolution.
std::vector<double> fft_convolve(const std::vector<std::span<const double>>& inputs,
                                 std::size_t n);

}  // namespace sketchtensor
