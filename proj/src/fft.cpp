#include "sketchtensor/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace sketchtensor {

namespace {

// Plans are cached per length and shared; fftw_execute_dft on caller-owned
// buffers is thread-safe, plan creation is not, hence the mutex.
struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::unordered_map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> in(n), out(n);
  auto* fin = reinterpret_cast<fftw_complex*>(in.data());
  auto* fout = reinterpret_cast<fftw_complex*>(out.data());
  PlanPair plans{
      fftw_plan_dft_1d(static_cast<int>(n), fin, fout, FFTW_FORWARD,
                       FFTW_ESTIMATE | FFTW_UNALIGNED),
      fftw_plan_dft_1d(static_cast<int>(n), fin, fout, FFTW_BACKWARD,
                       FFTW_ESTIMATE | FFTW_UNALIGNED),
  };
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const double> x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("dft: zero length");
  std::vector<std::complex<double>> in(n);
  const std::size_t copy = std::min(n, x.size());
  for (std::size_t i = 0; i < copy; ++i) in[i] = x[i];
  std::vector<std::complex<double>> out(n);
  fftw_execute_dft(plans_for(n).forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> idft_real(const std::vector<std::complex<double>>& spectrum) {
  const std::size_t n = spectrum.size();
  if (n == 0) throw std::invalid_argument("idft_real: zero length");
  std::vector<std::complex<double>> in(spectrum), out(n);
  fftw_execute_dft(plans_for(n).backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  std::vector<double> result(n);
  double real_sq = 0.0, imag_sq = 0.0;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = out[i].real() * scale;
    const double im = out[i].imag() * scale;
    result[i] = re;
    real_sq += re * re;
    imag_sq += im * im;
  }
  if (std::sqrt(imag_sq) > 1e-9 * std::sqrt(real_sq) + 1e-12) {
    throw std::runtime_error("idft_real: inverse transform is not real");
  }
  return result;
}

std::vector<double> fft_convolve(const std::vector<std::span<const double>>& inputs,
                                 std::size_t n) {
  if (inputs.empty()) throw std::invalid_argument("fft_convolve: no inputs");
  std::vector<std::complex<double>> acc = dft(inputs[0], n);
  for (std::size_t k = 1; k < inputs.size(); ++k) {
    std::vector<std::complex<double>> next = dft(inputs[k], n);
    for (std::size_t i = 0; i < n; ++i) acc[i] *= next[i];
  }
  return idft_real(acc);
}

}  // namespace sketchtensor
