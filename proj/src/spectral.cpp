#include "corrugate/spectral.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace corrugate::spectral {

namespace {

using Complex = std::complex<double>;

struct Plan {
  fftw_plan plan = nullptr;
  ~Plan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

// FFTW planning is not thread safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan forward_plan(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<Plan>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<Plan>();
    std::vector<double> in(n);
    std::vector<Complex> out(n / 2 + 1);
    slot->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  return slot->plan;
}

fftw_plan backward_plan(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<Plan>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<Plan>();
    std::vector<Complex> in(n / 2 + 1);
    std::vector<double> out(n);
    slot->plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  return slot->plan;
}

std::vector<Complex> forward(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> in(f.begin(), f.end());
  std::vector<Complex> out(n / 2 + 1);
  fftw_execute_dft_r2c(forward_plan(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

// c2r overwrites its input, so take it by value.
void backward(std::vector<Complex> coeffs, std::size_t n, std::span<double> out) {
  fftw_execute_dft_c2r(backward_plan(n), reinterpret_cast<fftw_complex*>(coeffs.data()), out.data());
}

}  // namespace

void derivatives(std::span<const double> f, double period, std::span<double> d1, std::span<double> d2) {
  const std::size_t n = f.size();
  if (n < 4) throw std::invalid_argument("spectral::derivatives needs at least 4 samples");
  const auto coeffs = forward(f);
  const double base = 2.0 * std::numbers::pi / period;
  const double norm = 1.0 / static_cast<double>(n);
  const bool even = n % 2 == 0;
  if (!d1.empty()) {
    std::vector<Complex> c(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) c[k] = Complex(0.0, base * k * norm) * coeffs[k];
    if (even) c[n / 2] = 0.0;
    backward(std::move(c), n, d1);
  }
  if (!d2.empty()) {
    std::vector<Complex> c(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const double w = base * static_cast<double>(k);
      c[k] = -w * w * norm * coeffs[k];
    }
    backward(std::move(c), n, d2);
  }
}

std::vector<double> upsample(std::span<const double> f, std::size_t factor) {
  const std::size_t n = f.size();
  if (factor <= 1) return {f.begin(), f.end()};
  const std::size_t m = n * factor;
  const auto coeffs = forward(f);
  std::vector<Complex> c(m / 2 + 1, Complex(0.0, 0.0));
  const double norm = 1.0 / static_cast<double>(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < coeffs.size(); ++k) c[k] = coeffs[k] * norm;
  if (n % 2 == 0) c[half] = 0.5 * coeffs[half] * norm;
  std::vector<double> out(m);
  backward(std::move(c), m, out);
  return out;
}

std::vector<double> cumulative_integral(std::span<const double> f, double period, double* total) {
  const std::size_t n = f.size();
  auto coeffs = forward(f);
  const double mean = coeffs[0].real() / static_cast<double>(n);
  const double base = 2.0 * std::numbers::pi / period;
  const double norm = 1.0 / static_cast<double>(n);
  std::vector<Complex> c(coeffs.size());
  c[0] = 0.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) c[k] = coeffs[k] * norm / Complex(0.0, base * k);
  if (n % 2 == 0) c[n / 2] = 0.0;
  std::vector<double> periodic(n);
  backward(std::move(c), n, periodic);
  std::vector<double> out(n);
  const double h = period / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = mean * h * static_cast<double>(j) + periodic[j] - periodic[0];
  if (total) *total = mean * period;
  return out;
}

}  // namespace corrugate::spectral
