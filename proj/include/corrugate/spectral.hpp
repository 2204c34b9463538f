#pragma once

// Trigonometric tools for periodic samples f_j = f(j * period / N).

#include <cstddef>
#include <span>
#include <vector>

namespace corrugate::spectral {

/// First and second derivative of the trigonometric interpolant at the
/// sample points. Either output may be empty to skip it.
void derivatives(std::span<const double> f, double period, std::span<double> d1, std::span<double> d2);

/// Values of the trigonometric interpolant on a grid `factor` times finer.
/// The original samples are reproduced at every factor-th point.
std::vector<double> upsample(std::span<const double> f, std::size_t factor);

/// F_j = int_0^{t_j} f(t) dt for the trigonometric interpolant of f.
/// Also returns the period integral through `total` when non-null.
std::vector<double> cumulative_integral(std::span<const double> f, double period, double* total = nullptr);

}  // namespace corrugate::spectral
