#pragma once

#include <span>
#include <vector>

namespace corrugate::fd {

/// Fornberg weights for derivative orders 0..max_order at x0 from the given
/// nodes. Result is indexed [order][node].
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order);

/// First and second derivatives of uniformly spaced, non-periodic samples
/// using 7-point stencils (centred inside, shifted near the ends).
/// Either output may be empty.
void derivatives_open(std::span<const double> f, double h, std::span<double> d1, std::span<double> d2);

/// Quintic Hermite interpolation on [0, h] from value, first and second
/// derivative at both ends. Returns the derivative of the given order
/// (0, 1 or 2) at local coordinate x.
double hermite5(double p0, double d0, double s0, double p1, double d1, double s1, double h, double x, int order);

}  // namespace corrugate::fd
