#include "corrugate/finite_difference.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace corrugate::fd {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int max_order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

// stencil[offset][order][node]: the 7 nodes start at -offset.
const std::array<std::vector<std::vector<double>>, 7>& seven_point_tables() {
  static const auto tables = [] {
    std::array<std::vector<std::vector<double>>, 7> out;
    for (int first = 0; first < 7; ++first) {
      std::array<double, 7> nodes{};
      for (int j = 0; j < 7; ++j) nodes[j] = static_cast<double>(j - first);
      out[first] = fornberg_weights(0.0, nodes, 2);
    }
    return out;
  }();
  return tables;
}

}  // namespace

void derivatives_open(std::span<const double> f, double h, std::span<double> d1, std::span<double> d2) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
  if (n < 7) throw std::invalid_argument("fd::derivatives_open needs at least 7 samples");
  const auto& tables = seven_point_tables();
  const double inv_h = 1.0 / h;
  const double inv_h2 = inv_h * inv_h;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(i - 3, 0, n - 7);
    const auto& w = tables[i - start];
    double a = 0.0, b = 0.0;
    for (int j = 0; j < 7; ++j) {
      a += w[1][j] * f[start + j];
      b += w[2][j] * f[start + j];
    }
    if (!d1.empty()) d1[i] = a * inv_h;
    if (!d2.empty()) d2[i] = b * inv_h2;
  }
}

double hermite5(double p0, double d0, double s0, double p1, double d1, double s1, double h, double x, int order) {
  const double u = x / h;
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  const double hd0 = h * d0, hd1 = h * d1, hs0 = h * h * s0, hs1 = h * h * s1;
  switch (order) {
    case 0: {
      const double h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
      const double h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
      const double h2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
      const double h3 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
      const double h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
      const double h5 = 0.5 * (u3 - 2.0 * u4 + u5);
      return h0 * p0 + h1 * hd0 + h2 * hs0 + h3 * p1 + h4 * hd1 + h5 * hs1;
    }
    case 1: {
      const double h0 = -30.0 * u2 + 60.0 * u3 - 30.0 * u4;
      const double h1 = 1.0 - 18.0 * u2 + 32.0 * u3 - 15.0 * u4;
      const double h2 = 0.5 * (2.0 * u - 9.0 * u2 + 12.0 * u3 - 5.0 * u4);
      const double h3 = -h0;
      const double h4 = -12.0 * u2 + 28.0 * u3 - 15.0 * u4;
      const double h5 = 0.5 * (3.0 * u2 - 8.0 * u3 + 5.0 * u4);
      return (h0 * p0 + h1 * hd0 + h2 * hs0 + h3 * p1 + h4 * hd1 + h5 * hs1) / h;
    }
    case 2: {
      const double h0 = -60.0 * u + 180.0 * u2 - 120.0 * u3;
      const double h1 = -36.0 * u + 96.0 * u2 - 60.0 * u3;
      const double h2 = 0.5 * (2.0 - 18.0 * u + 36.0 * u2 - 20.0 * u3);
      const double h3 = -h0;
      const double h4 = -24.0 * u + 84.0 * u2 - 60.0 * u3;
      const double h5 = 0.5 * (6.0 * u - 24.0 * u2 + 20.0 * u3);
      return (h0 * p0 + h1 * hd0 + h2 * hs0 + h3 * p1 + h4 * hd1 + h5 * hs1) / (h * h);
    }
    default:
      throw std::invalid_argument("hermite5: order must be 0, 1 or 2");
  }
}

}  // namespace corrugate::fd
