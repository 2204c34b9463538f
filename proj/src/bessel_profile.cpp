#include "corrugate/bessel_profile.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "corrugate/errors.hpp"

namespace corrugate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 - J0(sqrt(r)) and its r-derivative J1(sqrt r)/(2 sqrt r), both as
// series in r so nothing cancels near r = 0.
void one_minus_j0_of_sqrt(long double r, long double& value, long double& slope) {
  const long double z = -r / 4.0L;
  long double term = 1.0L;   // z^m / (m!)^2
  long double dterm = 0.25L; // z^m / (4 m! (m+1)!)
  long double sum = 0.0L;
  long double dsum = dterm;
  for (int m = 1; m < 60; ++m) {
    term *= z / (static_cast<long double>(m) * m);
    dterm *= z / (static_cast<long double>(m) * (m + 1));
    sum += term;
    dsum += dterm;
    if (std::fabs(term) < 1e-24L * std::fabs(sum) && std::fabs(dterm) < 1e-24L * std::fabs(dsum)) break;
  }
  value = -sum;
  slope = dsum;
}

// Solves 1 - J0(sqrt r) = d for r in [0, mu^2], d in [0, 1).
double solve_defect_for_r(double d, double mu) {
  if (d <= 0.0) return 0.0;
  const long double target = d;
  long double lo = 0.0L;
  long double hi = static_cast<long double>(mu) * mu;
  long double r = std::min<long double>(4.0L * target, 0.5L * (lo + hi));
  for (int iter = 0; iter < 200; ++iter) {
    long double g, slope;
    one_minus_j0_of_sqrt(r, g, slope);
    const long double residual = g - target;
    if (residual > 0) hi = r; else lo = r;
    long double next = r - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    const long double step = std::fabs(next - r);
    r = next;
    if (step <= 1e-18L * r || hi - lo <= 1e-18L * hi) break;
  }
  return static_cast<double>(r);
}

double compute_mu() {
  double x = 2.4;
  for (int i = 0; i < 50; ++i) {
    const double dx = bessel_j0(x) / (-bessel_j1(x));
    x -= dx;
    if (std::fabs(dx) < 1e-16) break;
  }
  return x;
}

// f(s) without domain checks.
double amplitude_angle(double s) {
  if (s == 0.0) return 0.0;
  const double q = std::sqrt(1.0 + s * s);
  const double d = s * s / (q * (1.0 + q));  // 1 - 1/sqrt(1+s^2)
  const double x = std::sqrt(solve_defect_for_r(d, j0_first_zero()));
  return s > 0 ? x : -x;
}

double amplitude_angle_prime(double s) {
  if (s == 0.0) return std::numbers::sqrt2;
  const double sa = std::fabs(s);
  const double q = std::sqrt(1.0 + s * s);
  const double x = amplitude_angle(sa);
  return sa / (q * q * q * bessel_j1(x));
}

double amplitude_angle_second(double s) {
  const double sa = std::fabs(s);
  if (sa < 1e-4) return -(15.0 * std::numbers::sqrt2 / 8.0) * s;
  const double q = std::sqrt(1.0 + s * s);
  const double q3 = q * q * q;
  const double x = amplitude_angle(sa);
  const double j1 = bessel_j1(x);
  const double j0 = bessel_j0(x);
  const double fp = sa / (q3 * j1);
  const double j1p = j0 - j1 / x;
  const double fpp = (1.0 / q3 - 3.0 * sa * sa / (q3 * q * q)) / j1 - sa / q3 * j1p * fp / (j1 * j1);
  return s > 0 ? fpp : -fpp;
}

inline Vec2 integrand(double q, double f, double u) {
  const double phase = f * std::sin(u);
  return {q * std::cos(phase) - 1.0, q * std::sin(phase)};
}

// int_a^b w(u) g(u) du with w(u) = (weight_offset - u) if weighted.
template <bool Weighted>
Vec2 integrate_panels(double q, double f, double a, double b, double weight_offset) {
  const auto& rule = gauss_legendre(16);
  const double span = b - a;
  const int panels = std::max(1, static_cast<int>(std::ceil(std::fabs(span) / (std::numbers::pi / 8.0))));
  const double width = span / panels;
  Vec2 total = Vec2::Zero();
  for (int p = 0; p < panels; ++p) {
    const double left = a + p * width;
    const double mid = left + 0.5 * width;
    Vec2 panel = Vec2::Zero();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = mid + 0.5 * width * rule.nodes[i];
      double w = rule.weights[i];
      if constexpr (Weighted) w *= (weight_offset - u);
      panel += w * integrand(q, f, u);
    }
    total += 0.5 * width * panel;
  }
  return total;
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::fabs(x);
  if (ax > 8.0) return std::cyl_bessel_j(0.0, ax);
  const long double z = -static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 80; ++m) {
    term *= z / (static_cast<long double>(m) * m);
    sum += term;
    if (std::fabs(term) < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

double bessel_j1(double x) {
  const double ax = std::fabs(x);
  if (ax > 8.0) return x > 0 ? std::cyl_bessel_j(1.0, ax) : -std::cyl_bessel_j(1.0, ax);
  const long double z = -static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 80; ++m) {
    term *= z / (static_cast<long double>(m) * (m + 1));
    sum += term;
    if (std::fabs(term) < 1e-22L) break;
  }
  return static_cast<double>(0.5L * x * sum);
}

double j0_first_zero() {
  static const double mu = compute_mu();
  return mu;
}

double j0_inverse(double y) {
  if (!(y > 0.0 && y <= 1.0)) {
    std::ostringstream msg;
    msg << "j0_inverse: argument " << y << " outside the bijection range (0, 1]";
    throw DomainError(msg.str());
  }
  return std::sqrt(solve_defect_for_r(1.0 - y, j0_first_zero()));
}

void bessel_jn_table(double z, int count, double* out) {
  if (count <= 0) return;
  if (z < 0.05) {
    // Power series; four terms are below 1e-15 relative for z < 0.05.
    const double half = 0.5 * z;
    const double h2 = -half * half;
    double lead = 1.0;  // (z/2)^n / n!
    for (int n = 0; n < count; ++n) {
      if (n > 0) lead *= half / n;
      double term = lead;
      double sum = lead;
      for (int k = 1; k < 6; ++k) {
        term *= h2 / (static_cast<double>(k) * (n + k));
        sum += term;
      }
      out[n] = sum;
    }
    return;
  }
  // Miller backward recurrence normalised by J0 + 2 sum J_2k = 1.
  const int start = std::max(count + 8, 48) | 1;  // odd so J_start-1 is even
  std::vector<double> vals(start + 2, 0.0);
  vals[start + 1] = 0.0;
  vals[start] = 1e-300;
  for (int n = start; n >= 1; --n) {
    vals[n - 1] = (2.0 * n / z) * vals[n] - vals[n + 1];
    if (std::fabs(vals[n - 1]) > 1e250) {
      for (int m = n - 1; m <= start; ++m) vals[m] *= 1e-250;
    }
  }
  double norm = vals[0];
  for (int n = 2; n <= start; n += 2) norm += 2.0 * vals[n];
  for (int n = 0; n < count; ++n) out[n] = vals[n] / norm;
}

const GaussLegendreRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

double estimate_corrugation_constant(double s_max, int grid_density) {
  if (!(s_max > 0.0) || grid_density < 2) throw DomainError("estimate_corrugation_constant: need s_max > 0 and grid_density >= 2");
  double sup = 0.0;
  for (int i = 1; i <= grid_density; ++i) {
    const double ratio = static_cast<double>(i) / grid_density;
    const double s = s_max * ratio * ratio;
    const double q = std::sqrt(1.0 + s * s);
    const double f = amplitude_angle(s);
    for (int j = 0; j < grid_density; ++j) {
      const double t = kTwoPi * j / grid_density;
      sup = std::max(sup, integrand(q, f, t).norm() / s);
    }
  }
  return 1.05 * sup;
}

ProfileEvaluator::ProfileEvaluator(ProfileOptions options) : options_(options) {
  if (!(options_.s_max > 0.0)) throw DomainError("ProfileEvaluator: s_max must be positive");
  if (options_.quadrature_nodes_per_period < 8) throw DomainError("ProfileEvaluator: need at least 8 quadrature nodes per period");
  mu_ = j0_first_zero();
  corrugation_constant_ = options_.corrugation_constant_override
                              ? *options_.corrugation_constant_override
                              : estimate_corrugation_constant(options_.s_max, options_.constant_grid_density);
}

void ProfileEvaluator::check_amplitude(double s) const {
  if (!(std::fabs(s) <= options_.s_max)) {
    std::ostringstream msg;
    msg << "profile amplitude " << s << " outside the certified range [-" << options_.s_max << ", "
        << options_.s_max << "]";
    throw DomainError(msg.str());
  }
}

double ProfileEvaluator::f_amplitude(double s) const {
  check_amplitude(s);
  return amplitude_angle(s);
}

double ProfileEvaluator::f_amplitude_prime(double s) const {
  check_amplitude(s);
  return amplitude_angle_prime(s);
}

double ProfileEvaluator::f_amplitude_second(double s) const {
  check_amplitude(s);
  return amplitude_angle_second(s);
}

void ProfileRow::build_knots() {
  const auto& rule = gauss_legendre(16);
  const double width = std::numbers::pi / 8.0;
  gamma_knots_[0] = moment_knots_[0] = Vec2::Zero();
  for (int j = 1; j < kKnots; ++j) {
    const double mid = (j - 0.5) * width;
    Vec2 g = Vec2::Zero(), m = Vec2::Zero();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = mid + 0.5 * width * rule.nodes[i];
      const Vec2 v = rule.weights[i] * integrand(q_, f_, u);
      g += v;
      m += u * v;
    }
    gamma_knots_[j] = gamma_knots_[j - 1] + 0.5 * width * g;
    moment_knots_[j] = moment_knots_[j - 1] + 0.5 * width * m;
  }
}

// int_0^t g(u) du, or int_0^t u g(u) du when moment is set.
Vec2 ProfileRow::partial(double t, bool moment) const {
  const double width = std::numbers::pi / 8.0;
  const int j = static_cast<int>(std::floor(t / width));
  if (t < 0.0 || j >= kKnots - 1) {
    return moment ? Vec2(t * integrate_panels<false>(q_, f_, 0.0, t, 0.0) - integrate_panels<true>(q_, f_, 0.0, t, t))
                  : integrate_panels<false>(q_, f_, 0.0, t, 0.0);
  }
  const double a = j * width;
  const auto& rule = gauss_legendre(16);
  const double half = 0.5 * (t - a), mid = 0.5 * (t + a);
  Vec2 piece = Vec2::Zero();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = mid + half * rule.nodes[i];
    piece += (moment ? u : 1.0) * rule.weights[i] * integrand(q_, f_, u);
  }
  return (moment ? moment_knots_[j] : gamma_knots_[j]) + half * piece;
}

Vec2 ProfileRow::gamma(double t) const { return partial(t, false); }

// int_0^t (t - u) g(u) du = t Gamma(t) - int_0^t u g(u) du
Vec2 ProfileRow::psi(double t) const { return t * partial(t, false) - partial(t, true) - t * mean_; }

Vec2 ProfileRow::psi_t(double t) const { return gamma(t) - mean_; }

Vec2 ProfileRow::psi_tt(double t) const { return integrand(q_, f_, t); }

ProfileRow ProfileEvaluator::row(double s) const {
  check_amplitude(s);
  ProfileRow r;
  r.s_ = s;
  r.q_ = std::sqrt(1.0 + s * s);
  r.f_ = amplitude_angle(s);
  r.build_knots();
  // Periodic trapezoid over the node values of Gamma, each obtained by
  // accumulating Gauss-Legendre cell integrals.
  const int nodes = options_.quadrature_nodes_per_period;
  const double cell = kTwoPi / nodes;
  const auto& rule = gauss_legendre(8);
  Vec2 gamma = Vec2::Zero();
  Vec2 sum = Vec2::Zero();
  for (int j = 0; j < nodes; ++j) {
    sum += gamma;
    const double mid = (j + 0.5) * cell;
    Vec2 piece = Vec2::Zero();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      piece += rule.weights[i] * integrand(r.q_, r.f_, mid + 0.5 * cell * rule.nodes[i]);
    }
    gamma += 0.5 * cell * piece;
  }
  r.mean_ = sum / nodes;
  return r;
}

Vec2 ProfileEvaluator::gamma_profile(double s, double t) const {
  check_amplitude(s);
  const double q = std::sqrt(1.0 + s * s);
  return integrate_panels<false>(q, amplitude_angle(s), 0.0, t, 0.0);
}

Vec2 ProfileEvaluator::gamma_mean(double s) const { return row(s).mean(); }

Vec2 ProfileEvaluator::psi_t(double s, double t) const { return row(s).psi_t(t); }

Vec2 ProfileEvaluator::psi(double s, double t) const { return row(s).psi(t); }

Vec2 ProfileEvaluator::psi_tt(double s, double t) const {
  check_amplitude(s);
  return integrand(std::sqrt(1.0 + s * s), amplitude_angle(s), t);
}

ProfileCoefficients ProfileEvaluator::coefficients(double s) const {
  check_amplitude(s);
  constexpr int kH = ProfileCoefficients::kHarmonics;
  ProfileCoefficients out;
  const double f = amplitude_angle(s);
  const double z = std::fabs(f);
  double table[kH + 3];
  bessel_jn_table(z, kH + 3, table);
  if (f < 0) {
    for (int n = 1; n < kH + 3; n += 2) table[n] = -table[n];
  }
  auto J = [&](int n) { return n >= 0 ? table[n] : ((-n) % 2 ? -table[-n] : table[-n]); };
  const double q = std::sqrt(1.0 + s * s);
  const double q1 = s / q;
  const double q2 = 1.0 / (q * q * q);
  const double fp = amplitude_angle_prime(s);
  const double fpp = amplitude_angle_second(s);
  for (int n = 1; n <= kH; ++n) {
    const double jn = J(n);
    const double d1 = 0.5 * (J(n - 1) - J(n + 1));
    const double d2 = 0.25 * (J(n - 2) - 2.0 * jn + J(n + 2));
    out.c[n] = 2.0 * q * jn;
    out.c_s[n] = 2.0 * (q1 * jn + q * d1 * fp);
    out.c_ss[n] = 2.0 * (q2 * jn + 2.0 * q1 * d1 * fp + q * (d2 * fp * fp + d1 * fpp));
  }
  return out;
}

ProfileJet ProfileEvaluator::jet(const ProfileCoefficients& k, double phase) {
  constexpr int kH = ProfileCoefficients::kHarmonics;
  ProfileJet out;
  const double s1 = std::sin(phase);
  const double c1 = std::cos(phase);
  double sn = s1, cn = c1;
  for (int n = 1; n <= kH; ++n) {
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    if (n % 2 == 0) {
      const double one_minus = 1.0 - cn;
      out.psi[0] += k.c[n] * one_minus * inv2;
      out.psi_t[0] += k.c[n] * sn * inv;
      out.psi_tt[0] += k.c[n] * cn;
      out.psi_s[0] += k.c_s[n] * one_minus * inv2;
      out.psi_ts[0] += k.c_s[n] * sn * inv;
      out.psi_ss[0] += k.c_ss[n] * one_minus * inv2;
    } else {
      out.psi[1] -= k.c[n] * sn * inv2;
      out.psi_t[1] -= k.c[n] * cn * inv;
      out.psi_tt[1] += k.c[n] * sn;
      out.psi_s[1] -= k.c_s[n] * sn * inv2;
      out.psi_ts[1] -= k.c_s[n] * cn * inv;
      out.psi_ss[1] -= k.c_ss[n] * sn * inv2;
    }
    const double next_s = sn * c1 + cn * s1;
    cn = cn * c1 - sn * s1;
    sn = next_s;
  }
  return out;
}

}  // namespace corrugate
