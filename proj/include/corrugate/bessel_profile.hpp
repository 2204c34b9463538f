#pragma once

// Corrugation profile built from the zeroth Bessel function.
//
// The amplitude-to-angle map f(s) = sgn(s) J0^{-1}(1/sqrt(1+s^2)) makes the
// integrand
//
//     Gamma_t(s, u) = sqrt(1+s^2) (cos(f sin u), sin(f sin u)) - (1, 0)
//
// have zero mean over a period, so Gamma(s, t) = int_0^t Gamma_t du is
// 2pi-periodic. Psi is the zero-mean-derivative antiderivative of Gamma and
// its second t-derivative lies on the circle of radius sqrt(1+s^2) centred
// at (-1, 0).
//
// Two evaluation routes exist:
//  * quadrature (gamma_profile, psi, psi_t): Gauss-Legendre partial
//    integrals plus a periodic trapezoid mean, following the definitions;
//  * series (jet): the Jacobi-Anger expansion of the integrand, which gives
//    Psi and all derivatives needed by the step in closed form.
// Tests cross-check the two.

#include <Eigen/Core>
#include <array>
#include <optional>
#include <vector>

namespace corrugate {

using Vec2 = Eigen::Vector2d;

/// J0 by power series (long double accumulation) for |x| <= 8.
double bessel_j0(double x);
/// J1 by power series, same range as bessel_j0.
double bessel_j1(double x);

/// Smallest positive zero of J0.
double j0_first_zero();

/// Unique x in [0, mu) with J0(x) = y. Throws DomainError unless y in (0, 1].
double j0_inverse(double y);

/// Integer-order J_0..J_{count-1} at 0 <= z <= mu (Miller recurrence,
/// power series near zero).
void bessel_jn_table(double z, int count, double* out);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int order);

/// Everything the step needs at one (s, t): Psi and the derivatives
/// d/dt, d2/dt2, d/ds, d2/dsdt, d2/ds2.
struct ProfileJet {
  Vec2 psi = Vec2::Zero();
  Vec2 psi_t = Vec2::Zero();
  Vec2 psi_tt = Vec2::Zero();
  Vec2 psi_s = Vec2::Zero();
  Vec2 psi_ts = Vec2::Zero();
  Vec2 psi_ss = Vec2::Zero();
};

/// Per-amplitude Fourier-Bessel coefficients c_n = 2 sqrt(1+s^2) J_n(f(s))
/// and their first two s-derivatives. Reusable across many phases.
struct ProfileCoefficients {
  static constexpr int kHarmonics = 32;
  double c[kHarmonics + 1] = {};
  double c_s[kHarmonics + 1] = {};
  double c_ss[kHarmonics + 1] = {};
};

struct ProfileOptions {
  int quadrature_nodes_per_period = 512;
  double s_max = 100.0;
  int constant_grid_density = 256;
  /// Replaces the measured C; only useful for fault-injection tests.
  std::optional<double> corrugation_constant_override;
};

/// sup over an (s, t) grid of |Psi_tt(s, t)| / |s| for 0 < s <= s_max,
/// inflated by 5%. Deterministic.
double estimate_corrugation_constant(double s_max, int grid_density);

class ProfileEvaluator;

/// Quadrature route at one amplitude with f(s) and the period mean of Gamma
/// computed once.
class ProfileRow {
 public:
  double s() const { return s_; }
  Vec2 gamma(double t) const;
  Vec2 mean() const { return mean_; }
  Vec2 psi(double t) const;
  Vec2 psi_t(double t) const;
  Vec2 psi_tt(double t) const;

 private:
  friend class ProfileEvaluator;
  // Gamma(t) = G(t_j) + int_{t_j}^t g and int_0^t u g(u) du = M(t_j) + ...,
  // at knots t_j = j pi/8 for t in [0, 6 pi]; one partial panel per call.
  static constexpr int kKnots = 49;
  void build_knots();
  Vec2 partial(double t, bool moment) const;
  double s_ = 0.0, q_ = 1.0, f_ = 0.0;
  Vec2 mean_ = Vec2::Zero();
  std::array<Vec2, kKnots> gamma_knots_{}, moment_knots_{};
};

/// Immutable after construction; all members are safe to call concurrently.
class ProfileEvaluator {
 public:
  explicit ProfileEvaluator(ProfileOptions options = {});

  double mu() const { return mu_; }
  double corrugation_constant() const { return corrugation_constant_; }
  double s_max() const { return options_.s_max; }
  int quadrature_nodes_per_period() const { return options_.quadrature_nodes_per_period; }

  /// f(s) = sgn(s) J0^{-1}(1/sqrt(1+s^2)).
  double f_amplitude(double s) const;
  double f_amplitude_prime(double s) const;
  double f_amplitude_second(double s) const;

  // Quadrature route.
  ProfileRow row(double s) const;
  Vec2 gamma_profile(double s, double t) const;
  /// Mean of Gamma(s, .) over one period (periodic trapezoid).
  Vec2 gamma_mean(double s) const;
  Vec2 psi(double s, double t) const;
  Vec2 psi_t(double s, double t) const;
  /// Closed form: Gamma_t(s, t).
  Vec2 psi_tt(double s, double t) const;

  // Series route.
  ProfileCoefficients coefficients(double s) const;
  static ProfileJet jet(const ProfileCoefficients& coeffs, double phase);
  ProfileJet jet(double s, double t) const { return jet(coefficients(s), t); }

 private:
  void check_amplitude(double s) const;

  ProfileOptions options_;
  double mu_ = 0.0;
  double corrugation_constant_ = 0.0;
};

}  // namespace corrugate
