#include <cmath>
#include <numbers>

#include "corrugate/bessel_profile.hpp"
#include "corrugate/errors.hpp"
#include "doctest.h"

using namespace corrugate;

namespace {
const ProfileEvaluator& evaluator() {
  static const ProfileEvaluator p;
  return p;
}
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("j0 values") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::fabs(bessel_j0(2.404825557695773)) < 1e-12);
  CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
  CHECK(bessel_j0(-1.0) == bessel_j0(1.0));
}

TEST_CASE("first zero of j0") {
  const double mu = j0_first_zero();
  CHECK(mu > 2.40);
  CHECK(mu < 2.41);
  CHECK(std::fabs(bessel_j0(mu)) < 1e-12);
  CHECK(evaluator().mu() == mu);
}

TEST_CASE("j0 inverse") {
  CHECK(j0_inverse(1.0) == 0.0);
  CHECK(j0_inverse(0.7651976865579666) == doctest::Approx(1.0).epsilon(1e-12));
  const double x = j0_inverse(1.0 / std::sqrt(2.0));
  CHECK(std::fabs(bessel_j0(x) - 1.0 / std::sqrt(2.0)) < 1e-13);
  CHECK(x > 0.0);
  CHECK(x < j0_first_zero());
  CHECK_THROWS_AS(j0_inverse(1.5), DomainError);
  CHECK_THROWS_AS(j0_inverse(-0.1), DomainError);
}

TEST_CASE("jn table matches j0 and j1") {
  double table[8];
  for (double z : {0.0, 0.3, 1.7, 2.4}) {
    bessel_jn_table(z, 8, table);
    CHECK(table[0] == doctest::Approx(bessel_j0(z)).epsilon(1e-13));
    CHECK(table[1] == doctest::Approx(bessel_j1(z)).epsilon(1e-13));
    // recurrence J_{n-1} + J_{n+1} = 2n/z J_n
    if (z > 0.0) CHECK(table[2] + table[4] == doctest::Approx(6.0 / z * table[3]).epsilon(1e-12));
  }
}

TEST_CASE("amplitude angle") {
  const auto& p = evaluator();
  CHECK(p.f_amplitude(0.0) == 0.0);
  const double h = 1e-4;
  CHECK(std::fabs((p.f_amplitude(h) - p.f_amplitude(-h)) / (2 * h) - std::sqrt(2.0)) < 1e-5);
  CHECK(p.f_amplitude(-0.7) == -p.f_amplitude(0.7));
  CHECK(p.f_amplitude_prime(0.0) == doctest::Approx(1.4142135623730951).epsilon(1e-14));
  const double k = 1e-5;
  CHECK(std::fabs(p.f_amplitude_prime(3.0) - (p.f_amplitude(3.0 + k) - p.f_amplitude(3.0 - k)) / (2 * k)) < 1e-6);
  CHECK(std::fabs(p.f_amplitude_second(3.0) -
                  (p.f_amplitude_prime(3.0 + k) - p.f_amplitude_prime(3.0 - k)) / (2 * k)) < 1e-5);
  // f' / w stays bounded where w = 1 - 1/sqrt(1 + s^2)
  for (double s = 1.0; s <= 100.0; s *= 2.0) {
    const double w = 1.0 - 1.0 / std::sqrt(1.0 + s * s);
    CHECK(std::fabs(p.f_amplitude_prime(s) / w) < 10.0);
  }
  CHECK(std::fabs(bessel_j0(p.f_amplitude(2.0)) - 1.0 / std::sqrt(5.0)) < 1e-13);
}

TEST_CASE("gamma profile") {
  const auto& p = evaluator();
  for (double t : {0.0, 1.0, 4.0}) CHECK(p.gamma_profile(0.0, t).norm() == 0.0);
  for (double s : {0.5, 1.0, 7.0, -3.0}) CHECK((p.gamma_profile(s, 2 * kPi) - p.gamma_profile(s, 0.0)).norm() < 1e-10);
  // oracle: composite Simpson with many nodes
  const int m = 20000;
  Vec2 simpson = Vec2::Zero();
  for (int i = 0; i <= m; ++i) {
    const double u = kPi * i / m;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    simpson += w * p.psi_tt(1.0, u);
  }
  simpson *= kPi / (3.0 * m);
  CHECK((p.gamma_profile(1.0, kPi) - simpson).norm() < 1e-10);
}

TEST_CASE("psi") {
  const auto& p = evaluator();
  for (double t : {0.0, 0.4, 3.0}) {
    CHECK(p.psi(0.0, t).norm() == 0.0);
    CHECK(p.psi_t(0.0, t).norm() == 0.0);
  }
  const Vec2 tt = p.psi_tt(1.0, 0.7);
  CHECK(std::fabs((1 + tt[0]) * (1 + tt[0]) + tt[1] * tt[1] - 2.0) < 1e-10);
  for (double s : {0.3, 2.0, 20.0}) {
    const int m = 256;
    Vec2 mean = Vec2::Zero();
    for (int i = 0; i < m; ++i) mean += p.psi_t(s, 2 * kPi * i / m);
    CHECK((mean / m).norm() < 1e-10);
  }
}

TEST_CASE("series route agrees with quadrature route") {
  const auto& p = evaluator();
  for (double s : {-4.0, -0.2, 0.05, 1.0, 12.0}) {
    const ProfileRow row = p.row(s);
    for (double t : {0.0, 0.3, 2.9, 5.5}) {
      const ProfileJet j = p.jet(s, t);
      CHECK((j.psi - row.psi(t)).norm() < 1e-11 * std::max(1.0, std::fabs(s)));
      CHECK((j.psi_t - row.psi_t(t)).norm() < 1e-11 * std::max(1.0, std::fabs(s)));
      CHECK((j.psi_tt - row.psi_tt(t)).norm() < 1e-11 * std::max(1.0, std::fabs(s)));
      // s-derivatives against central differences of the series
      const double h = 1e-5;
      const ProfileJet up = p.jet(s + h, t), dn = p.jet(s - h, t);
      CHECK((j.psi_s - (up.psi - dn.psi) / (2 * h)).norm() < 1e-6 * std::max(1.0, std::fabs(s)));
      CHECK((j.psi_ts - (up.psi_t - dn.psi_t) / (2 * h)).norm() < 1e-6 * std::max(1.0, std::fabs(s)));
      CHECK((j.psi_ss - (up.psi_s - dn.psi_s) / (2 * h)).norm() < 1e-5 * std::max(1.0, std::fabs(s)));
    }
  }
}

TEST_CASE("corrugation constant") {
  const auto& p = evaluator();
  const double C = p.corrugation_constant();
  CHECK(C >= std::sqrt(2.0));
  CHECK(C <= 10.0);
  CHECK(std::isfinite(C));
  double near_zero = 0.0;
  for (int i = 0; i < 512; ++i) near_zero = std::max(near_zero, p.psi_tt(1e-3, 2 * kPi * i / 512).norm() / 1e-3);
  CHECK(near_zero <= C);
  const double coarse = estimate_corrugation_constant(100.0, 128);
  const double fine = estimate_corrugation_constant(100.0, 256);
  CHECK(std::fabs(fine - coarse) < 0.01 * fine);
}

TEST_CASE("amplitude outside the table is a domain error") {
  CHECK_THROWS_AS(evaluator().psi(1e6, 0.0), DomainError);
  CHECK_THROWS_AS(evaluator().coefficients(std::nan("")), DomainError);
}
