#pragma once

// Independent checks. Curvature here comes from finite differences of the
// position samples only (after refining closed curves by trigonometric
// interpolation), never from the stored derivative jets.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "corrugate/bessel_profile.hpp"
#include "corrugate/curve.hpp"
#include "corrugate/step.hpp"

namespace corrugate {

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Index grid = 0;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool all_pass() const;
  const Check* find(const std::string& name) const;
  /// measured <= bound + tolerance
  void add_upper(std::string name, double measured, double bound, double tolerance, Index grid, std::string detail = {});
};

/// Derivatives and curvature from positions alone. Closed curves: spectral upsample, then
/// 4th-order central differences. Open curves: 9-point stencils on the native grid.
struct OracleJets {
  UniformGrid grid;
  MatrixXd position, first, second;
  VectorXd curvature;
};
OracleJets oracle_jets(const SampledCurve& curve, int refinement = 4);

VerificationReport check_profile(const ProfileEvaluator& profile, const std::vector<double>& s_grid,
                                 const std::vector<double>& t_grid);

struct StepCheckOptions {
  int refinement = 4;
  /// Relative tolerance for oracle vs construction curvature.
  double agreement_tolerance = 1e-5;
};

VerificationReport check_step(const SampledCurve& prev, const SampledCurve& next, const ScalarField& k,
                              double epsilon_i, double C, const StepCheckOptions& options = {});

/// Windows [t0, t1] inside [0, b] with lengths in [0.05 b, 0.5 b].
std::vector<std::pair<double, double>> random_windows(double b, int count, std::uint64_t seed);

VerificationReport check_necessity(const std::vector<SampledCurve>& curve_seq, const SampledCurve& gamma,
                                   const ScalarField& k, const std::vector<std::pair<double, double>>& windows);

}  // namespace corrugate
