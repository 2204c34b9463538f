#pragma once

// One corrugation step. The perturbation is added to the arclength
// reparametrization and pulled back; all of this is done directly on the
// original parameter with the chain rule (d/ds = (1/|gamma'|) d/dt), which is
// the same curve without resampling through phi^{-1}.

#include <string>
#include <vector>

#include "corrugate/bessel_profile.hpp"
#include "corrugate/curve.hpp"
#include "corrugate/errors.hpp"

namespace corrugate {

enum class Kernel { KuiperStrain, NashTwist };

const char* to_string(Kernel kernel);
Kernel kernel_from_string(const std::string& name);

struct StepParams {
  double delta = 0.1;
  double lambda = 1.0;
  Kernel kernel = Kernel::KuiperStrain;
  double epsilon_i = 1.0;
  /// Output grid size; 0 picks the smallest power-of-two refinement of the
  /// input with at least samples_per_oscillation nodes per period.
  Index samples = 0;
  int samples_per_oscillation = 32;
  Execution exec = Execution::Parallel;
};

struct StepReport {
  Kernel kernel = Kernel::KuiperStrain;
  double lambda_used = 0.0;
  double delta_used = 0.0;
  long long oscillations = 0;  // lambda * length / 2pi
  Index samples = 0;
  int trials = 0;
  double epsilon_i = 0.0;

  double defect_before = 0.0;  // sup |k^2 - k_gamma^2| before
  double defect_after = 0.0;
  double min_gap_before = 0.0;  // min (k^2 - k_gamma^2) before
  double min_curvature_after = 0.0;
  double max_curvature_ratio_after = 0.0;  // max k_gamma / k
  double c0_displacement = 0.0;
  double c1_displacement = 0.0;  // sup (|d| + |d'|)
  double c2_displacement = 0.0;  // sup |d''|
  double speed_sup_before = 0.0;  // ||gamma'||_{C^0}
  double c2_bound = 0.0;          // C ||gamma'||^2 sqrt(defect_before)
  double corrugation_constant = 0.0;
  double max_amplitude = 0.0;
  double min_speed_before = 0.0;
  double min_speed_after = 0.0;
  double closure_mismatch = 0.0;

  bool pass_c1 = false;       // c1_displacement < epsilon_i
  bool pass_c2 = false;       // c2_displacement <= c2_bound
  bool pass_defect = false;   // defect_after < epsilon_i
  bool pass_sandwich = false; // 0 < k_gamma < k
  bool estimates_pass() const { return pass_c1 && pass_c2 && pass_defect && pass_sandwich; }
};

class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, StepReport partial)
      : Error(ErrorKind::StepFailure, what), partial_(std::move(partial)) {}
  const StepReport& partial_report() const { return partial_; }

 private:
  StepReport partial_;
};

struct StepResult {
  SampledCurve curve;
  StepReport report;
};

/// a = sqrt((1 - delta)(k^2/|xi|^2 - 1)) at the nodes of `curve`, where xi is
/// the arclength curvature vector. Any parametrization is accepted; for a
/// unit-speed curve xi = gamma''.
ScalarField amplitude_field(const SampledCurve& curve, const ScalarField& k, double delta);

/// Applies one perturbation with fixed lambda and delta and measures every
/// estimate. Does not decide acceptance beyond filling the pass flags.
StepResult corrugate(const SampledCurve& curve, const ScalarField& k, const StepParams& params,
                     const ProfileEvaluator& profile);
/// corrugate with params.kernel forced to NashTwist (n >= 4 only).
StepResult nash_twist_corrugate(const SampledCurve& curve, const ScalarField& k, const StepParams& params,
                                const ProfileEvaluator& profile);

struct StepOptions {
  double delta_max = 0.5;
  /// When positive, delta is also limited so the step alone can reach this
  /// defect; falls back to the budget rule when no lambda qualifies.
  double target_defect = 0.0;
  long long min_oscillations = 4;
  double lambda_cap_numerator = 1048576.0;  // lambda <= 2^20 / length
  Index max_samples = Index(1) << 22;
  int samples_per_oscillation = 32;
  Execution exec = Execution::Parallel;
};

/// Chooses delta and searches lambda = m 2pi / length, m = m0 2^j, until the
/// estimates hold. Throws StepFailure with the last report otherwise.
StepResult perform_step(const SampledCurve& curve, const ScalarField& k, double epsilon_i, Kernel kernel,
                        const ProfileEvaluator& profile, const StepOptions& options = {});

/// sup |k^2 - k_gamma^2| and min (k^2 - k_gamma^2) at the nodes.
struct DefectSummary {
  double sup = 0.0;
  double min_gap = 0.0;
  double min_curvature = 0.0;
  double max_ratio = 0.0;  // max k_gamma / k
};
DefectSummary defect_summary(const SampledCurve& curve, const ScalarField& k);

/// Number of - to + sign changes (cyclic for closed curves) of the
/// displacement next - base along the second normal of base, sampled on the
/// grid of next.
int corrugation_count(const SampledCurve& base, const SampledCurve& next);

/// The six corrugated unit circles with a = sqrt(8) (k = 3, delta = 0) and
/// lambda = 1..6, each on `samples` nodes.
std::vector<SampledCurve> figure1_family(const ProfileEvaluator& profile, Index samples = 1024);

}  // namespace corrugate
