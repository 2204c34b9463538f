#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "corrugate/embedding.hpp"
#include "corrugate/step.hpp"

namespace corrugate {

struct RunConfig {
  double epsilon = 0.2;         // total C^1 budget
  double target_defect = 1e-3;  // stop once sup |k^2 - k_gamma^2| is below this
  int max_steps = 20;
  double schedule_ratio = 0.5;
  Kernel kernel = Kernel::KuiperStrain;
  std::uint64_t random_seed = 1;
  /// Fraction of epsilon the curvature-zero removal may spend (in C^2).
  double preprocessing_fraction = 0.1;
  /// Re-verify embeddedness of each iterate when gamma0 is embedded.
  bool check_embedding = true;
  int homotopy_samples = 11;
  StepOptions step;
  /// Called with (step index, curve) after every accepted step; index 0 is
  /// the preprocessed start curve.
  std::function<void(int, const SampledCurve&)> on_iterate;
};

/// eps_i = epsilon (1 - ratio) ratio^{i-1}, i = 1..max_steps.
std::vector<double> defect_schedule(double epsilon, double ratio, int max_steps);

struct CauchyEntry {
  int step = 0;
  double c1_distance = 0.0;
  double c2_distance = 0.0;   // sup |gamma_i'' - gamma_{i-1}''|
  double c2_norm = 0.0;       // sum over orders 0..2
  double partial_sum = 0.0;   // of c2_norm
  double bound = 0.0;         // sum eps + C (|gamma0'| + eps)^2 (sqrt D0 + sum sqrt eps_{l-1})
};

struct IterateFlags {
  int step = 0;
  bool immersed = false;
  bool embedded = false;
  bool closed = false;
  double min_separation = 0.0;
  double defect = 0.0;
};

struct HomotopySample {
  double s = 0.0;
  double c1_distance = 0.0;
  bool immersed = false;
  bool embedded = false;
};

struct RunReport {
  std::vector<StepReport> steps;
  std::vector<CauchyEntry> cauchy_table;
  std::vector<IterateFlags> iterates;
  std::vector<HomotopySample> homotopy;
  std::vector<double> schedule;
  bool preprocessed = false;
  double preprocessing_c2_change = 0.0;
  double preprocessing_c1_change = 0.0;
  double initial_defect = 0.0;
  double final_defect = 0.0;
  double final_c1_distance = 0.0;
  double final_min_curvature = 0.0;
  double final_max_curvature = 0.0;
  double corrugation_constant = 0.0;
  bool input_embedded = false;
  bool converged = false;
  bool cauchy_within_bound = true;
};

struct RunResult {
  SampledCurve curve;
  RunReport report;
};

class IsotopyUncertified : public Error {
 public:
  IsotopyUncertified(const std::string& what, RunReport partial)
      : Error(ErrorKind::IsotopyUncertified, what), partial_(std::move(partial)) {}
  const RunReport& partial_report() const { return partial_; }

 private:
  RunReport partial_;
};

/// Output curve has min curvature above the threshold on the grid, keeps
/// k > k_gamma, and differs from the input by less than `budget` in C^2.
/// Unchanged input when its curvature is already above the threshold.
SampledCurve remove_curvature_zeros(const SampledCurve& curve, const ScalarField& k, double budget,
                                    std::uint64_t seed = 1, double* c2_change = nullptr);

RunResult run(const SampledCurve& gamma0, const ScalarField& k, const RunConfig& config,
              const ProfileEvaluator& profile);

/// (1 - s) gamma0 + s gamma_tilde on the finer of the two grids.
SampledCurve homotopy(const SampledCurve& gamma0, const SampledCurve& gamma_tilde, double s);

struct KnotResult {
  SampledCurve curve;
  SampledCurve scaled_input;
  double scale_factor = 1.0;
  RunReport report;
};

/// Scales the knot by c = max k_knot / (0.9 min k) and runs; the embedding
/// is re-checked along the way.
KnotResult prescribe_knot_curvature(const SampledCurve& knot, const ScalarField& k, const RunConfig& config,
                                    const ProfileEvaluator& profile);

}  // namespace corrugate
