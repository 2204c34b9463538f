#include "corrugate/report_json.hpp"

#include <cmath>

#include "corrugate/errors.hpp"

namespace corrugate {

namespace {

// JSON has no infinities; report them as null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const StepReport& r) {
  return Json{{"kernel", to_string(r.kernel)},
              {"lambda", num(r.lambda_used)},
              {"delta", num(r.delta_used)},
              {"oscillations", r.oscillations},
              {"samples", r.samples},
              {"trials", r.trials},
              {"epsilon_i", num(r.epsilon_i)},
              {"defect_before", num(r.defect_before)},
              {"defect_after", num(r.defect_after)},
              {"min_gap_before", num(r.min_gap_before)},
              {"min_curvature_after", num(r.min_curvature_after)},
              {"max_curvature_ratio_after", num(r.max_curvature_ratio_after)},
              {"c0_displacement", num(r.c0_displacement)},
              {"c1_displacement", num(r.c1_displacement)},
              {"c2_displacement", num(r.c2_displacement)},
              {"speed_sup_before", num(r.speed_sup_before)},
              {"c2_bound", num(r.c2_bound)},
              {"corrugation_constant", num(r.corrugation_constant)},
              {"max_amplitude", num(r.max_amplitude)},
              {"min_speed_before", num(r.min_speed_before)},
              {"min_speed_after", num(r.min_speed_after)},
              {"closure_mismatch", num(r.closure_mismatch)},
              {"pass",
               {{"c1", r.pass_c1}, {"c2", r.pass_c2}, {"defect", r.pass_defect}, {"sandwich", r.pass_sandwich}}}};
}

Json to_json(const RunReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  Json cauchy = Json::array();
  for (const auto& c : r.cauchy_table)
    cauchy.push_back({{"step", c.step},
                      {"c1_distance", num(c.c1_distance)},
                      {"c2_distance", num(c.c2_distance)},
                      {"c2_norm", num(c.c2_norm)},
                      {"partial_sum", num(c.partial_sum)},
                      {"bound", num(c.bound)}});
  Json iterates = Json::array();
  for (const auto& f : r.iterates)
    iterates.push_back({{"step", f.step},
                        {"immersed", f.immersed},
                        {"embedded", f.embedded},
                        {"closed", f.closed},
                        {"min_separation", num(f.min_separation)},
                        {"defect", num(f.defect)}});
  Json homotopy = Json::array();
  for (const auto& h : r.homotopy)
    homotopy.push_back(
        {{"s", h.s}, {"c1_distance", num(h.c1_distance)}, {"immersed", h.immersed}, {"embedded", h.embedded}});
  Json schedule = Json::array();
  for (double e : r.schedule) schedule.push_back(num(e));
  return Json{{"converged", r.converged},
              {"steps", steps},
              {"cauchy", cauchy},
              {"cauchy_within_bound", r.cauchy_within_bound},
              {"iterates", iterates},
              {"homotopy", homotopy},
              {"schedule", schedule},
              {"preprocessed", r.preprocessed},
              {"preprocessing_c2_change", num(r.preprocessing_c2_change)},
              {"preprocessing_c1_change", num(r.preprocessing_c1_change)},
              {"initial_defect", num(r.initial_defect)},
              {"final_defect", num(r.final_defect)},
              {"final_c1_distance", num(r.final_c1_distance)},
              {"final_min_curvature", num(r.final_min_curvature)},
              {"final_max_curvature", num(r.final_max_curvature)},
              {"corrugation_constant", num(r.corrugation_constant)},
              {"input_embedded", r.input_embedded}};
}

Json to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"measured", num(c.measured)},
                      {"bound", num(c.bound)},
                      {"tolerance", num(c.tolerance)},
                      {"pass", c.pass},
                      {"grid", c.grid},
                      {"detail", c.detail}});
  return Json{{"all_pass", r.all_pass()}, {"checks", checks}};
}

Json to_json(const EmbeddingReport& r) {
  return Json{{"immersed", r.immersed},
              {"embedded", r.embedded},
              {"length", num(r.length)},
              {"clearance", num(r.clearance)},
              {"min_separation", num(r.min_separation)},
              {"search_radius", num(r.search_radius)},
              {"polyline_deviation", num(r.polyline_deviation)},
              {"segments", r.segments}};
}

void apply_config_json(const Json& j, RunConfig& config) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "epsilon") config.epsilon = value.get<double>();
      else if (key == "target_defect") config.target_defect = value.get<double>();
      else if (key == "max_steps") config.max_steps = value.get<int>();
      else if (key == "schedule_ratio") config.schedule_ratio = value.get<double>();
      else if (key == "kernel") config.kernel = kernel_from_string(value.get<std::string>());
      else if (key == "random_seed") config.random_seed = value.get<std::uint64_t>();
      else if (key == "preprocessing_fraction") config.preprocessing_fraction = value.get<double>();
      else if (key == "check_embedding") config.check_embedding = value.get<bool>();
      else if (key == "homotopy_samples") config.homotopy_samples = value.get<int>();
      else if (key == "step") {
        if (!value.is_object()) throw ConfigError("config key 'step' must be an object");
        for (const auto& [sk, sv] : value.items()) {
          if (sk == "delta_max") config.step.delta_max = sv.get<double>();
          else if (sk == "min_oscillations") config.step.min_oscillations = sv.get<long long>();
          else if (sk == "lambda_cap_numerator") config.step.lambda_cap_numerator = sv.get<double>();
          else if (sk == "max_samples") config.step.max_samples = sv.get<Index>();
          else if (sk == "samples_per_oscillation") config.step.samples_per_oscillation = sv.get<int>();
          else throw ConfigError("unknown config key 'step." + sk + "'");
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(config.target_defect > 0.0)) throw ConfigError("target_defect must be positive");
  if (!(config.schedule_ratio > 0.0 && config.schedule_ratio < 1.0))
    throw ConfigError("schedule_ratio must lie in (0, 1)");
  if (config.max_steps < 1) throw ConfigError("max_steps must be at least 1");
}

}  // namespace corrugate
