#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corrugate/curve_io.hpp"
#include "corrugate/embedding.hpp"
#include "corrugate/errors.hpp"
#include "corrugate/expression.hpp"
#include "corrugate/iteration.hpp"
#include "corrugate/parallel.hpp"
#include "corrugate/presets.hpp"
#include "corrugate/report_json.hpp"
#include "corrugate/step.hpp"
#include "corrugate/verify.hpp"

namespace fs = std::filesystem;
using namespace corrugate;

namespace {

struct CurveSource {
  std::string input;
  std::string preset = "circle";
  std::vector<double> params;
  Index samples = 1024;
  int dimension = 3;

  void add_options(CLI::App* app, const std::string& default_preset, Index default_samples) {
    preset = default_preset;
    samples = default_samples;
    app->add_option("--input", input, "Curve CSV (with JSON sidecar)");
    app->add_option("--preset", preset, "Preset curve name")->capture_default_str();
    app->add_option("--params", params, "Preset parameters, in order");
    app->add_option("--samples", samples, "Preset sample count")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--dim", dimension, "Ambient dimension for presets")->capture_default_str()->check(CLI::Range(3, 16));
  }

  SampledCurve load() const {
    if (!input.empty()) {
      SampledCurve c = io::read_curve_csv(input);
      return dimension > c.dimension() ? presets::embed(c, dimension) : c;
    }
    return presets::make(preset, params, samples, dimension);
  }
};

// A constant, an expression in t, or a CSV file with columns t,value.
ScalarField load_field(const std::string& text, const SampledCurve& curve) {
  if (text.size() > 4 && text.substr(text.size() - 4) == ".csv")
    return io::read_scalar_csv(text, curve.domain_end(), curve.closed());
  return scalar_field_from_text(text);
}

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void print_report(const VerificationReport& r) {
  for (const auto& c : r.checks)
    std::printf("%-32s %-4s measured %.6e bound %.6e tol %.1e grid %ld\n", c.name.c_str(), c.pass ? "ok" : "FAIL",
                c.measured, c.bound, c.tolerance, static_cast<long>(c.grid));
  std::printf("%s\n", r.all_pass() ? "all checks pass" : "some checks FAILED");
}

void print_run(const RunReport& r) {
  std::printf("steps %zu  converged %s  initial defect %.6e  final defect %.6e\n", r.steps.size(),
              r.converged ? "yes" : "no", r.initial_defect, r.final_defect);
  std::printf("C1 distance to input %.6e  curvature in [%.9f, %.9f]  C = %.6f\n", r.final_c1_distance,
              r.final_min_curvature, r.final_max_curvature, r.corrugation_constant);
  for (const auto& s : r.steps)
    std::printf("  lambda %.6g  delta %.4g  samples %ld  eps_i %.3e  defect %.3e -> %.3e  c1 %.3e  c2 %.3e <= %.3e\n",
                s.lambda_used, s.delta_used, static_cast<long>(s.samples), s.epsilon_i, s.defect_before, s.defect_after,
                s.c1_displacement, s.c2_displacement, s.c2_bound);
}

struct RunOptions {
  std::string k = "3";
  std::string config_path;
  std::string out, report, dump_dir;
  double epsilon = 0.0, target_defect = 0.0;
  int max_steps = 0;
  std::string kernel;
  std::uint64_t seed = 0;

  void add_options(CLI::App* app, const std::string& default_k) {
    k = default_k;
    app->add_option("--k", k, "Target curvature: constant, expression in t, or CSV")->capture_default_str();
    app->add_option("--config", config_path, "RunConfig JSON");
    app->add_option("--epsilon", epsilon, "Total C1 budget")->check(CLI::PositiveNumber);
    app->add_option("--target-defect", target_defect, "Stop when sup |k^2 - k_gamma^2| is below this")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-steps", max_steps, "Safety cap on steps")->check(CLI::PositiveNumber);
    app->add_option("--kernel", kernel, "kuiper-strain or nash-twist");
    app->add_option("--seed", seed, "Random seed for preprocessing");
    app->add_option("--out", out, "Output curve CSV");
    app->add_option("--report", report, "RunReport JSON");
    app->add_option("--dump-dir", dump_dir, "Write every iterate as a numbered CSV");
  }

  RunConfig config(const std::string& default_target) const {
    RunConfig c;
    if (!default_target.empty()) c.target_defect = std::stod(default_target);
    if (!config_path.empty()) apply_config_json(read_json(config_path), c);
    if (epsilon > 0.0) c.epsilon = epsilon;
    if (target_defect > 0.0) c.target_defect = target_defect;
    if (max_steps > 0) c.max_steps = max_steps;
    if (!kernel.empty()) c.kernel = kernel_from_string(kernel);
    if (seed > 0) c.random_seed = seed;
    if (!dump_dir.empty()) {
      fs::create_directories(dump_dir);
      const std::string dir = dump_dir;
      c.on_iterate = [dir](int i, const SampledCurve& curve) {
        char name[32];
        std::snprintf(name, sizeof name, "iterate_%03d.csv", i);
        io::write_curve_csv((fs::path(dir) / name).string(), curve);
      };
    }
    return c;
  }
};

int cmd_profile_table(const std::string& out, double s_max, int s_count, int t_count) {
  ProfileEvaluator profile;
  io::write_profile_table(out, profile, s_max, s_count, t_count);
  std::printf("wrote %s (%d x %d), C = %.6f, mu = %.15f\n", out.c_str(), s_count, t_count,
              profile.corrugation_constant(), profile.mu());
  return 0;
}

int emit_figure1(const std::string& dir, Index samples) {
  fs::create_directories(dir);
  ProfileEvaluator profile;
  const SampledCurve circle = presets::circle(1.0, samples, 3);
  const auto family = figure1_family(profile, samples);
  std::ostringstream gp;
  gp << "# top view of the corrugated unit circles, a = sqrt(8)\n"
     << "set terminal pngcairo size 1500,1000\n"
     << "set output 'figure1.png'\n"
     << "set datafile separator ','\n"
     << "set multiplot layout 2,3\n"
     << "set size ratio -1\n"
     << "unset key\n";
  for (std::size_t i = 0; i < family.size(); ++i) {
    const int lambda = static_cast<int>(i) + 1;
    const std::string name = "figure1_lambda" + std::to_string(lambda) + ".csv";
    io::write_curve_csv((fs::path(dir) / name).string(), family[i], false);
    std::printf("%s  closed %s  corrugations %d\n", name.c_str(), is_closed(family[i]) ? "yes" : "no",
                corrugation_count(circle, family[i]));
    gp << "set title 'lambda = " << lambda << "'\n"
       << "plot '" << name << "' every ::1 using 2:3 with lines lw 2\n";
  }
  gp << "unset multiplot\n";
  std::ofstream script(fs::path(dir) / "figure1.gp");
  if (!script) throw IoError("cannot write figure1.gp in " + dir);
  script << gp.str();
  std::printf("wrote %s/figure1.gp\n", dir.c_str());
  return 0;
}

// the report must not clobber the curve's sidecar
void check_outputs(const std::string& out, const std::string& report) {
  if (!out.empty() && !report.empty() && fs::path(report) == fs::path(io::sidecar_path(out)))
    throw ConfigError("--report " + report + " is the sidecar of --out; pick another name");
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Precondition:
    case ErrorKind::Domain:
    case ErrorKind::Config:
    case ErrorKind::Io: return 1;
    default: return 2;
  }
}

void report_error(bool as_json, const std::string& kind, const std::string& message, const Json& extra = {}) {
  if (as_json) {
    Json j{{"error", {{"kind", kind}, {"message", message}}}};
    if (!extra.is_null()) j["error"]["report"] = extra;
    std::cerr << j.dump() << '\n';
  } else {
    std::cerr << "error (" << kind << "): " << message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  CLI::App app{"corrugate: prescribed-curvature curves by convex integration"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors, "Print errors as JSON on stderr");

  // profile-table
  auto* profile_cmd = app.add_subcommand("profile-table", "Tabulate Psi and its t-derivatives");
  std::string profile_out = "profile.csv";
  double profile_s_max = 10.0;
  int profile_s_count = 201, profile_t_count = 64;
  profile_cmd->add_option("--out", profile_out)->capture_default_str();
  profile_cmd->add_option("--s-max", profile_s_max)->capture_default_str()->check(CLI::PositiveNumber);
  profile_cmd->add_option("--s-count", profile_s_count)->capture_default_str()->check(CLI::Range(2, 100000));
  profile_cmd->add_option("--t-count", profile_t_count)->capture_default_str()->check(CLI::Range(1, 100000));

  // step
  auto* step_cmd = app.add_subcommand("step", "One corrugation step");
  CurveSource step_src;
  step_src.add_options(step_cmd, "circle", 1024);
  std::string step_k = "2", step_kernel = "kuiper-strain", step_out, step_report;
  double step_delta = -1.0, step_lambda = 0.0, step_eps = 1.0;
  step_cmd->add_option("--k", step_k, "Target curvature")->capture_default_str();
  step_cmd->add_option("--delta", step_delta, "Fixed delta (requires --lambda)");
  step_cmd->add_option("--lambda", step_lambda, "Fixed frequency; otherwise searched");
  step_cmd->add_option("--epsilon-i", step_eps, "Step budget")->capture_default_str()->check(CLI::PositiveNumber);
  step_cmd->add_option("--kernel", step_kernel)->capture_default_str();
  step_cmd->add_option("--out", step_out, "Output curve CSV");
  step_cmd->add_option("--report", step_report, "StepReport JSON");

  // run
  auto* run_cmd = app.add_subcommand("run", "Iterate steps until the defect target is met");
  CurveSource run_src;
  run_src.add_options(run_cmd, "circle", 16384);
  RunOptions run_opts;
  run_opts.add_options(run_cmd, "3");

  // knot
  auto* knot_cmd = app.add_subcommand("knot", "Constant-curvature knot in the isotopy class of the input");
  CurveSource knot_src;
  knot_src.add_options(knot_cmd, "trefoil", 4096);
  RunOptions knot_opts;
  knot_opts.add_options(knot_cmd, "1");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Independent checks");
  std::string verify_what = "profile", verify_prev, verify_next, verify_curve, verify_k = "1", verify_report;
  double verify_eps = 1.0;
  int verify_windows = 10, verify_refinement = 4;
  std::uint64_t verify_seed = 1;
  verify_cmd->add_option("what", verify_what, "profile | step | necessity | embedding")
      ->check(CLI::IsMember({"profile", "step", "necessity", "embedding"}))
      ->capture_default_str();
  verify_cmd->add_option("--prev", verify_prev, "Curve before the step");
  verify_cmd->add_option("--next", verify_next, "Curve after the step");
  verify_cmd->add_option("--curve", verify_curve, "Curve for necessity / embedding checks");
  verify_cmd->add_option("--k", verify_k, "Target curvature")->capture_default_str();
  verify_cmd->add_option("--epsilon-i", verify_eps, "Step budget")->capture_default_str();
  verify_cmd->add_option("--windows", verify_windows)->capture_default_str()->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed)->capture_default_str();
  verify_cmd->add_option("--refinement", verify_refinement)->capture_default_str()->check(CLI::Range(1, 16));
  verify_cmd->add_option("--report", verify_report, "VerificationReport JSON");

  // figure1
  auto* fig_cmd = app.add_subcommand("figure1", "Six corrugated circles (a = sqrt(8), lambda = 1..6) and a gnuplot script");
  std::string fig_dir = "figure1";
  Index fig_samples = 1024;
  fig_cmd->add_option("--out-dir", fig_dir)->capture_default_str();
  fig_cmd->add_option("--samples", fig_samples)->capture_default_str()->check(CLI::Range(64, 1 << 20));

  // export
  auto* export_cmd = app.add_subcommand("export", "Write a curve as CSV (+ sidecar) or OBJ");
  CurveSource export_src;
  export_src.add_options(export_cmd, "circle", 1024);
  std::string export_format = "csv", export_out;
  bool export_positions_only = false;
  export_cmd->add_option("--format", export_format)->check(CLI::IsMember({"csv", "obj"}))->capture_default_str();
  export_cmd->add_option("--out", export_out)->required();
  export_cmd->add_flag("--positions-only", export_positions_only, "CSV without derivative columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (json_errors) {
      report_error(true, "usage", e.what());
      return 1;
    }
    app.exit(e);
    return 1;
  }

  try {
    if (*profile_cmd) return cmd_profile_table(profile_out, profile_s_max, profile_s_count, profile_t_count);

    if (*step_cmd) {
      check_outputs(step_out, step_report);
      ProfileEvaluator profile;
      const SampledCurve curve = step_src.load();
      const ScalarField k = load_field(step_k, curve);
      const Kernel kernel = kernel_from_string(step_kernel);
      StepResult result;
      if (step_lambda > 0.0) {
        StepParams p;
        p.delta = step_delta >= 0.0 ? step_delta : 0.1;
        p.lambda = step_lambda;
        p.kernel = kernel;
        p.epsilon_i = step_eps;
        result = corrugate::corrugate(curve, k, p, profile);
      } else {
        if (step_delta >= 0.0) throw ConfigError("--delta needs --lambda");
        result = perform_step(curve, k, step_eps, kernel, profile);
      }
      const auto& r = result.report;
      std::printf("lambda %.6g  delta %.4g  samples %ld  defect %.6e -> %.6e  c1 %.3e  c2 %.3e (bound %.3e)\n",
                  r.lambda_used, r.delta_used, static_cast<long>(r.samples), r.defect_before, r.defect_after,
                  r.c1_displacement, r.c2_displacement, r.c2_bound);
      std::printf("estimates %s\n", r.estimates_pass() ? "pass" : "FAIL");
      if (!step_out.empty()) io::write_curve_csv(step_out, result.curve);
      write_json(step_report, to_json(r));
      return 0;
    }

    if (*run_cmd) {
      check_outputs(run_opts.out, run_opts.report);
      ProfileEvaluator profile;
      const SampledCurve curve = run_src.load();
      const ScalarField k = load_field(run_opts.k, curve);
      const RunResult result = run(curve, k, run_opts.config(""), profile);
      print_run(result.report);
      if (!run_opts.out.empty()) io::write_curve_csv(run_opts.out, result.curve);
      write_json(run_opts.report, to_json(result.report));
      return 0;
    }

    if (*knot_cmd) {
      check_outputs(knot_opts.out, knot_opts.report);
      ProfileEvaluator profile;
      const SampledCurve curve = knot_src.load();
      const ScalarField k = load_field(knot_opts.k, curve);
      const KnotResult result = prescribe_knot_curvature(curve, k, knot_opts.config("1e-2"), profile);
      std::printf("scale factor %.6f\n", result.scale_factor);
      print_run(result.report);
      const EmbeddingReport emb = embedding_report(result.curve);
      std::printf("closed %s  embedded %s  min separation %.3e\n", is_closed(result.curve, 1e-8) ? "yes" : "no",
                  emb.embedded ? "yes" : "no", emb.min_separation);
      if (!knot_opts.out.empty()) io::write_curve_csv(knot_opts.out, result.curve);
      Json j = to_json(result.report);
      j["scale_factor"] = result.scale_factor;
      j["embedding"] = to_json(emb);
      write_json(knot_opts.report, j);
      return 0;
    }

    if (*verify_cmd) {
      VerificationReport report;
      Json extra;
      if (verify_what == "profile") {
        ProfileEvaluator profile;
        std::vector<double> s_grid, t_grid;
        for (int i = 0; i < 200; ++i) s_grid.push_back(-50.0 + 100.0 * i / 199.0);
        for (int j = 0; j < 512; ++j) t_grid.push_back(2.0 * 3.14159265358979323846 * j / 512.0);
        report = check_profile(profile, s_grid, t_grid);
      } else if (verify_what == "step") {
        if (verify_prev.empty() || verify_next.empty()) throw ConfigError("verify step needs --prev and --next");
        ProfileEvaluator profile;
        const SampledCurve prev = io::read_curve_csv(verify_prev);
        const SampledCurve next = io::read_curve_csv(verify_next);
        StepCheckOptions opts;
        opts.refinement = verify_refinement;
        report = check_step(prev, next, load_field(verify_k, prev), verify_eps, profile.corrugation_constant(), opts);
      } else if (verify_what == "necessity") {
        if (verify_curve.empty()) throw ConfigError("verify necessity needs --curve");
        const SampledCurve curve = io::read_curve_csv(verify_curve);
        report = check_necessity({curve}, curve, load_field(verify_k, curve),
                                 random_windows(curve.domain_end(), verify_windows, verify_seed));
      } else {
        if (verify_curve.empty()) throw ConfigError("verify embedding needs --curve");
        const EmbeddingReport emb = embedding_report(io::read_curve_csv(verify_curve));
        extra = to_json(emb);
        Check immersed{"immersed", emb.immersed ? 1.0 : 0.0, 1.0, 0.0, emb.immersed, emb.segments, ""};
        Check embedded{"embedded", emb.min_separation, emb.clearance + 2.0 * emb.polyline_deviation, 0.0, emb.embedded,
                       emb.segments, "min separation above clearance"};
        report.checks = {immersed, embedded};
      }
      print_report(report);
      Json j = to_json(report);
      if (!extra.is_null()) j["embedding"] = extra;
      write_json(verify_report, j);
      return report.all_pass() ? 0 : 2;
    }

    if (*fig_cmd) return emit_figure1(fig_dir, fig_samples);

    if (*export_cmd) {
      const SampledCurve curve = export_src.load();
      if (export_format == "obj") io::write_obj(export_out, curve);
      else io::write_curve_csv(export_out, curve, !export_positions_only);
      std::printf("wrote %s\n", export_out.c_str());
      return 0;
    }
  } catch (const StepFailure& e) {
    report_error(json_errors, to_string(e.kind()), e.what(), to_json(e.partial_report()));
    return 2;
  } catch (const IsotopyUncertified& e) {
    report_error(json_errors, to_string(e.kind()), e.what(), to_json(e.partial_report()));
    return 2;
  } catch (const Error& e) {
    report_error(json_errors, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error(json_errors, "internal", e.what());
    return 2;
  }
  return 0;
}
