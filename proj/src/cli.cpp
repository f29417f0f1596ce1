#include "projsys/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "projsys/analysis.hpp"
#include "projsys/core.hpp"
#include "projsys/dynamics.hpp"
#include "projsys/io.hpp"
#include "projsys/kernels.hpp"
#include "projsys/reduce.hpp"

namespace projsys::cli {

namespace {

using io::json;

struct RunConfig {
  std::size_t steps = kDefaultSteps;
  double tol = kDefaultTolerance;
  std::size_t window = kDefaultWindow;
  std::size_t pivot = 0;  // 0: last variable
  double conjugacy_tol = 1e-9;
  std::string out = "-";
  std::vector<double> x0;
};

// Agreement threshold for the simulation cross-checks printed by `analyze`.
constexpr double kAgreementTol = 1e-6;

class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw io::FormatError(path, "cannot open file for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  bool is_file() const { return file_.is_open(); }
  void finish() {
    stream_->flush();
    if (!*stream_) throw io::FormatError("output", "write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

const char* matched_condition(ProjectivityClass cls) {
  switch (cls) {
    case ProjectivityClass::Homogeneous: return "alpha = 0 and A = 0";
    case ProjectivityClass::LinearType:
      return "alpha = 0, all A_i equal, all denominator rows of B identical";
    case ProjectivityClass::HyperbolicType:
      return "A = 0, all alpha_i equal, all numerator rows of beta identical";
    case ProjectivityClass::NonProjective: return "none of the three projective patterns";
  }
  return "";
}

io::SpecFile load_original(const std::string& path) {
  auto file = io::load_system(path);
  if (!std::holds_alternative<io::SpecFile>(file)) {
    throw io::FormatError("kind", "expected an original system, got a reduced system file");
  }
  auto spec_file = std::get<io::SpecFile>(std::move(file));
  auto report = validate(spec_file.spec);
  if (!report.ok()) {
    throw io::FormatError(report.issues.front().field, report.summary());
  }
  return spec_file;
}

int cmd_classify(const std::string& path, std::ostream& out) {
  const auto file = load_original(path);
  const auto cls = classify(file.spec);
  out << to_string(cls) << '\n';
  out << "condition: " << matched_condition(cls) << '\n';
  return is_projective(cls) ? kOk : kNonProjective;
}

int cmd_reduce(const std::string& path, std::size_t pivot, const std::string& out_path,
               std::ostream& out) {
  const auto file = load_original(path);
  if (file.spec.k < 2) throw DimensionTooSmall();
  if (pivot == 0) pivot = file.spec.k;
  const auto red = reduce(file.spec, pivot);
  out << "kind: " << to_string(red.kind) << '\n' << "pivot: " << red.pivot << '\n';
  out << to_string(red);
  if (!out_path.empty()) {
    io::ReducedFile reduced{red, std::nullopt};
    if (file.x0) reduced.x0 = project(*file.x0, pivot);
    io::write_json(out_path, io::to_json(reduced));
  }
  return kOk;
}

LimitReport safe_detect(const Orbit& orbit, const RunConfig& cfg, std::string& note) {
  try {
    return detect_limit(orbit, cfg.tol, cfg.window);
  } catch (const InsufficientData& e) {
    note = e.what();
    return LimitReport{Undecided{}, orbit.states.empty() ? 0 : orbit.states.size() - 1, cfg.tol};
  }
}

int cmd_simulate(const std::string& path, RunConfig cfg, std::ostream& out, std::ostream& err) {
  const auto file = io::load_system(path);
  Orbit orbit;
  json report;
  if (const auto* spec_file = std::get_if<io::SpecFile>(&file)) {
    auto vr = validate(spec_file->spec);
    if (!vr.ok()) throw io::FormatError(vr.issues.front().field, vr.summary());
    State x0 = cfg.x0.empty() ? spec_file->x0.value_or(State{}) : State(cfg.x0);
    if (x0.empty()) throw io::FormatError("x0", "initial condition required (--x0 or in file)");
    orbit = iterate(spec_file->spec, x0, cfg.steps);
    const auto cls = classify(spec_file->spec);
    report["class"] = to_string(cls);
    if (is_projective(cls) && spec_file->spec.k > 1) {
      const std::size_t pivot = cfg.pivot == 0 ? spec_file->spec.k : cfg.pivot;
      report["conjugacy"] = io::to_json(
          check_conjugacy(spec_file->spec, x0, pivot, cfg.steps, cfg.conjugacy_tol));
      report["conjugacy"]["pivot"] = pivot;
    }
  } else {
    const auto& reduced = std::get<io::ReducedFile>(file);
    State u0 = cfg.x0.empty() ? reduced.x0.value_or(State{}) : State(cfg.x0);
    if (u0.empty()) throw io::FormatError("x0", "initial condition required (--x0 or in file)");
    orbit = iterate(reduced.system, u0, cfg.steps);
    report["class"] = to_string(reduced.system.kind);
  }

  OutputSink csv(cfg.out, out);
  write_orbit_csv(csv.get(), orbit);
  csv.finish();

  std::string note;
  report["limit"] = io::to_json(safe_detect(orbit, cfg, note));
  if (!note.empty()) report["limit"]["note"] = note;
  if (orbit.breakdown) report["breakdown"] = io::to_json(*orbit.breakdown);
  (csv.is_file() ? out : err) << report.dump(2) << '\n';
  return kOk;
}

double max_relative_error(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_difference(a[i], b[i]));
  return worst;
}

void emit(const json& j, bool as_json, std::ostream& out) {
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << io::to_key_value(j);
  }
}

int cmd_ex2(const Example2Params& p, const RunConfig& cfg, bool as_json, std::ostream& out) {
  const auto limits = example2_limits(p);
  json j = io::to_json(p, limits);
  if (!cfg.x0.empty()) {
    const auto orbit = iterate(example2_system(p), cfg.x0, cfg.steps);
    std::string note;
    const auto report = safe_detect(orbit, cfg, note);
    json check = {{"behavior", behavior_name(report.behavior)}};
    if (const auto* point = std::get_if<ConvergedPoint>(&report.behavior)) {
      const double e = max_relative_error(point->limit, State{limits.x, limits.y, limits.z});
      check["max_rel_error"] = e;
      check["agrees"] = e < kAgreementTol;
    } else {
      check["agrees"] = false;
    }
    j["simulation"] = check;
  }
  emit(j, as_json, out);
  return kOk;
}

int cmd_ex3(const Example3Params& p, std::optional<double> w0, bool on_w1, const RunConfig& cfg,
            bool as_json, std::ostream& out) {
  const auto analysis = example3_analyze(p);
  json j = io::to_json(analysis);
  if (analysis.regime == Example3Case::DegenerateBoundary) {
    j["diagnosis"] =
        "P(w_m) vanishes: a single positive equilibrium, excluded by the root-count "
        "dichotomy; basins are not classifiable here";
    emit(j, as_json, out);
    return kDegenerate;
  }

  std::optional<State> x0;
  if (on_w1) {
    x0 = example3_state_on_w1(analysis);
  } else if (!cfg.x0.empty()) {
    x0 = State(cfg.x0);
  } else if (w0) {
    x0 = State{0.5 * *w0, 0.5 * *w0, 1.0};
  }
  if (x0) {
    const double w = example3_w(*x0);
    const auto basin = example3_basin(analysis, w);
    const auto limits = example3_limits(analysis, w);
    j["w0"] = w;
    j["basin"] = to_string(basin);
    j["limits"] = io::to_json(limits);

    const auto spec = example3_system(p);
    json check;
    if (basin == Example3Basin::AtW1) {
      // Constant from n = 1 on: one step lands on the triple, which is fixed.
      const State first = step(spec, *x0);
      const State second = step(spec, first);
      const State triple{limits.x, limits.y, *limits.z};
      const double e = std::max(max_relative_error(first, triple),
                                max_relative_error(second, triple));
      check = {{"behavior", "stationary from n=1"}, {"max_rel_error", e}, {"agrees", e < 1e-10}};
    } else {
      const auto orbit = iterate(spec, *x0, cfg.steps);
      std::string note;
      const auto report = safe_detect(orbit, cfg, note);
      check["behavior"] = behavior_name(report.behavior);
      if (basin == Example3Basin::ToZero) {
        const State& last = orbit.states.back();
        check["last_state"] = last;
        check["agrees"] = last[0] < 1e-6 && last[1] < 1e-6 && last[2] > 1e6;
      } else if (const auto* point = std::get_if<ConvergedPoint>(&report.behavior)) {
        const double e = max_relative_error(point->limit, State{limits.x, limits.y, *limits.z});
        check["max_rel_error"] = e;
        check["agrees"] = e < kAgreementTol;
      } else {
        check["agrees"] = false;
      }
      if (orbit.breakdown) check["breakdown"] = io::to_json(*orbit.breakdown);
    }
    j["simulation"] = check;
  }
  emit(j, as_json, out);
  return kOk;
}

int cmd_ex4(const Example4Params& p, const RunConfig& cfg, bool as_json, std::ostream& out) {
  const auto limits = example4_limits(p);
  json j = io::to_json(p, limits);
  j["prime_period"] = max_relative_error(limits.even, limits.odd) > 0.0 ? 2 : 1;
  if (!cfg.x0.empty()) {
    if (cfg.x0.size() != 2) throw io::FormatError("x0", "expected x0,y0 (z0 is --z0)");
    const State x0{cfg.x0[0], cfg.x0[1], p.z0};
    const auto orbit = iterate(example4_system(p), x0, cfg.steps);
    std::string note;
    const auto report = safe_detect(orbit, cfg, note);
    json check = {{"behavior", behavior_name(report.behavior)}};
    std::optional<double> e;
    if (const auto* p2 = std::get_if<ConvergedPeriod2>(&report.behavior)) {
      e = std::max(max_relative_error(p2->even, limits.even),
                   max_relative_error(p2->odd, limits.odd));
    } else if (const auto* point = std::get_if<ConvergedPoint>(&report.behavior)) {
      e = std::max(max_relative_error(point->limit, limits.even),
                   max_relative_error(point->limit, limits.odd));
    }
    if (e) check["max_rel_error"] = *e;
    check["agrees"] = e && *e < 1e-8;
    j["simulation"] = check;
  }
  emit(j, as_json, out);
  return kOk;
}

GridAxis parse_axis(const std::vector<double>& v, const std::string& name) {
  if (v.size() != 3 || v[2] < 1.0 || v[2] != std::floor(v[2])) {
    throw io::FormatError(name, "expected lo,hi,count with a positive integer count");
  }
  if (!(v[0] > 0.0) || !(v[1] >= v[0])) {
    throw io::FormatError(name, "expected 0 < lo <= hi");
  }
  return {v[0], v[1], static_cast<std::size_t>(v[2])};
}

int cmd_sweep(const Example3Grid& grid, int workers, const std::string& out_path,
              std::ostream& out) {
  const auto rows = sweep_example3(grid, workers);
  OutputSink sink(out_path, out);
  write_sweep_csv(sink.get(), rows);
  sink.finish();
  return kOk;
}

int cmd_example(const std::string& which, const std::vector<double>& params,
                const std::vector<double>& x0, const std::string& out_path, std::ostream& out) {
  io::SpecFile file;
  auto need = [&](std::size_t n, const char* names) {
    if (params.size() != n) {
      throw io::FormatError("params", std::string("expected ") + names);
    }
  };
  if (which == "ex2") {
    need(5, "C,A,D,beta,alpha");
    file.spec = example2_system({params[0], params[1], params[2], params[3], params[4]});
  } else if (which == "ex3") {
    need(3, "alpha,A1,A2");
    file.spec = example3_system({params[0], params[1], params[2]});
  } else if (which == "ex4") {
    need(4, "A,B,C,D");
    file.spec = example4_system({params[0], params[1], params[2], params[3], 1.0});
  } else {
    throw io::FormatError("example", "unknown example '" + which + "' (ex2, ex3 or ex4)");
  }
  file.labels = {"x", "y", "z"};
  if (!x0.empty()) {
    if (x0.size() != 3) throw io::FormatError("x0", "expected three positive entries");
    file.x0 = x0;
  }
  OutputSink sink(out_path, out);
  sink.get() << io::to_json(file).dump(2) << '\n';
  sink.finish();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify, reduce, simulate and analyze projective rational difference systems",
               "projsys"};
  app.require_subcommand(1);

  std::string spec_path;
  RunConfig cfg;

  auto* classify_cmd = app.add_subcommand("classify", "Report the projective class of a system");
  classify_cmd->add_option("spec", spec_path, "system spec file (JSON)")->required();

  std::string reduce_out;
  std::size_t pivot = 0;
  auto* reduce_cmd = app.add_subcommand("reduce", "Divide through by a pivot variable");
  reduce_cmd->add_option("spec", spec_path, "system spec file (JSON)")->required();
  reduce_cmd->add_option("--pivot", pivot, "1-based pivot index (default: k)");
  reduce_cmd->add_option("--out", reduce_out, "also write the reduced system to this file");

  auto* simulate_cmd = app.add_subcommand("simulate", "Iterate a system and report its limit");
  simulate_cmd->add_option("spec", spec_path, "system or reduced-system file (JSON)")->required();
  simulate_cmd->add_option("--x0", cfg.x0, "initial condition, comma separated")->delimiter(',');
  simulate_cmd->add_option("--steps", cfg.steps, "number of steps")->capture_default_str();
  simulate_cmd->add_option("--tol", cfg.tol, "convergence tolerance")->capture_default_str();
  simulate_cmd->add_option("--window", cfg.window, "convergence window")->capture_default_str();
  simulate_cmd->add_option("--pivot", cfg.pivot, "pivot for the conjugacy check (default: k)");
  simulate_cmd->add_option("--conj-tol", cfg.conjugacy_tol, "conjugacy tolerance")
      ->capture_default_str();
  simulate_cmd->add_option("--out", cfg.out, "orbit CSV path; '-' for stdout (report then goes "
                                             "to stderr)")
      ->capture_default_str();

  auto* analyze_cmd = app.add_subcommand("analyze", "Closed-form analysis of the worked examples");
  analyze_cmd->require_subcommand(1);
  bool as_json = false;
  analyze_cmd->add_flag("--json", as_json, "emit JSON instead of key = value lines");
  analyze_cmd->add_option("--steps", cfg.steps, "steps for the simulation cross-check")
      ->capture_default_str();

  Example2Params p2{};
  auto* ex2_cmd = analyze_cmd->add_subcommand("ex2", "x'=x/(Cy+Az), y'=x/(Dz), z'=x/(beta x+alpha z)");
  ex2_cmd->add_option("--C", p2.C)->required();
  ex2_cmd->add_option("--A", p2.A)->required();
  ex2_cmd->add_option("--D", p2.D)->required();
  ex2_cmd->add_option("--beta", p2.beta)->required();
  ex2_cmd->add_option("--alpha", p2.alpha)->required();
  ex2_cmd->add_option("--x0", cfg.x0, "x0,y0,z0 for a simulation cross-check")->delimiter(',');
  ex2_cmd->add_flag("--json", as_json);

  Example3Params p3{};
  std::optional<double> w0;
  bool on_w1 = false;
  auto* ex3_cmd = analyze_cmd->add_subcommand("ex3", "x'=(x+y)/(A1 z+x+y), y'=(x+y)/(A2 z+x+y), "
                                                     "z'=(alpha z+x+y)/(x+y)");
  ex3_cmd->add_option("--alpha", p3.alpha)->required();
  ex3_cmd->add_option("--A1", p3.A1)->required();
  ex3_cmd->add_option("--A2", p3.A2)->required();
  auto* w0_opt = ex3_cmd->add_option("--w0", w0, "initial ratio (x0+y0)/z0");
  auto* x0_opt = ex3_cmd->add_option("--x0", cfg.x0, "x0,y0,z0")->delimiter(',');
  auto* w1_flag = ex3_cmd->add_flag("--on-w1", on_w1, "start exactly on the boundary w1");
  w0_opt->excludes(x0_opt)->excludes(w1_flag);
  x0_opt->excludes(w1_flag);
  ex3_cmd->add_flag("--json", as_json);

  Example4Params p4{};
  auto* ex4_cmd = analyze_cmd->add_subcommand("ex4", "x'=1/(Az+By), y'=1/(Cz+Dx), z'=1/z");
  ex4_cmd->add_option("--A", p4.A)->required();
  ex4_cmd->add_option("--B", p4.B)->required();
  ex4_cmd->add_option("--C", p4.C)->required();
  ex4_cmd->add_option("--D", p4.D)->required();
  ex4_cmd->add_option("--z0", p4.z0)->required();
  ex4_cmd->add_option("--x0", cfg.x0, "x0,y0 for a simulation cross-check")->delimiter(',');
  ex4_cmd->add_flag("--json", as_json);

  std::vector<double> ax_alpha, ax_A1, ax_A2;
  int workers = 0;
  std::string sweep_out = "-";
  auto* sweep_cmd = app.add_subcommand("sweep", "Classify Example 3 over a parameter grid");
  sweep_cmd->add_option("--alpha", ax_alpha, "lo,hi,count")->delimiter(',')->required();
  sweep_cmd->add_option("--A1", ax_A1, "lo,hi,count")->delimiter(',')->required();
  sweep_cmd->add_option("--A2", ax_A2, "lo,hi,count")->delimiter(',')->required();
  sweep_cmd->add_option("--workers", workers, "worker threads (default: OpenMP default)");
  sweep_cmd->add_option("--out", sweep_out, "CSV path or '-'")->capture_default_str();

  std::string which;
  std::vector<double> example_params;
  std::string example_out = "-";
  auto* example_cmd = app.add_subcommand("example", "Write the spec file of a worked example");
  example_cmd->add_option("which", which, "ex2, ex3 or ex4")->required();
  example_cmd->add_option("--params", example_params,
                          "ex2: C,A,D,beta,alpha  ex3: alpha,A1,A2  ex4: A,B,C,D")
      ->delimiter(',')
      ->required();
  example_cmd->add_option("--x0", cfg.x0, "optional x0,y0,z0")->delimiter(',');
  example_cmd->add_option("--out", example_out, "output path or '-'")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*classify_cmd) return cmd_classify(spec_path, out);
    if (*reduce_cmd) return cmd_reduce(spec_path, pivot, reduce_out, out);
    if (*simulate_cmd) return cmd_simulate(spec_path, cfg, out, err);
    if (*ex2_cmd) return cmd_ex2(p2, cfg, as_json, out);
    if (*ex3_cmd) return cmd_ex3(p3, w0, on_w1, cfg, as_json, out);
    if (*ex4_cmd) return cmd_ex4(p4, cfg, as_json, out);
    if (*sweep_cmd) {
      const Example3Grid grid{parse_axis(ax_alpha, "alpha"), parse_axis(ax_A1, "A1"),
                              parse_axis(ax_A2, "A2")};
      return cmd_sweep(grid, workers, sweep_out, out);
    }
    if (*example_cmd) return cmd_example(which, example_params, cfg.x0, example_out, out);
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace projsys::cli
