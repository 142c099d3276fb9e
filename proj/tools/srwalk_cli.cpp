// Command-line front end: validate, check, solve, reverse, verify, curves,
// preset and table. JSON goes to stdout, a short summary to stderr.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "srwalk/srwalk.hpp"

namespace {

constexpr int kErrorExit = 3;

void emit(const srw::json& doc) { std::cout << doc.dump(2) << '\n'; }

srw::AnalysisOptions options_for(double tol) {
  srw::AnalysisOptions opt;
  opt.tol = tol;
  return opt;
}

// Closed form of a walk the pipeline accepted, or an error.
srw::StationaryDistribution require_distribution(const srw::AnalysisReport& r) {
  if (!r.stationary || (r.verdict != srw::Verdict::StructureReversible &&
                        r.verdict != srw::Verdict::Singular)) {
    throw srw::Error(srw::ErrorKind::NotStructureReversible,
                     r.reason.empty() ? "no closed form available" : r.reason);
  }
  return *r.stationary;
}

int cmd_validate(const std::string& path) {
  const auto report = srw::validate(srw::load_model(path));
  emit(srw::to_json(report));
  std::cerr << (report.ok ? "valid" : "invalid") << ", chain irreducible: "
            << srw::tri_state_name(report.chain_irreducible)
            << ", free walk irreducible: " << (report.free_walk_irreducible ? "yes" : "no") << '\n';
  return report.ok ? 0 : 2;
}

int cmd_check(const std::string& path, double tol) {
  const auto report = srw::check_conditions(srw::load_model(path), tol);
  emit(srw::to_json(report));
  std::cerr << "a1 " << srw::status_name(report.a1.status) << ", a2 "
            << srw::status_name(report.a2.status) << ", a3 " << srw::status_name(report.a3.status)
            << ", b1 " << srw::status_name(report.b1.status) << ", b2 "
            << srw::status_name(report.b2.status) << '\n';
  return report.passed() ? 0 : 1;
}

int cmd_solve(const std::string& path, double tol) {
  const auto report = srw::analyze(srw::load_model(path), options_for(tol));
  emit(srw::to_json(report));
  std::cerr << "verdict: " << srw::verdict_name(report.verdict);
  if (report.stationary) {
    std::cerr << ", 1/eta = (" << 1.0 / report.stationary->eta1 << ", "
              << 1.0 / report.stationary->eta2 << ")";
  }
  if (!report.reason.empty()) std::cerr << " (" << report.reason << ")";
  std::cerr << '\n';
  return srw::verdict_exit_code(report.verdict);
}

int cmd_reverse(const std::string& path, const std::string& out, double tol) {
  const auto model = srw::load_model(path);
  auto report = srw::analyze(model, options_for(tol));
  require_distribution(report);
  const auto rounded = srw::rounded_for_output(report.reversed->model);
  const auto text = srw::serialize(rounded);
  // The written document must load back through the strict parser.
  srw::parse_model(std::string_view(text));
  srw::write_text_file(out, text);
  report.reversed_model_path = out;
  emit(srw::to_json(report));
  std::cerr << "reversed model written to " << out << '\n';
  return 0;
}

struct VerifyFlags {
  int grid = 60;
  std::uint64_t seed = 42;
  long steps = 10'000'000;
  long burn_in = 10'000;
  std::optional<int> window;
  int sim_window = 10;
  std::optional<double> eta1;
  std::optional<double> eta2;
};

int cmd_verify(const std::string& path, const VerifyFlags& f, double tol) {
  const auto model = srw::load_model(path);
  const auto report = srw::analyze(model, options_for(tol));
  const auto oracle = srw::truncated_stationary(model, f.grid);

  srw::StationaryDistribution dist;
  std::string source;
  if (report.stationary && (report.verdict == srw::Verdict::StructureReversible ||
                            report.verdict == srw::Verdict::Singular)) {
    dist = *report.stationary;
    source = "closed-form";
  } else {
    // Not structure-reversible: test whether a geometric form is stationary
    // anyway, starting from given rates or rates read off the oracle.
    const double e1 = f.eta1.value_or(oracle.at(6, 5) / oracle.at(5, 5));
    const double e2 = f.eta2.value_or(oracle.at(5, 6) / oracle.at(5, 5));
    dist = srw::fit_geometric_form(model, e1, e2).dist;
    source = "fitted-geometric";
  }
  const auto balance = srw::verify_stationary_equations(model, dist, srw::balance_tolerance(options_for(tol)));
  const auto closed = srw::tabulate(dist, f.grid);
  const int window = f.window.value_or(std::min(25, f.grid));
  srw::json out = {{"verdict", std::string(srw::verdict_name(report.verdict))},
                   {"source", source},
                   {"stationary", srw::to_json(dist)},
                   {"balance", srw::to_json(balance)},
                   {"oracle",
                    {{"grid", f.grid}, {"residual", oracle.residual}, {"iterations", oracle.iterations}}},
                   {"window", window}};
  const double tv_closed = srw::total_variation(closed, oracle, window);
  out["tv_closed_vs_oracle"] = tv_closed;
  out["oracle_tv"] = tv_closed;
  if (f.steps > 0) {
    const auto sim = srw::simulate(model, f.steps, f.seed, f.burn_in, f.grid);
    out["simulation"] = {{"steps", f.steps},
                         {"burn_in", f.burn_in},
                         {"seed", f.seed},
                         {"outside_mass", sim.outside_mass},
                         {"window", f.sim_window}};
    out["tv_sim_vs_oracle"] = srw::total_variation(sim, oracle, f.sim_window);
    out["tv_sim_vs_closed"] = srw::total_variation(sim, closed, f.sim_window);
  }
  emit(out);
  std::cerr << "source " << source << ", TV(closed, oracle) = " << tv_closed
            << ", balance residual = " << balance.max_residual << '\n';
  return 0;
}

int cmd_curves(const std::string& path, const std::string& dir, double zmin, double zmax,
               int points, double tol) {
  const auto model = srw::load_model(path);
  const auto report = srw::analyze(model, options_for(tol));
  if (!report.conditions || !report.conditions->constants) {
    throw srw::Error(srw::ErrorKind::NotStructureReversible,
                     "curves need the constants of conditions (a1)-(a3)");
  }
  std::vector<double> extra;
  if (report.solution) extra.push_back(1.0 / report.solution->eta1);
  const auto grid = srw::curve_grid(zmin, zmax, points, extra);
  std::filesystem::create_directories(dir);
  srw::json files = srw::json::array();
  for (srw::Face face : srw::kFaces) {
    const auto sample = srw::sample_curve(model, *report.conditions->constants, face, grid);
    const auto file = (std::filesystem::path(dir) /
                       ("gamma_" + std::string(srw::face_name(face)) + ".csv"))
                          .string();
    std::ofstream os(file);
    if (!os) throw srw::Error(srw::ErrorKind::InvalidArgument, "cannot write " + file);
    srw::write_curve_csv(os, sample);
    files.push_back({{"face", std::string(srw::face_name(face))},
                     {"path", file},
                     {"points", sample.points.size()},
                     {"skipped", sample.skipped}});
  }
  emit({{"files", files}});
  std::cerr << "wrote " << files.size() << " curve files to " << dir << '\n';
  return 0;
}

int cmd_preset(const std::string& name, const std::string& out) {
  const auto text = srw::serialize(srw::preset(name), srw::preset_note(name));
  if (out.empty()) {
    std::cout << text;
  } else {
    srw::write_text_file(out, text);
    std::cerr << "preset " << name << " written to " << out << '\n';
  }
  return 0;
}

int cmd_table(const std::string& path, int nmax, const std::string& out, double tol) {
  if (nmax < 0) throw srw::Error(srw::ErrorKind::InvalidArgument, "--nmax must be >= 0");
  const auto dist = require_distribution(srw::analyze(srw::load_model(path), options_for(tol)));
  std::ostringstream os;
  os << "n1,n2,probability\n";
  os.precision(17);
  for (int a = 0; a <= nmax; ++a) {
    for (int b = 0; b <= nmax; ++b) os << a << ',' << b << ',' << srw::pi_at(dist, a, b) << '\n';
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    srw::write_text_file(out, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-reversibility analysis of skip-free reflecting random walks"};
  app.require_subcommand(1);

  std::string model_path;
  std::string out_path;
  double tol = srw::kDefaultRatioTolerance;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("model", model_path, "Model document (JSON)")->required();
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Relative ratio tolerance (1e-3 suits 4-6 digit data)")
        ->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "Check model invariants and irreducibility");
  add_model(validate);

  auto* check = app.add_subcommand("check", "Report conditions a1-a3, b1, b2");
  add_model(check);
  add_tol(check);

  auto* solve = app.add_subcommand("solve", "Full analysis; exit 0 iff structure-reversible");
  add_model(solve);
  add_tol(solve);

  auto* reverse = app.add_subcommand("reverse", "Write the time-reversed walk");
  add_model(reverse);
  add_tol(reverse);
  reverse->add_option("-o,--output", out_path, "Output document")->required();

  VerifyFlags vf;
  double eta1 = 0.0;
  double eta2 = 0.0;
  auto* verify = app.add_subcommand("verify", "Compare closed form, truncated solve, simulation");
  add_model(verify);
  add_tol(verify);
  verify->add_option("--grid", vf.grid, "Truncation size N of {0..N}^2")->check(CLI::Range(8, 400));
  verify->add_option("--seed", vf.seed, "Simulation seed");
  verify->add_option("--steps", vf.steps, "Simulation steps (0 skips simulation)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--burn-in", vf.burn_in, "Discarded initial steps")->check(CLI::NonNegativeNumber);
  verify->add_option("--window", vf.window, "TV window for closed form vs truncated solve (default min(25, N))");
  verify->add_option("--sim-window", vf.sim_window, "TV window for the simulation");
  auto* eta1_opt = verify->add_option("--eta1", eta1, "Rate to test when not structure-reversible");
  auto* eta2_opt = verify->add_option("--eta2", eta2, "Rate to test when not structure-reversible");

  double zmin = 0.2;
  double zmax = 5.0;
  int points = 400;
  auto* curves = app.add_subcommand("curves", "Write the level curves gamma_i = 1 as CSV");
  add_model(curves);
  add_tol(curves);
  curves->add_option("-o,--output", out_path, "Output directory")->required();
  curves->add_option("--zmin", zmin, "Smallest z1")->check(CLI::PositiveNumber);
  curves->add_option("--zmax", zmax, "Largest z1")->check(CLI::PositiveNumber);
  curves->add_option("--points", points, "Number of z1 abscissae")->check(CLI::Range(2, 100000));

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Emit a built-in instance");
  preset->add_option("name", preset_name, "Instance name")
      ->required()
      ->check(CLI::IsMember(srw::preset_names()));
  preset->add_option("-o,--output", out_path, "Output document (default stdout)");

  int nmax = 10;
  auto* table = app.add_subcommand("table", "CSV of the stationary distribution");
  add_model(table);
  add_tol(table);
  table->add_option("--nmax", nmax, "Largest coordinate")->required();
  table->add_option("-o,--output", out_path, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(model_path);
    if (*check) return cmd_check(model_path, tol);
    if (*solve) return cmd_solve(model_path, tol);
    if (*reverse) return cmd_reverse(model_path, out_path, tol);
    if (*verify) {
      if (*eta1_opt) vf.eta1 = eta1;
      if (*eta2_opt) vf.eta2 = eta2;
      return cmd_verify(model_path, vf, tol);
    }
    if (*curves) return cmd_curves(model_path, out_path, zmin, zmax, points, tol);
    if (*preset) return cmd_preset(preset_name, out_path);
    if (*table) return cmd_table(model_path, nmax, out_path, tol);
  } catch (const srw::Error& e) {
    emit(srw::error_json(e));
    std::cerr << "error: " << srw::kind_name(e.kind()) << ": " << e.what() << '\n';
    return kErrorExit;
  } catch (const std::exception& e) {
    emit({{"error", {{"kind", "Internal"}, {"message", e.what()}}}});
    std::cerr << "error: " << e.what() << '\n';
    return kErrorExit;
  }
  return kErrorExit;
}
