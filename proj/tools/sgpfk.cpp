#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sgp/errors.hpp"
#include "sgp/experiments.hpp"
#include "sgp/io.hpp"
#include "sgp/kinematics.hpp"
#include "sgp/pencil.hpp"
#include "sgp/structure.hpp"
#include "sgp/template_engine.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw sgp::InputError("cannot write '" + p.string() + "'");
  return f;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw sgp::InputError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

sgp::SchurPath parse_path(const std::string& s) {
  if (s == "backsub") return sgp::SchurPath::BackSubstitution;
  if (s == "offline") return sgp::SchurPath::OfflineSeries;
  throw sgp::InputError("unknown Schur path '" + s + "'");
}

int cmd_solve(const std::string& geometry, const std::string& lengths, bool csv, bool all_complex,
              bool candidates, const sgp::SolveOptions& opts) {
  sgp::GeometryInput in = sgp::read_geometry_file(geometry);
  if (!lengths.empty()) in.lengths = sgp::read_lengths_file(lengths);
  if (!in.lengths) throw sgp::InputError("no squared leg lengths given (use --lengths or field 'L')");
  sgp::SolutionSet sol = sgp::forward_kinematics(in.geometry, *in.lengths, opts);
  const bool real_only = !all_complex && !candidates;
  if (csv)
    sgp::write_solution_csv(std::cout, sol, candidates, real_only);
  else
    sgp::write_solution_json(std::cout, sol, candidates, real_only);
  return 0;
}

int cmd_synth(const sgp::TrialConfig& cfg, const std::string& out) {
  cfg.validate();
  fs::path dir = prepare_dir(out);
  sgp::AccuracySummary s = sgp::run_accuracy(cfg);
  {
    auto f = open_out(dir / "trials.csv");
    sgp::write_trials_csv(f, s.records);
  }
  auto f = open_out(dir / "summary.txt");
  auto report = [&](std::ostream& os) {
    fmt::print(os, "variant {}  trials {}  failures {}  seed {}\n", sgp::variant_name(cfg.variant), s.trials,
               s.failures, cfg.seed);
    fmt::print(os, "median eps {:.4f}  mean eps {:.4f}  max eps {:.4f}\n", s.median_eps, s.mean_eps, s.max_eps);
    fmt::print(os, "fraction eps > -5: {:.4f}%  eps > -6: {:.4f}%\n", 100 * s.frac_above_5, 100 * s.frac_above_6);
    fmt::print(os, "median gap {:.4f}  mean gap {:.4f}\n", s.median_gap, s.mean_gap);
    os << "real root histogram (count: trials):";
    for (std::size_t k = 0; k < s.real_histogram.size(); ++k)
      if (s.real_histogram[k]) fmt::print(os, " {}:{}", k, s.real_histogram[k]);
    os << "\nmedians are midpoint-interpolated order statistics\n";
    for (const auto& r : s.records)
      if (!r.ok) fmt::print(os, "failed trial {}: {}\n", r.trial, r.failure);
  };
  report(f);
  report(std::cout);
  return 0;
}

int cmd_noise(const sgp::NoiseConfig& cfg, const std::string& out) {
  fs::path dir = prepare_dir(out);
  auto pts = sgp::run_noise(cfg);
  {
    auto f = open_out(dir / "noise.csv");
    sgp::write_noise_csv(f, pts);
  }
  {
    auto f = open_out(dir / "noise_trials.csv");
    sgp::write_noise_trials_csv(f, pts);
  }
  fmt::print("{:>10} {:>12} {:>12} {:>9} {:>9} {:>8}\n", "sigma", "median eR", "median et", "out eR", "out et",
             "no real");
  for (const auto& p : pts)
    fmt::print("{:>10.3g} {:>12.4g} {:>12.4g} {:>9} {:>9} {:>8}\n", p.sigma, p.rotation.median,
               p.translation.median, p.rotation.outliers.size(), p.translation.outliers.size(), p.no_real);
  return 0;
}

int cmd_bench(sgp::Variant variant, int repeats, std::uint64_t seed) {
  sgp::BenchSummary b = sgp::run_bench(variant, repeats, seed);
  fmt::print("{} timed solves ({})\n", b.repeats, sgp::variant_name(variant));
  fmt::print("{:<10} {:>10} {:>10}\n", "stage", "mean ms", "median ms");
  auto row = [](const char* name, const sgp::StageStats& s) {
    fmt::print("{:<10} {:>10.3f} {:>10.3f}\n", name, s.mean_ms, s.median_ms);
  };
  row("template", b.template_stage);
  row("plu", b.plu);
  row("qz", b.qz);
  row("filter", b.filter);
  row("total", b.total);
  return 0;
}

int cmd_verify(const std::string& dump, const std::string& pattern) {
  const auto t0 = std::chrono::steady_clock::now();
  const sgp::TemplateStructure& s = sgp::standard_structure();
  bool ok = true;
  auto line = [&](bool pass, const std::string& what) {
    ok = ok && pass;
    fmt::print("{} {}\n", pass ? "ok  " : "FAIL", what);
  };
  std::string sizes;
  bool sizes_ok = true;
  for (int j = 0; j < 6; ++j) {
    sizes += (j ? ", " : "") + std::to_string(s.tables.shifts[j].size());
    sizes_ok = sizes_ok && s.tables.shifts[j].size() == sgp::kShiftSetSizes[j];
  }
  line(sizes_ok, "shift sets #A_1..#A_6 = (" + sizes + ")");
  line(s.sizes[1] == 255 && s.sizes[2] == 38 && s.sizes[3] == 69,
       fmt::format("#E/#R/#B = {}/{}/{}", s.sizes[1], s.sizes[2], s.sizes[3]));

  sgp::SplitMix64 rng(12345);
  auto g = sgp::gen_geometry(sgp::Variant::General66, rng);
  auto L = sgp::gen_lengths(g, sgp::LengthMode::UniformSquared, rng).L;
  auto sys = sgp::build_polynomial_system(g, L);
  auto M = sgp::assemble_macaulay(sys, s);
  line(M.num_rows() == 511 && M.template_cols == 580, fmt::format("initial matrix {}x{}", M.num_rows(), M.template_cols));
  auto T = sgp::schur_reduce(M, s, L.L[0]);
  line(T.mhat.rows() == 293 && T.mhat.cols() == 362,
       fmt::format("reduced template {}x{} (sparsity {:.3f})", T.mhat.rows(), T.mhat.cols(), T.sparsity()));
  std::string tail;
  bool tail_ok = true;
  const int ob = s.block_offset(sgp::ColumnBlock::Basic);
  const char* want[7] = {"uw", "vw", "w^2", "xw", "yw", "zw", "w"};
  for (int k = 0; k < 7; ++k) {
    tail += (k ? ", " : "") + s.columns[ob + 62 + k].to_string();
    tail_ok = tail_ok && s.columns[ob + 62 + k] == sgp::Monomial::parse(want[k]);
  }
  line(tail_ok, "last seven basic monomials (" + tail + ")");
  auto bad = s.check();
  for (const auto& b : bad) line(false, b);
  if (bad.empty()) line(true, "partition, action map (38/31), eliminated x^2-multiples, unit triangular M11");
  fmt::print("info full shifted support {} columns, {} dropped ({} zero after Schur, {} dependent)\n",
             s.full_universe_size(), s.dropped.size(), s.dropped_zero, s.dropped.size() - s.dropped_zero);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  line(ms < 1000.0, fmt::format("runtime {:.1f} ms", ms));

  if (!dump.empty()) {
    auto f = open_out(dump);
    sgp::write_structure_json(f, s);
  }
  if (!pattern.empty()) {
    auto f = open_out(pattern);
    f << "# nonzero (row, col) of the reduced template, 0-based; columns E | R | B\n";
    for (int c = 0; c < T.mhat.cols(); ++c)
      for (int r = 0; r < T.mhat.rows(); ++r)
        if (T.mhat(r, c) != 0.0) f << r << " " << c << "\n";
  }
  if (!ok) {
    std::cout << "structure inconsistent\n";
    return 4;
  }
  std::cout << "structure OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward kinematics of the general Stewart-Gough platform"};
  app.require_subcommand(1);

  std::string geometry, lengths, schur = "backsub";
  bool csv = false, json = false, all_complex = false, candidates = false, no_cond = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--geometry", geometry, "Geometry JSON file")->required()->check(CLI::ExistingFile);
  solve->add_option("--lengths", lengths, "Squared leg lengths JSON file")->check(CLI::ExistingFile);
  auto* fcsv = solve->add_flag("--csv", csv, "CSV output");
  solve->add_flag("--json", json, "JSON output (default)")->excludes(fcsv);
  solve->add_flag("--all-complex", all_complex, "Print all 40 roots, not only the real ones");
  solve->add_flag("--candidates", candidates, "Print all eigenvector candidates");
  solve->add_flag("--no-conditioning", no_cond, "Solve in the given frames");
  solve->add_option("--schur", schur, "Schur path: backsub or offline");
  int polish = 0;
  solve->add_option("--polish", polish, "Newton steps on each accepted root (default 0)")->check(CLI::Range(0, 20));

  sgp::TrialConfig tc;
  std::string variant = "66", mode = "uniform", out = "out";
  auto* synth = app.add_subcommand("synth", "Accuracy and real-root statistics on synthetic instances");
  synth->add_option("--variant", variant, "66, 65 or 6p6");
  synth->add_option("--trials", tc.trials, "Number of trials");
  synth->add_option("--seed", tc.seed, "Seed");
  synth->add_option("--mode", mode, "uniform (L ~ U[0.5,3]) or pose (L from a random pose)");
  synth->add_option("--sigma", tc.sigma, "Relative leg length noise");
  synth->add_option("--out", out, "Output directory");

  sgp::NoiseConfig nc;
  std::string nvariant = "66", nout = "out";
  auto* noise = app.add_subcommand("noise", "Pose error sweep over leg length noise");
  noise->add_option("--variant", nvariant, "66, 65 or 6p6");
  noise->add_option("--trials", nc.trials, "Trials per sigma");
  noise->add_option("--sigma-max", nc.sigma_max, "Largest sigma");
  noise->add_option("--steps", nc.steps, "Grid points");
  noise->add_option("--seed", nc.seed, "Seed");
  noise->add_option("--out", nout, "Output directory");

  int repeats = 200;
  std::uint64_t bseed = 1;
  std::string bvariant = "66";
  auto* bench = app.add_subcommand("bench", "Per-stage timings");
  bench->add_option("--repeats", repeats, "Timed solves");
  bench->add_option("--seed", bseed, "Seed");
  bench->add_option("--variant", bvariant, "66, 65 or 6p6");

  std::string dump, pattern;
  auto* verify = app.add_subcommand("verify-structure", "Check and optionally dump the template skeleton");
  verify->add_option("--dump", dump, "Write the structure as JSON");
  verify->add_option("--pattern", pattern, "Write the reduced-template sparsity pattern");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve) {
      sgp::SolveOptions o;
      o.frame_conditioning = !no_cond;
      o.schur_path = parse_path(schur);
      o.polish_iterations = polish;
      return cmd_solve(geometry, lengths, csv, all_complex, candidates, o);
    }
    if (*synth) {
      tc.variant = sgp::parse_variant(variant);
      if (mode == "uniform") tc.mode = sgp::LengthMode::UniformSquared;
      else if (mode == "pose") tc.mode = sgp::LengthMode::FromPose;
      else throw sgp::InputError("unknown length mode '" + mode + "'");
      return cmd_synth(tc, out);
    }
    if (*noise) {
      nc.variant = sgp::parse_variant(nvariant);
      return cmd_noise(nc, nout);
    }
    if (*bench) return cmd_bench(sgp::parse_variant(bvariant), repeats, bseed);
    if (*verify) return cmd_verify(dump, pattern);
  } catch (const sgp::Error& e) {
    std::cerr << "error [" << sgp::stage_name(e.stage()) << "]: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
