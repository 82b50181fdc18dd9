#include "sgp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sgp/errors.hpp"
#include "sgp/kinematics.hpp"

namespace sgp {

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(trial + 1)));
}

void TrialConfig::validate() const {
  if (trials < 1) throw InputError("trial count must be at least 1");
  if (!(sigma >= 0) || !std::isfinite(sigma)) throw InputError("noise sigma must be nonnegative");
  if (!(lo < hi)) throw InputError("length bounds require lo < hi");
  if (mode == LengthMode::UniformSquared && !(lo > 0)) throw InputError("squared lengths must be positive");
}

PlatformGeometry gen_geometry(Variant variant, SplitMix64& rng) {
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  PlatformGeometry g;
  g.variant = variant;
  g.top[0] = Vec3::Zero();
  g.base[0] = Vec3::Zero();
  for (int i = 1; i < 6; ++i)
    for (int k = 0; k < 3; ++k) g.top[i](k) = U(rng);
  for (int i = 1; i < 6; ++i)
    for (int k = 0; k < 3; ++k) g.base[i](k) = U(rng);
  if (variant == Variant::Coincident65) g.top[5] = g.top[4];
  if (variant == Variant::SemiPlanar6P6)
    for (auto& X : g.base) X(2) = 0.0;
  return g;
}

GeneratedLengths gen_lengths(const PlatformGeometry& geom, LengthMode mode, SplitMix64& rng, double lo, double hi) {
  GeneratedLengths out;
  if (mode == LengthMode::UniformSquared) {
    std::uniform_real_distribution<double> U(lo, hi);
    for (auto& L : out.L.L) L = U(rng);
    return out;
  }
  std::normal_distribution<double> N(0.0, 1.0);
  Pose pose;
  for (int k = 0; k < 3; ++k) pose.p(k) = N(rng);
  for (int k = 0; k < 3; ++k) pose.t(k) = N(rng);
  out.L = leg_lengths_from_pose(geom, pose);
  out.truth = pose;
  return out;
}

LegMeasurements perturb_lengths(const LegMeasurements& L, double sigma, SplitMix64& rng) {
  if (!(sigma >= 0)) throw InputError("noise sigma must be nonnegative");
  std::normal_distribution<double> N(0.0, 1.0);
  LegMeasurements out;
  for (int i = 0; i < 6; ++i) {
    double s = sigma * N(rng);
    while (s <= -1.0) s = sigma * N(rng);
    out.L[i] = L.L[i] * (1.0 + s) * (1.0 + s);
  }
  return out;
}

double error_metric(const SolutionSet& solution) {
  double s = 0;
  for (double r : solution.accepted_residuals()) s += r * r;
  return 0.5 * std::log10(s);
}

double rotation_error(const Mat3& Re, const Mat3& Rgt) {
  double c = ((Re.transpose() * Rgt).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double translation_error(const Vec3& te, const Vec3& tgt) {
  double c = te.dot(tgt) / (te.norm() * tgt.norm());
  if (!std::isfinite(c)) return std::acos(-1.0);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

PoseErrors pose_errors(const SolutionSet& solution, const Pose& truth) {
  PoseErrors e;
  const Mat3 Rgt = truth.rotation();
  for (int k = 0; k < static_cast<int>(solution.accepted.size()); ++k) {
    const Candidate& c = solution.root(k);
    if (!c.real) continue;
    Pose est = real_part(c.pose);
    double er = rotation_error(est.rotation(), Rgt);
    double et = translation_error(est.t, truth.t);
    e.rotation = std::min(e.rotation.value_or(er), er);
    e.translation = std::min(e.translation.value_or(et), et);
    double j = std::max(er, et);
    e.joint = std::min(e.joint.value_or(j), j);
  }
  return e;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  double h = (static_cast<double>(values.size()) - 1.0) * q;
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

TrialRecord run_trial(const TrialConfig& config, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  SplitMix64 rng = trial_stream(config.seed, static_cast<std::uint64_t>(trial));
  PlatformGeometry g = gen_geometry(config.variant, rng);
  GeneratedLengths gl = gen_lengths(g, config.mode, rng, config.lo, config.hi);
  LegMeasurements L = config.sigma > 0 ? perturb_lengths(gl.L, config.sigma, rng) : gl.L;
  try {
    SolutionSet S = forward_kinematics(g, L, config.solve);
    rec.ok = true;
    rec.epsilon = error_metric(S);
    rec.gap = S.gap;
    rec.real_roots = S.real_count();
    rec.timings = S.timings;
    if (gl.truth) {
      PoseErrors pe = pose_errors(S, *gl.truth);
      rec.rot_error = pe.rotation;
      rec.trans_error = pe.translation;
    }
  } catch (const Error& e) {
    rec.failure = std::string(stage_name(e.stage())) + ": " + e.what();
  }
  return rec;
}

AccuracySummary run_accuracy(const TrialConfig& config) {
  config.validate();
  AccuracySummary s;
  s.trials = config.trials;
  s.real_histogram.assign(kNumRoots + 1, 0);
  std::vector<double> eps, gaps;
  for (int k = 0; k < config.trials; ++k) {
    TrialRecord rec = run_trial(config, k);
    if (!rec.ok) {
      ++s.failures;
    } else {
      eps.push_back(rec.epsilon);
      if (std::isfinite(rec.gap)) gaps.push_back(rec.gap);
      s.real_histogram.at(std::clamp(rec.real_roots, 0, kNumRoots))++;
    }
    s.records.push_back(std::move(rec));
  }
  if (!eps.empty()) {
    s.median_eps = median(eps);
    s.mean_eps = std::accumulate(eps.begin(), eps.end(), 0.0) / static_cast<double>(eps.size());
    s.max_eps = *std::max_element(eps.begin(), eps.end());
    auto frac = [&](double thr) {
      return static_cast<double>(std::count_if(eps.begin(), eps.end(), [&](double e) { return e > thr; })) /
             static_cast<double>(eps.size());
    };
    s.frac_above_5 = frac(-5.0);
    s.frac_above_6 = frac(-6.0);
  }
  if (!gaps.empty()) {
    s.median_gap = median(gaps);
    s.mean_gap = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
  }
  return s;
}

BoxStats box_stats(std::vector<double> values, double floor) {
  BoxStats b;
  b.n = static_cast<int>(values.size());
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  b.q1 = quantile(values, 0.25);
  b.median = quantile(values, 0.5);
  b.q3 = quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo = b.q1 - 1.5 * iqr, hi = b.q3 + 1.5 * iqr;
  b.whisker_lo = b.q1;
  b.whisker_hi = b.q3;
  for (double v : values) {
    if (v >= lo) b.whisker_lo = std::min(b.whisker_lo, v);
    if (v <= hi) b.whisker_hi = std::max(b.whisker_hi, v);
    if (v < lo - floor || v > hi + floor) b.outliers.push_back(v);
  }
  return b;
}

std::vector<NoisePoint> run_noise(const NoiseConfig& config) {
  if (config.trials < 1) throw InputError("trial count must be at least 1");
  if (config.steps < 1) throw InputError("sigma grid needs at least one point");
  if (!(config.sigma_max >= 0) || config.sigma_max > 8e-4 * (1 + 1e-12))
    throw InputError("sigma range must lie in [0, 8e-4]");
  std::vector<NoisePoint> pts(config.steps);
  for (int s = 0; s < config.steps; ++s)
    pts[s].sigma = config.steps == 1 ? config.sigma_max : config.sigma_max * s / (config.steps - 1);

  for (int k = 0; k < config.trials; ++k) {
    SplitMix64 rng = trial_stream(config.seed, static_cast<std::uint64_t>(k));
    PlatformGeometry g = gen_geometry(config.variant, rng);
    GeneratedLengths gl = gen_lengths(g, LengthMode::FromPose, rng);
    for (auto& pt : pts) {
      SplitMix64 noise = rng;  // identical unit draws at every sigma
      TrialRecord rec;
      rec.trial = k;
      try {
        SolutionSet S = forward_kinematics(g, perturb_lengths(gl.L, pt.sigma, noise), config.solve);
        rec.ok = true;
        rec.epsilon = error_metric(S);
        rec.gap = S.gap;
        rec.real_roots = S.real_count();
        rec.timings = S.timings;
        PoseErrors pe = pose_errors(S, *gl.truth);
        rec.rot_error = pe.rotation;
        rec.trans_error = pe.translation;
        if (!pe.rotation) ++pt.no_real;
      } catch (const Error& e) {
        rec.failure = std::string(stage_name(e.stage())) + ": " + e.what();
        ++pt.failures;
      }
      pt.records.push_back(std::move(rec));
    }
  }
  for (auto& pt : pts) {
    std::vector<double> er, et;
    for (const auto& r : pt.records) {
      if (r.rot_error) er.push_back(*r.rot_error);
      if (r.trans_error) et.push_back(*r.trans_error);
    }
    pt.rotation = box_stats(er);
    pt.translation = box_stats(et);
  }
  return pts;
}

BenchSummary run_bench(Variant variant, int repeats, std::uint64_t seed, int warmup) {
  if (repeats < 1) throw InputError("repeat count must be at least 1");
  auto instance = [&](int k) {
    SplitMix64 rng = trial_stream(seed, static_cast<std::uint64_t>(k));
    PlatformGeometry g = gen_geometry(variant, rng);
    return std::make_pair(g, gen_lengths(g, LengthMode::UniformSquared, rng).L);
  };
  for (int k = 0; k < warmup; ++k) {
    auto [g, L] = instance(repeats + k);
    try {
      forward_kinematics(g, L);
    } catch (const Error&) {
    }
  }
  std::vector<double> tt, tp, tq, tf, tot;
  for (int k = 0; k < repeats; ++k) {
    auto [g, L] = instance(k);
    try {
      SolutionSet S = forward_kinematics(g, L);
      tt.push_back(S.timings.template_ms);
      tp.push_back(S.timings.plu_ms);
      tq.push_back(S.timings.qz_ms);
      tf.push_back(S.timings.filter_ms);
      tot.push_back(S.timings.total_ms);
    } catch (const Error&) {
    }
  }
  auto stats = [](const std::vector<double>& v) {
    StageStats s;
    if (v.empty()) return s;
    s.mean_ms = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.median_ms = median(v);
    return s;
  };
  BenchSummary b;
  b.repeats = static_cast<int>(tot.size());
  b.template_stage = stats(tt);
  b.plu = stats(tp);
  b.qz = stats(tq);
  b.filter = stats(tf);
  b.total = stats(tot);
  return b;
}

namespace {

std::string opt_str(const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string(); }

}  // namespace

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "trial,epsilon,gap,real_roots,rot_error,trans_error,template_ms,plu_ms,qz_ms,filter_ms,total_ms\n";
  for (const auto& r : records) {
    if (!r.ok) continue;
    fmt::print(os, "{},{:.17g},{:.17g},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.trial, r.epsilon,
               r.gap, r.real_roots, opt_str(r.rot_error), opt_str(r.trans_error), r.timings.template_ms,
               r.timings.plu_ms, r.timings.qz_ms, r.timings.filter_ms, r.timings.total_ms);
  }
}

void write_noise_csv(std::ostream& os, const std::vector<NoisePoint>& points) {
  os << "sigma,quantity,n,q1,median,q3,whisker_lo,whisker_hi,n_outliers,outliers,no_real,failures\n";
  for (const auto& p : points) {
    for (int q = 0; q < 2; ++q) {
      const BoxStats& b = q == 0 ? p.rotation : p.translation;
      std::string outl;
      for (double v : b.outliers) outl += (outl.empty() ? "" : ";") + fmt::format("{:.17g}", v);
      fmt::print(os, "{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{}\n", p.sigma,
                 q == 0 ? "eps_R" : "eps_t", b.n, b.q1, b.median, b.q3, b.whisker_lo, b.whisker_hi,
                 b.outliers.size(), outl, p.no_real, p.failures);
    }
  }
}

void write_noise_trials_csv(std::ostream& os, const std::vector<NoisePoint>& points) {
  os << "sigma,trial,epsilon,real_roots,rot_error,trans_error\n";
  for (const auto& p : points)
    for (const auto& r : p.records) {
      if (!r.ok) continue;
      fmt::print(os, "{:.17g},{},{:.17g},{},{},{}\n", p.sigma, r.trial, r.epsilon, r.real_roots,
                 opt_str(r.rot_error), opt_str(r.trans_error));
    }
}

}  // namespace sgp
