#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sgp/geometry.hpp"
#include "sgp/pencil.hpp"

namespace sgp {

// SplitMix64: state advances by a fixed odd increment and each output is a
// bijective mix of the state.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  static std::uint64_t mix(std::uint64_t z);

private:
  std::uint64_t state_;
};

// Independent stream for one trial: seeded with mix(seed ^ mix(trial + 1)).
SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial);

enum class LengthMode { UniformSquared, FromPose };

struct TrialConfig {
  Variant variant = Variant::General66;
  int trials = 1000;
  std::uint64_t seed = 1;
  LengthMode mode = LengthMode::UniformSquared;
  double sigma = 0.0;
  double lo = 0.5;
  double hi = 3.0;
  SolveOptions solve;

  void validate() const;
};

PlatformGeometry gen_geometry(Variant variant, SplitMix64& rng);

struct GeneratedLengths {
  LegMeasurements L;
  std::optional<Pose> truth;
};

GeneratedLengths gen_lengths(const PlatformGeometry& geom, LengthMode mode, SplitMix64& rng,
                             double lo = 0.5, double hi = 3.0);

// L_i (1 + s_i)^2 with s_i ~ N(0, sigma^2); draws with s_i <= -1 are redrawn.
LegMeasurements perturb_lengths(const LegMeasurements& L, double sigma, SplitMix64& rng);

// 0.5 log10 of the sum of squared accepted residuals.
double error_metric(const SolutionSet& solution);

double rotation_error(const Mat3& Re, const Mat3& Rgt);
double translation_error(const Vec3& te, const Vec3& tgt);

struct PoseErrors {
  std::optional<double> rotation;     // min over real roots
  std::optional<double> translation;  // min over real roots
  std::optional<double> joint;        // min over real roots of max(eR, et)
};

PoseErrors pose_errors(const SolutionSet& solution, const Pose& truth);

// Midpoint-interpolated order statistic.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

struct TrialRecord {
  int trial = 0;
  bool ok = false;
  std::string failure;
  double epsilon = 0.0;
  double gap = 0.0;
  int real_roots = 0;
  std::optional<double> rot_error;
  std::optional<double> trans_error;
  StageTimings timings;
};

TrialRecord run_trial(const TrialConfig& config, int trial);

struct AccuracySummary {
  int trials = 0;
  int failures = 0;
  double median_eps = 0, mean_eps = 0, max_eps = 0;
  double frac_above_5 = 0, frac_above_6 = 0;
  double median_gap = 0, mean_gap = 0;
  std::vector<int> real_histogram;  // index = real root count, 0..40
  std::vector<TrialRecord> records;
};

AccuracySummary run_accuracy(const TrialConfig& config);

struct BoxStats {
  int n = 0;
  double q1 = 0, median = 0, q3 = 0;
  double whisker_lo = 0, whisker_hi = 0;
  std::vector<double> outliers;
};

// Tukey box: whiskers at the extreme data within 1.5 IQR of the quartiles.
// A point is an outlier when it lies beyond a fence by more than `floor`.
BoxStats box_stats(std::vector<double> values, double floor = 1e-6);

struct NoiseConfig {
  Variant variant = Variant::General66;
  int trials = 1000;
  std::uint64_t seed = 1;
  double sigma_max = 8e-4;
  int steps = 9;
  SolveOptions solve;
};

struct NoisePoint {
  double sigma = 0;
  BoxStats rotation;
  BoxStats translation;
  int no_real = 0;
  int failures = 0;
  std::vector<TrialRecord> records;
};

// The same geometry, pose and unit noise draws are reused at every sigma.
std::vector<NoisePoint> run_noise(const NoiseConfig& config);

struct StageStats {
  double mean_ms = 0;
  double median_ms = 0;
};

struct BenchSummary {
  int repeats = 0;
  StageStats template_stage, plu, qz, filter, total;
};

BenchSummary run_bench(Variant variant, int repeats, std::uint64_t seed, int warmup = 10);

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_noise_csv(std::ostream& os, const std::vector<NoisePoint>& points);
void write_noise_trials_csv(std::ostream& os, const std::vector<NoisePoint>& points);

}  // namespace sgp
