#pragma once

#include <array>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgp/experiments.hpp"
#include "sgp/geometry.hpp"
#include "sgp/kinematics.hpp"
#include "sgp/monomial.hpp"

namespace sgp::test {

// A random instance whose leg lengths come from a known real pose.
struct GroundTruth {
  PlatformGeometry geom;
  LegMeasurements L;
  Pose pose;
};

inline GroundTruth ground_truth(Variant variant, std::uint64_t seed, std::uint64_t trial = 0) {
  SplitMix64 rng = trial_stream(seed, trial);
  GroundTruth g;
  g.geom = gen_geometry(variant, rng);
  GeneratedLengths gl = gen_lengths(g.geom, LengthMode::FromPose, rng);
  g.L = gl.L;
  g.pose = *gl.truth;
  return g;
}

inline Eigen::VectorXd monomial_vector(const std::vector<Monomial>& ms, const std::array<double, 6>& x) {
  Eigen::VectorXd z(ms.size());
  for (std::size_t k = 0; k < ms.size(); ++k) z(k) = ms[k].evaluate(x);
  return z;
}

inline double pow_int(double b, int e) {
  double r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

}  // namespace sgp::test
