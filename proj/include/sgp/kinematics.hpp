#pragma once

#include "sgp/geometry.hpp"
#include "sgp/polynomial.hpp"

namespace sgp {

// L_i = |R x_i + t - X_i|^2.
LegMeasurements leg_lengths_from_pose(const PlatformGeometry& geom, const Pose& pose);

// f_1 = x^2 + y^2 + z^2 - L_1 and, for i >= 2,
// f_i = (1 + |p|^2) (|R(p) x_i + t - X_i|^2 - L_i) expanded over (u, v, w, x, y, z).
PolynomialSystem build_polynomial_system(const PlatformGeometry& geom, const LegMeasurements& L);

// |M(F) z / |z|| with unit-norm rows of M(F) and z the monomials of U_F at the candidate.
double normalized_residual(const PolynomialSystem& system, const ComplexPose& candidate);
double normalized_residual(const PolynomialSystem& system, const Pose& candidate);

}  // namespace sgp
