#include "sgp/kinematics.hpp"

#include <cmath>
#include <limits>

#include "sgp/cayley.hpp"

namespace sgp {

LegMeasurements leg_lengths_from_pose(const PlatformGeometry& geom, const Pose& pose) {
  Mat3 R = pose.rotation();
  LegMeasurements out;
  for (int i = 0; i < 6; ++i) out.L[i] = (R * geom.top[i] + pose.t - geom.base[i]).squaredNorm();
  return out;
}

PolynomialSystem build_polynomial_system(const PlatformGeometry& geom, const LegMeasurements& L) {
  using P = Polynomial;
  const P one = P::constant(1.0);
  std::array<P, 3> p{P::variable(0), P::variable(1), P::variable(2)};
  std::array<P, 3> t{P::variable(3), P::variable(4), P::variable(5)};

  P pp = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  P n = one + pp;

  // Q = (1 + |p|^2) R = (1 - |p|^2) I + 2 p p^T - 2 [p]x
  std::array<std::array<P, 3>, 3> Q;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) Q[a][b] = (p[a] * p[b]).scaled(2.0);
  for (int a = 0; a < 3; ++a) Q[a][a] = Q[a][a] + one - pp;
  Q[0][1] = Q[0][1] + p[2].scaled(2.0);
  Q[0][2] = Q[0][2] - p[1].scaled(2.0);
  Q[1][0] = Q[1][0] - p[2].scaled(2.0);
  Q[1][2] = Q[1][2] + p[0].scaled(2.0);
  Q[2][0] = Q[2][0] + p[1].scaled(2.0);
  Q[2][1] = Q[2][1] - p[0].scaled(2.0);

  std::array<P, 6> f;
  f[0] = t[0] * t[0] + t[1] * t[1] + t[2] * t[2] - P::constant(L.L[0]);
  for (int i = 1; i < 6; ++i) {
    const Vec3& x = geom.top[i];
    const Vec3& X = geom.base[i];
    // |R x + t - X|^2 = |x|^2 + |t - X|^2 + 2 (R x).(t - X)
    std::array<P, 3> d;
    for (int k = 0; k < 3; ++k) d[k] = t[k] - P::constant(X(k));
    P dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    P fi = n * (dd + P::constant(x.squaredNorm() - L.L[i]));
    for (int k = 0; k < 3; ++k) {
      P Qx = Q[k][0].scaled(x(0)) + Q[k][1].scaled(x(1)) + Q[k][2].scaled(x(2));
      fi = fi + (Qx * d[k]).scaled(2.0);
    }
    f[i] = fi;
  }
  return PolynomialSystem(std::move(f));
}

double normalized_residual(const PolynomialSystem& system, const ComplexPose& candidate) {
  const auto vars = candidate.variables();
  const auto& U = system.support_union();
  Eigen::VectorXcd z(static_cast<Eigen::Index>(U.size()));
  for (std::size_t k = 0; k < U.size(); ++k) z(static_cast<Eigen::Index>(k)) = U[k].evaluate(vars);
  double nz = z.norm();
  if (!(nz > 0) || !std::isfinite(nz)) return std::numeric_limits<double>::infinity();
  Eigen::VectorXcd r = system.normalized_macaulay().cast<cdouble>() * (z / nz);
  return r.norm();
}

double normalized_residual(const PolynomialSystem& system, const Pose& candidate) {
  return normalized_residual(system, complexify(candidate));
}

}  // namespace sgp
