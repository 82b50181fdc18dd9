#include "sgp/geometry.hpp"

#include <cmath>

#include "sgp/cayley.hpp"
#include "sgp/errors.hpp"

namespace sgp {

namespace {

constexpr double kPointTol = 1e-12;

bool coplanar_through_origin(const std::array<Vec3, 6>& pts) {
  Eigen::Matrix<double, 3, 6> P;
  for (int i = 0; i < 6; ++i) P.col(i) = pts[i];
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 6>> svd(P);
  const auto& s = svd.singularValues();
  return s(0) == 0.0 || s(2) <= 1e-9 * s(0);
}

double scale_of(const std::array<Vec3, 6>& pts) {
  double s = 0;
  for (const auto& p : pts) s = std::max(s, p.norm());
  return s;
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::General66: return "66";
    case Variant::Coincident65: return "65";
    case Variant::SemiPlanar6P6: return "6p6";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "66" || s == "6-6" || s == "General66") return Variant::General66;
  if (s == "65" || s == "6-5" || s == "Coincident65") return Variant::Coincident65;
  if (s == "6p6" || s == "6P-6" || s == "6P6" || s == "SemiPlanar6P6") return Variant::SemiPlanar6P6;
  throw InputError("unknown variant '" + std::string(s) + "'");
}

void PlatformGeometry::validate() const {
  for (int i = 0; i < 6; ++i)
    if (!top[i].allFinite() || !base[i].allFinite())
      throw InputError("attachment point " + std::to_string(i + 1) + " is not finite");
  if (top[0].norm() > kPointTol || base[0].norm() > kPointTol)
    throw InputError("invariant x_1 = X_1 = 0 violated");

  if (variant == Variant::Coincident65) {
    double tol = 1e-12 * std::max(1.0, scale_of(top));
    int pairs = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        if ((top[i] - top[j]).norm() <= tol) ++pairs;
    if (pairs != 1)
      throw InputError("6-5 geometry must have exactly one coincident pair of top points (found " +
                       std::to_string(pairs) + ")");
  }
  bool base_planar = coplanar_through_origin(base);
  if (variant == Variant::SemiPlanar6P6 && !base_planar)
    throw InputError("6P-6 geometry requires all base points in a plane through the origin");
  if (base_planar && coplanar_through_origin(top))
    throw InputError("top and base points are both coplanar (6P-6P configuration is degenerate)");
}

PlatformGeometry PlatformGeometry::swapped() const {
  PlatformGeometry g;
  g.top = base;
  g.base = top;
  g.variant = Variant::General66;
  return g;
}

void LegMeasurements::validate() const {
  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(L[i]) || L[i] < 0)
      throw InputError("squared leg length L_" + std::to_string(i + 1) + " must be finite and nonnegative");
  }
  if (!(L[0] > 0)) throw InputError("L_1 must be positive");
}

template <class T>
Eigen::Matrix<T, 3, 3> BasicPose<T>::rotation() const {
  return cayley_rotation<T>(p);
}

template struct BasicPose<double>;
template struct BasicPose<cdouble>;

ComplexPose complexify(const Pose& pose) {
  ComplexPose c;
  c.p = pose.p.cast<cdouble>();
  c.t = pose.t.cast<cdouble>();
  return c;
}

Pose real_part(const ComplexPose& pose) {
  Pose r;
  r.p = pose.p.real();
  r.t = pose.t.real();
  return r;
}

}  // namespace sgp
