#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace sgp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using cdouble = std::complex<double>;
using Vec3c = Eigen::Matrix<cdouble, 3, 1>;
using Mat3c = Eigen::Matrix<cdouble, 3, 3>;

enum class Variant { General66, Coincident65, SemiPlanar6P6 };

std::string variant_name(Variant v);
// Accepts "66", "65", "6p6" and the enumerator names.
Variant parse_variant(std::string_view s);

struct PlatformGeometry {
  std::array<Vec3, 6> top;   // x_i in the moving frame
  std::array<Vec3, 6> base;  // X_i in the fixed frame
  Variant variant = Variant::General66;

  // Throws InputError naming the violated invariant.
  void validate() const;
  // Exchanges the roles of the two platforms.
  PlatformGeometry swapped() const;
};

struct LegMeasurements {
  std::array<double, 6> L{};  // squared leg lengths

  void validate() const;
};

template <class T>
struct BasicPose {
  Eigen::Matrix<T, 3, 1> p = Eigen::Matrix<T, 3, 1>::Zero();
  Eigen::Matrix<T, 3, 1> t = Eigen::Matrix<T, 3, 1>::Zero();

  Eigen::Matrix<T, 3, 3> rotation() const;
  // Values of (u, v, w, x, y, z).
  std::array<T, 6> variables() const { return {p(0), p(1), p(2), t(0), t(1), t(2)}; }
};

using Pose = BasicPose<double>;
using ComplexPose = BasicPose<cdouble>;

ComplexPose complexify(const Pose& pose);
Pose real_part(const ComplexPose& pose);

}  // namespace sgp
