#pragma once

#include <Eigen/Dense>

namespace sgp {

// R = (I - [p]x)(I + [p]x)^-1 for real or complex p.
template <class T>
Eigen::Matrix<T, 3, 3> cayley_rotation(const Eigen::Matrix<T, 3, 1>& p);

// Inverse chart p = (R23 - R32, R31 - R13, R12 - R21) / (1 + tr R).
// Rotations by pi (1 + tr R = 0) are not representable.
template <class T>
Eigen::Matrix<T, 3, 1> inverse_cayley(const Eigen::Matrix<T, 3, 3>& R, double tol = 1e-12);

template <class T>
Eigen::Matrix<T, 3, 3> skew(const Eigen::Matrix<T, 3, 1>& a) {
  Eigen::Matrix<T, 3, 3> S;
  S << T(0), -a(2), a(1),
       a(2), T(0), -a(0),
       -a(1), a(0), T(0);
  return S;
}

}  // namespace sgp
