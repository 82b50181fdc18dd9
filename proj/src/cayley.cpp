#include "sgp/cayley.hpp"

#include <complex>

#include "sgp/errors.hpp"

namespace sgp {

template <class T>
Eigen::Matrix<T, 3, 3> cayley_rotation(const Eigen::Matrix<T, 3, 1>& p) {
  // p.p without conjugation, so the formula stays polynomial for complex p.
  T pp = p(0) * p(0) + p(1) * p(1) + p(2) * p(2);
  T n = T(1) + pp;
  if (std::abs(n) < 1e-14)
    throw SingularParametrizationError("Cayley parameters with 1 + p.p = 0");
  Eigen::Matrix<T, 3, 3> Q = (T(1) - pp) * Eigen::Matrix<T, 3, 3>::Identity() +
                             T(2) * p * p.transpose() - T(2) * skew<T>(p);
  return Q / n;
}

template <class T>
Eigen::Matrix<T, 3, 1> inverse_cayley(const Eigen::Matrix<T, 3, 3>& R, double tol) {
  T d = T(1) + R.trace();
  if (std::abs(d) < tol)
    throw SingularParametrizationError("rotation by pi is outside the Cayley chart");
  Eigen::Matrix<T, 3, 1> p(R(1, 2) - R(2, 1), R(2, 0) - R(0, 2), R(0, 1) - R(1, 0));
  return p / d;
}

template Eigen::Matrix3d cayley_rotation<double>(const Eigen::Vector3d&);
template Eigen::Matrix<std::complex<double>, 3, 3> cayley_rotation<std::complex<double>>(
    const Eigen::Matrix<std::complex<double>, 3, 1>&);
template Eigen::Vector3d inverse_cayley<double>(const Eigen::Matrix3d&, double);
template Eigen::Matrix<std::complex<double>, 3, 1> inverse_cayley<std::complex<double>>(
    const Eigen::Matrix<std::complex<double>, 3, 3>&, double);

}  // namespace sgp
