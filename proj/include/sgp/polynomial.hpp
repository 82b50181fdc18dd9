#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "sgp/monomial.hpp"

namespace sgp {

struct Term {
  Monomial m;
  double c;
};

// Sparse polynomial with terms kept in descending grevlex order. Like terms
// are combined after sorting by (monomial, coefficient), so the result does
// not depend on the order in which terms were supplied.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms);

  static Polynomial constant(double c);
  static Polynomial variable(int i);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  int degree() const;
  double coefficient(const Monomial& m) const;
  double max_abs_coefficient() const;
  std::vector<Monomial> support() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(double s) const;
  Polynomial derivative(int var) const;

  template <class T>
  T evaluate(const std::array<T, kNumVars>& vals) const {
    T acc(0);
    for (const auto& t : terms_) acc += t.c * t.m.evaluate(vals);
    return acc;
  }

private:
  std::vector<Term> terms_;
};

// The six polynomials f_1..f_6 together with their support union U_F and
// the row-normalized 6 x |U_F| coefficient matrix used for residuals.
class PolynomialSystem {
public:
  explicit PolynomialSystem(std::array<Polynomial, 6> polys);

  const Polynomial& operator[](int j) const { return polys_[j]; }
  const std::array<Polynomial, 6>& polynomials() const { return polys_; }
  const std::vector<Monomial>& support_union() const { return support_; }
  const Eigen::MatrixXd& normalized_macaulay() const { return normalized_; }

  PolynomialSystem scaled(int j, double c) const;

private:
  std::array<Polynomial, 6> polys_;
  std::vector<Monomial> support_;
  Eigen::MatrixXd normalized_;
};

}  // namespace sgp
