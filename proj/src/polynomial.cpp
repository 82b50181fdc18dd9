#include "sgp/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sgp/errors.hpp"

namespace sgp {

Polynomial::Polynomial(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.m != b.m) return grevlex_greater(a.m, b.m);
    return a.c < b.c;
  });
  for (const auto& t : terms) {
    if (!std::isfinite(t.c)) throw InputError("non-finite polynomial coefficient");
    if (!terms_.empty() && terms_.back().m == t.m)
      terms_.back().c += t.c;
    else
      terms_.push_back(t);
  }
  std::erase_if(terms_, [](const Term& t) { return t.c == 0.0; });
}

Polynomial Polynomial::constant(double c) { return Polynomial({{Monomial::one(), c}}); }

Polynomial Polynomial::variable(int i) { return Polynomial({{Monomial::variable(i), 1.0}}); }

int Polynomial::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.m.degree());
  return d;
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return grevlex_greater(t.m, x); });
  return (it != terms_.end() && it->m == m) ? it->c : 0.0;
}

double Polynomial::max_abs_coefficient() const {
  double r = 0;
  for (const auto& t : terms_) r = std::max(r, std::abs(t.c));
  return r;
}

std::vector<Monomial> Polynomial::support() const {
  std::vector<Monomial> s;
  s.reserve(terms_.size());
  for (const auto& t : terms_) s.push_back(t.m);
  return s;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<Term> all;
  all.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) all.push_back({a.m * b.m, a.c * b.c});
  return Polynomial(std::move(all));
}

Polynomial Polynomial::scaled(double s) const {
  std::vector<Term> all = terms_;
  for (auto& t : all) t.c *= s;
  return Polynomial(std::move(all));
}

PolynomialSystem::PolynomialSystem(std::array<Polynomial, 6> polys) : polys_(std::move(polys)) {
  std::map<Monomial, int, GrevlexDescending> cols;
  for (const auto& f : polys_)
    for (const auto& t : f.terms()) cols.emplace(t.m, 0);
  int k = 0;
  for (auto& [m, idx] : cols) {
    idx = k++;
    support_.push_back(m);
  }
  normalized_ = Eigen::MatrixXd::Zero(6, k);
  for (int j = 0; j < 6; ++j) {
    for (const auto& t : polys_[j].terms()) normalized_(j, cols[t.m]) = t.c;
    double n = normalized_.row(j).norm();
    if (n == 0.0) throw InputError("polynomial f_" + std::to_string(j + 1) + " is identically zero");
    normalized_.row(j) /= n;
  }
}

PolynomialSystem PolynomialSystem::scaled(int j, double c) const {
  auto polys = polys_;
  polys.at(j) = polys[j].scaled(c);
  return PolynomialSystem(std::move(polys));
}

Polynomial Polynomial::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const int e = t.m.e[var];
    if (e == 0) continue;
    Monomial m = t.m;
    m.e[var] = static_cast<std::uint8_t>(e - 1);
    out.push_back({m, t.c * e});
  }
  return Polynomial(std::move(out));
}

}  // namespace sgp
