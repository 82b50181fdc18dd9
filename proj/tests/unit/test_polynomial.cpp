#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "sgp/errors.hpp"
#include "sgp/polynomial.hpp"

using namespace sgp;

namespace {

Polynomial random_polynomial(std::mt19937& g, int terms, int max_exp = 2) {
  std::uniform_int_distribution<int> de(0, max_exp);
  std::normal_distribution<double> dc;
  std::vector<Term> t;
  for (int k = 0; k < terms; ++k) {
    std::array<int, kNumVars> e{};
    for (auto& x : e) x = de(g);
    t.push_back({Monomial::from_exponents(e), dc(g)});
  }
  return Polynomial(t);
}

std::array<double, 6> random_point(std::mt19937& g) {
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  std::array<double, 6> x;
  for (auto& v : x) v = d(g);
  return x;
}

}  // namespace

TEST_SUITE("polynomial") {
  TEST_CASE("terms are sorted, merged and pruned") {
    Polynomial p({{Monomial::parse("x"), 1.0}, {Monomial::parse("u^2"), 2.0}, {Monomial::parse("x"), -1.0},
                  {Monomial::one(), 3.0}, {Monomial::parse("u^2"), 0.5}});
    REQUIRE(p.size() == 2);
    CHECK(p.terms()[0].m == Monomial::parse("u^2"));
    CHECK(p.terms()[0].c == 2.5);
    CHECK(p.terms()[1].m == Monomial::one());
    CHECK(p.coefficient(Monomial::parse("x")) == 0.0);
    CHECK(p.degree() == 2);
    CHECK(p.max_abs_coefficient() == 3.0);
    CHECK(Polynomial().degree() <= 0);
  }

  TEST_CASE("non-finite coefficients are rejected") {
    CHECK_THROWS_AS(Polynomial({{Monomial::one(), std::nan("")}}), InputError);
    CHECK_THROWS_AS(Polynomial({{Monomial::one(), std::numeric_limits<double>::infinity()}}), InputError);
  }

  TEST_CASE("construction is independent of term order") {
    std::mt19937 g(21);
    std::normal_distribution<double> dc;
    std::vector<Term> t;
    for (int k = 0; k < 60; ++k) t.push_back({Monomial::variable(k % 6, k % 3), dc(g)});
    Polynomial ref(t);
    for (int rep = 0; rep < 20; ++rep) {
      std::shuffle(t.begin(), t.end(), g);
      Polynomial p(t);
      REQUIRE(p.size() == ref.size());
      for (std::size_t k = 0; k < p.size(); ++k) {
        CHECK(p.terms()[k].m == ref.terms()[k].m);
        CHECK(p.terms()[k].c == ref.terms()[k].c);
      }
    }
  }

  TEST_CASE("arithmetic is a ring homomorphism under evaluation") {
    std::mt19937 g(23);
    for (int rep = 0; rep < 50; ++rep) {
      Polynomial a = random_polynomial(g, 8), b = random_polynomial(g, 8);
      auto x = random_point(g);
      const double av = a.evaluate(x), bv = b.evaluate(x);
      const double tol = 1e-11 * (1 + std::abs(av) + std::abs(bv)) * (1 + std::abs(av * bv));
      CHECK(std::abs((a + b).evaluate(x) - (av + bv)) < tol);
      CHECK(std::abs((a - b).evaluate(x) - (av - bv)) < tol);
      CHECK(std::abs((a * b).evaluate(x) - av * bv) < tol);
      CHECK(std::abs(a.scaled(-2.5).evaluate(x) + 2.5 * av) < tol);
      CHECK((a - a).empty());
    }
  }

  TEST_CASE("variables and constants") {
    std::array<double, 6> x{1, 2, 3, 4, 5, 6};
    for (int i = 0; i < 6; ++i) CHECK(Polynomial::variable(i).evaluate(x) == x[i]);
    CHECK(Polynomial::constant(-7).evaluate(x) == -7);
    CHECK(Polynomial::constant(0).empty());
  }

  TEST_CASE("derivative agrees with central differences") {
    std::mt19937 g(29);
    for (int rep = 0; rep < 30; ++rep) {
      Polynomial p = random_polynomial(g, 10, 3);
      auto x = random_point(g);
      for (int i = 0; i < 6; ++i) {
        const double h = 1e-5;
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2 * h);
        CHECK(p.derivative(i).evaluate(x) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }

  TEST_CASE("system support union and normalized Macaulay matrix") {
    std::mt19937 g(31);
    std::array<Polynomial, 6> polys;
    for (auto& p : polys) p = random_polynomial(g, 12);
    PolynomialSystem S(polys);
    const auto& U = S.support_union();
    CHECK(std::is_sorted(U.begin(), U.end(), GrevlexDescending()));
    for (std::size_t k = 1; k < U.size(); ++k) CHECK(U[k - 1] != U[k]);
    for (const auto& p : polys)
      for (const auto& t : p.terms()) CHECK(std::find(U.begin(), U.end(), t.m) != U.end());
    const auto& N = S.normalized_macaulay();
    REQUIRE(N.rows() == 6);
    REQUIRE(N.cols() == static_cast<long>(U.size()));
    for (int j = 0; j < 6; ++j) {
      CHECK(N.row(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
      const double s = polys[j].terms()[0].c / N(j, std::find(U.begin(), U.end(), polys[j].terms()[0].m) - U.begin());
      for (std::size_t k = 0; k < U.size(); ++k) CHECK(std::abs(N(j, k) * s - polys[j].coefficient(U[k])) < 1e-12 * std::abs(s));
    }
  }

  TEST_CASE("scaling one polynomial keeps the normalized rows") {
    std::mt19937 g(37);
    std::array<Polynomial, 6> polys;
    for (auto& p : polys) p = random_polynomial(g, 12);
    PolynomialSystem S(polys);
    PolynomialSystem T = S.scaled(3, 4.0);
    auto x = random_point(g);
    CHECK(T[3].evaluate(x) == doctest::Approx(4.0 * S[3].evaluate(x)).epsilon(1e-14));
    CHECK(T[2].evaluate(x) == S[2].evaluate(x));
    CHECK((T.normalized_macaulay() - S.normalized_macaulay()).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("a zero polynomial cannot be normalized") {
    std::array<Polynomial, 6> polys;
    for (int j = 0; j < 5; ++j) polys[j] = Polynomial::variable(j);
    CHECK_THROWS_AS(PolynomialSystem{polys}, InputError);
  }
}
