#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "sgp/shift_tables.hpp"
#include "sgp/errors.hpp"
#include "sgp/kinematics.hpp"
#include "sgp/structure.hpp"
#include "sgp/template_engine.hpp"

using namespace sgp;

namespace {

const TemplateStructure& S() { return standard_structure(); }

bool contains(const std::vector<Monomial>& v, const Monomial& m) { return std::find(v.begin(), v.end(), m) != v.end(); }

std::vector<Monomial> block(ColumnBlock b) {
  const int o = S().block_offset(b);
  return {S().columns.begin() + o, S().columns.begin() + o + S().block_size(b)};
}

PolynomialSystem system_for(Variant v, std::uint64_t seed) {
  auto gt = test::ground_truth(v, seed);
  return build_polynomial_system(gt.geom, gt.L);
}

}  // namespace

TEST_SUITE("structure") {
  TEST_CASE("shift and basic tables") {
    ShiftTables t = load_shift_tables();
    for (int j = 0; j < 6; ++j) {
      CHECK(t.shifts[j].size() == kShiftSetSizes[j]);
      CHECK(contains(t.shifts[j], Monomial::one()));
      std::set<std::uint64_t> keys;
      for (const auto& m : t.shifts[j]) CHECK(keys.insert(m.key()).second);
    }
    CHECK(contains(t.shifts[1], Monomial::parse("zwv")));
    CHECK_FALSE(contains(t.shifts[2], Monomial::parse("zwv")));
    REQUIRE(t.basic.size() == kBasicSetSize);
    const char* tail[] = {"uw", "vw", "w^2", "xw", "yw", "zw", "w"};
    for (int k = 0; k < 7; ++k) CHECK(t.basic[62 + k] == Monomial::parse(tail[k]));
    for (const auto& b : t.basic) {
      CHECK(b.divisible_by(t.action_divisor));
      CHECK(b[3] <= 1);
    }
  }

  TEST_CASE("corrupted tables are rejected") {
    ShiftTables good = load_shift_tables();
    CHECK_NOTHROW(validate_tables(good));

    ShiftTables t = good;
    t.shifts[3].pop_back();
    CHECK_THROWS_AS(validate_tables(t), StructureError);

    t = good;
    t.shifts[0][5] = t.shifts[0][6];
    CHECK_THROWS_AS(validate_tables(t), StructureError);

    t = good;
    t.basic[10] = Monomial::parse("u^3");
    CHECK_THROWS_AS(validate_tables(t), StructureError);

    t = good;
    t.basic[3] = t.basic[4];
    CHECK_THROWS_AS(validate_tables(t), StructureError);

    CHECK_THROWS_AS(build_structure(t, system_for(Variant::General66, 1)), StructureError);
  }

  TEST_CASE("dimensions and self check") {
    CHECK(S().check().empty());
    CHECK(S().num_rows() == 511);
    CHECK(S().num_template_cols() == 580);
    CHECK(S().sizes == std::array<int, 4>{218, 255, 38, 69});
    CHECK(S().num_rows() - S().sizes[0] == 293);
    CHECK(S().num_template_cols() - S().sizes[0] == 362);
    CHECK(S().series_degree == 2);
  }

  TEST_CASE("column partition") {
    std::set<std::uint64_t> all;
    for (const auto& m : S().columns) CHECK(all.insert(m.key()).second);
    for (const auto& m : S().dropped) CHECK(all.insert(m.key()).second);
    CHECK(all.size() == S().full_universe_size());

    // Eliminated columns are x^2 times the A_1 shifts in decreasing x-degree.
    const auto elim = block(ColumnBlock::Eliminated);
    const auto& A1 = S().tables.shifts[0];
    for (const auto& m : A1) CHECK(contains(elim, m * Monomial::variable(3, 2)));
    for (std::size_t k = 1; k < elim.size(); ++k) CHECK(elim[k - 1][3] >= elim[k][3]);

    const auto B = block(ColumnBlock::Basic);
    CHECK(B == S().tables.basic);

    // R re-derived by division: {b / w} \ B.
    std::set<std::uint64_t> Rkeys;
    int in_b = 0;
    for (const auto& b : B) {
      Monomial q = *b.divide(Monomial::variable(2));
      if (contains(B, q))
        ++in_b;
      else
        Rkeys.insert(q.key());
    }
    CHECK(in_b == 31);
    CHECK(Rkeys.size() == 38);
    const auto R = block(ColumnBlock::Reducible);
    for (const auto& r : R) {
      CHECK(Rkeys.count(r.key()) == 1);
      CHECK(r[3] <= 1);
    }
    CHECK(std::is_sorted(R.begin(), R.end(), GrevlexDescending()));
    const auto E = block(ColumnBlock::Excessive);
    CHECK(std::is_sorted(E.begin(), E.end(), GrevlexDescending()));

    for (int c = 0; c < S().num_template_cols(); ++c) CHECK(S().column_index(S().column(c)) == c);
    CHECK(S().column_index(Monomial::parse("u^9")) == -1);
  }

  TEST_CASE("f_1 shifts land in the column universe") {
    for (const auto& m : S().tables.shifts[0])
      for (const char* s : {"x^2", "y^2", "z^2", "1"}) CHECK(S().column_index(m * Monomial::parse(s)) >= 0);
  }

  TEST_CASE("action map") {
    const auto R = block(ColumnBlock::Reducible);
    const auto B = block(ColumnBlock::Basic);
    REQUIRE(S().action_map.size() == 69);
    int rows_r = 0;
    for (int i = 0; i < 69; ++i) {
      const ActionEntry& a = S().action_map[i];
      const Monomial q = *B[i].divide(Monomial::variable(2));
      if (a.in_basic) {
        CHECK(B[a.index] == q);
      } else {
        CHECK(R[a.index] == q);
        ++rows_r;
      }
    }
    CHECK(rows_r == 38);
    const ActionEntry aw = S().action_map[68];
    CHECK_FALSE(aw.in_basic);
    CHECK(R[aw.index].is_one());
    const ActionEntry aw2 = S().action_map[64];
    CHECK(aw2.in_basic);
    CHECK(aw2.index == 68);
  }

  TEST_CASE("dropped columns classified on the probe behave the same on other instances") {
    for (int v = 0; v < 3; ++v) {
      for (std::uint64_t seed : {101u, 202u}) {
        PolynomialSystem sys = system_for(static_cast<Variant>(v), seed + v);
        MacaulayMatrix M = assemble_macaulay(sys, S());
        ReducedTemplate T = schur_reduce(M, S(), -sys[0].coefficient(Monomial::one()), SchurPath::BackSubstitution, true);
        const double scale = T.mhat.cwiseAbs().maxCoeff();
        REQUIRE(T.dropped.cols() == static_cast<long>(S().dropped.size()));
        CHECK(T.dropped.leftCols(S().dropped_zero).cwiseAbs().maxCoeff() <= 1e-12 * scale);

        // The kept excessive block has full column rank.
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(T.mhat.leftCols(255));
        qr.setThreshold(1e-10);
        CHECK(qr.rank() == 255);
        // Every dependent column lies in the span of the kept block.
        Eigen::MatrixXd D = T.dropped.rightCols(T.dropped.cols() - S().dropped_zero);
        Eigen::MatrixXd X = qr.solve(D);
        CHECK((T.mhat.leftCols(255) * X - D).norm() <= 1e-8 * D.norm());
      }
    }
  }

  TEST_CASE("the partition is stable across probe instances") {
    for (int v = 0; v < 3; ++v) {
      TemplateStructure other = build_structure(load_shift_tables(), system_for(static_cast<Variant>(v), 999 + v));
      // Which dependent excessive columns are dropped is a pivoting choice, but
      // the vanishing columns and the E, R, B blocks taken together are not.
      CHECK(other.dropped_zero == S().dropped_zero);
      auto keys = [](auto first, auto last) {
        std::set<std::uint64_t> k;
        for (auto it = first; it != last; ++it) k.insert(it->key());
        return k;
      };
      CHECK(keys(other.dropped.begin(), other.dropped.begin() + other.dropped_zero) ==
            keys(S().dropped.begin(), S().dropped.begin() + S().dropped_zero));
      CHECK(std::equal(other.columns.begin(), other.columns.begin() + 218, S().columns.begin()));
      CHECK(std::equal(other.columns.begin() + 473, other.columns.end(), S().columns.begin() + 473));
      auto E_other = keys(other.columns.begin() + 218, other.columns.begin() + 473);
      auto E_std = keys(S().columns.begin() + 218, S().columns.begin() + 473);
      for (auto it = other.dropped.begin() + other.dropped_zero; it != other.dropped.end(); ++it) E_other.insert(it->key());
      for (auto it = S().dropped.begin() + S().dropped_zero; it != S().dropped.end(); ++it) E_std.insert(it->key());
      CHECK(E_other == E_std);
      CHECK(other.check().empty());
    }
  }

  TEST_CASE("generic supports") {
    CHECK(S().generic_support[0].size() == 4);
    for (int j = 1; j < 6; ++j)
      for (const auto& m : S().generic_support[j]) CHECK(m.degree() <= 4);
    CHECK(S().generic_term_index(0, Monomial::parse("x^2")) >= 0);
    CHECK(S().generic_term_index(0, Monomial::parse("u")) == -1);
  }
}
