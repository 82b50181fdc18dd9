#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "sgp/cayley.hpp"
#include "sgp/errors.hpp"
#include "sgp/kinematics.hpp"
#include "sgp/pencil.hpp"
#include "sgp/structure.hpp"
#include "sgp/template_engine.hpp"

using namespace sgp;

namespace {

const TemplateStructure& S() { return standard_structure(); }

std::vector<Monomial> basic() {
  const int o = S().block_offset(ColumnBlock::Basic);
  return {S().columns.begin() + o, S().columns.end()};
}

std::vector<Monomial> reducible() {
  const int o = S().block_offset(ColumnBlock::Reducible);
  return {S().columns.begin() + o, S().columns.begin() + o + 38};
}

EliminatedBlocks eliminate(const PolynomialSystem& sys) {
  MacaulayMatrix M = assemble_macaulay(sys, S());
  return plu_eliminate(schur_reduce(M, S(), -sys[0].coefficient(Monomial::one())));
}

double pose_distance(const ComplexPose& a, const ComplexPose& b) {
  auto va = a.variables(), vb = b.variables();
  double d = 0;
  for (int k = 0; k < 6; ++k) d = std::max(d, std::abs(va[k] - vb[k]));
  return d;
}

// Largest distance from a root of `a` to its nearest root in `b`, over roots
// whose residual is below `cut`.
double set_distance(const SolutionSet& a, const SolutionSet& b, double cut) {
  double worst = 0;
  for (int i = 0; i < kNumRoots; ++i) {
    if (a.root(i).residual > cut) continue;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kNumRoots; ++j) best = std::min(best, pose_distance(a.root(i).pose, b.root(j).pose));
    double scale = 1;
    for (auto z : a.root(i).pose.variables()) scale = std::max(scale, std::abs(z));
    worst = std::max(worst, best / scale);
  }
  return worst;
}

}  // namespace

TEST_SUITE("pencil") {
  TEST_CASE("pencil rows follow the action map") {
    auto gt = test::ground_truth(Variant::General66, 5);
    EliminatedBlocks blk = eliminate(build_polynomial_system(gt.geom, gt.L));
    ActionPencil P = build_action_pencil(blk, S());
    REQUIRE(P.T0.rows() == 69);
    REQUIRE(P.T1.cols() == 69);

    // b = w^2 at position 65: w^2 / w = w is the last basic monomial.
    CHECK(P.T0.row(64).cwiseAbs().sum() == 1.0);
    CHECK(P.T0(64, 68) == 1.0);
    CHECK(P.T1.row(64).cwiseAbs().sum() == 1.0);
    CHECK(P.T1(64, 64) == 1.0);

    // b = w at position 69: w / w = 1 is reducible.
    const int j = S().action_map[68].index;
    CHECK((P.T0.row(68) + blk.AB.row(j)).norm() == 0.0);

    int identity_rows = 0, reduced_rows = 0;
    for (int i = 0; i < 69; ++i) {
      const bool id = P.T1.row(i).cwiseAbs().sum() == 1.0 && P.T1(i, i) == 1.0 && P.T0.row(i).cwiseAbs().sum() == 1.0;
      if (S().action_map[i].in_basic) {
        CHECK(id);
        ++identity_rows;
      } else {
        ++reduced_rows;
      }
    }
    CHECK(identity_rows == 31);
    CHECK(reduced_rows == 38);

    EliminatedBlocks wrong = blk;
    wrong.AB.conservativeResize(38, 68);
    CHECK_THROWS_AS(build_action_pencil(wrong, S()), StructureError);
  }

  TEST_CASE("true basic vectors lie in the pencil null space") {
    for (int k = 0; k < 5; ++k) {
      auto gt = test::ground_truth(Variant::General66, 6, k);
      EliminatedBlocks blk = eliminate(build_polynomial_system(gt.geom, gt.L));
      ActionPencil P = build_action_pencil(blk, S());
      const auto x = gt.pose.variables();
      const Eigen::VectorXd b = test::monomial_vector(basic(), x);
      const double w = x[2];
      const Eigen::VectorXd lhs = P.T1 * b / w, rhs = P.T0 * b;
      const double scale = (P.T1.cwiseAbs() * b.cwiseAbs() / std::abs(w) + P.T0.cwiseAbs() * b.cwiseAbs()).maxCoeff();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-7 * scale);
    }
  }

  TEST_CASE("QZ pairs satisfy the pencil equation") {
    auto gt = test::ground_truth(Variant::General66, 7);
    ActionPencil P = build_action_pencil(eliminate(build_polynomial_system(gt.geom, gt.L)), S());
    auto pairs = solve_pencil(P);
    REQUIRE(pairs.size() == 69);
    const double norm = P.T0.norm() + P.T1.norm();
    for (const auto& e : pairs) {
      CHECK(std::hypot(std::abs(e.alpha), e.beta) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(e.v.norm() == doctest::Approx(1.0).epsilon(1e-14));
      const Eigen::VectorXcd r = e.beta * P.T0.cast<cdouble>() * e.v - e.alpha * P.T1.cast<cdouble>() * e.v;
      CHECK(r.norm() <= 1e-10 * norm);
    }
  }

  TEST_CASE("extraction from constructed eigenvectors") {
    const auto B = basic();
    ComplexPose pose;
    pose.p = Vec3c(cdouble(0.3, 0.1), cdouble(-1.2, 0.4), cdouble(0.8, -0.2));
    pose.t = Vec3c(cdouble(1.5, 0), cdouble(-0.3, 0.7), cdouble(0.2, 0.2));
    const auto x = pose.variables();
    EigenPair e{cdouble(1, 0), 0.5, Eigen::VectorXcd(69)};
    for (int k = 0; k < 69; ++k) e.v(k) = B[k].evaluate(x);
    e.v *= cdouble(0.0, 3.0);
    EigenPair zero = e;
    zero.v(68) = 0;
    EigenPair tiny = e;
    tiny.v(68) = 1e-14 * e.v.norm();
    auto c = extract_candidates({e, zero, tiny}, S());
    REQUIRE(c.size() == 3);
    CHECK(c[0].valid);
    CHECK(pose_distance(c[0].pose, pose) < 1e-14);
    CHECK(std::abs(e.v(64) / e.v(68) - pose.p(2)) < 1e-14);
    CHECK_FALSE(c[1].valid);
    CHECK_FALSE(c[2].valid);
  }

  TEST_CASE("realness classification") {
    ComplexPose p;
    p.p = Vec3c(1, 2, 3);
    p.t = Vec3c(cdouble(4, 1e-9), 5, 6);
    CHECK(is_real_pose(p));
    p.t(0) = cdouble(4, 1e-4);
    CHECK_FALSE(is_real_pose(p));
  }

  TEST_CASE("filtering keeps the 40 smallest residuals") {
    auto gt = test::ground_truth(Variant::General66, 8);
    PolynomialSystem sys = build_polynomial_system(gt.geom, gt.L);
    SolutionSet sol = solve_system(sys, S());
    REQUIRE(sol.accepted.size() == 40);
    std::vector<double> all;
    for (const auto& c : sol.candidates)
      if (c.valid) all.push_back(c.residual);
    std::sort(all.begin(), all.end());
    for (int k = 0; k < 40; ++k) CHECK(sol.root(k).residual == all[k]);
    CHECK(sol.gap == doctest::Approx(std::log10(all[39]) - std::log10(all[40])));
    CHECK(sol.gap < -4);
    CHECK(sol.real_count() % 2 == 0);
    CHECK(sol.conjugate_closed());
    for (int k = 0; k < 40; ++k) {
      const int q = sol.partner[k];
      REQUIRE(q >= 0);
      CHECK(sol.partner[q] == k);
      if (q == k) CHECK(sol.root(k).real);
      if (sol.root(k).real) CHECK(sol.root(k).pose.p.imag().norm() == 0.0);
    }
  }

  TEST_CASE("too few valid candidates is a degenerate instance") {
    auto gt = test::ground_truth(Variant::General66, 9);
    PolynomialSystem sys = build_polynomial_system(gt.geom, gt.L);
    std::vector<Candidate> c(69);
    for (int k = 0; k < 39; ++k) {
      c[k].valid = true;
      c[k].pose = complexify(gt.pose);
    }
    CHECK_THROWS_AS(filter_roots(sys, c), DegenerateInstanceError);
    c[50].valid = true;
    CHECK_NOTHROW(filter_roots(sys, c));
  }

  TEST_CASE("ground truth is recovered for every variant") {
    for (int v = 0; v < 3; ++v) {
      for (int k = 0; k < 4; ++k) {
        auto gt = test::ground_truth(static_cast<Variant>(v), 10 + v, k);
        SolutionSet sol = forward_kinematics(gt.geom, gt.L);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 40; ++i)
          if (sol.root(i).real) best = std::min(best, pose_distance(sol.root(i).pose, complexify(gt.pose)));
        CHECK(best < 1e-6 * (1 + gt.pose.p.norm() + gt.pose.t.norm()));
        CHECK(sol.timings.total_ms > 0);
        CHECK(sol.timings.template_ms + sol.timings.plu_ms + sol.timings.qz_ms + sol.timings.filter_ms <=
              sol.timings.total_ms * 1.001);
      }
    }
  }

  TEST_CASE("scaling one polynomial leaves the roots unchanged") {
    auto gt = test::ground_truth(Variant::General66, 14);
    PolynomialSystem sys = build_polynomial_system(gt.geom, gt.L);
    SolutionSet a = solve_system(sys, S());
    for (int j = 1; j < 6; ++j) {
      SolutionSet b = solve_system(sys.scaled(j, j % 2 ? 3.7 : -0.02), S());
      CHECK(set_distance(a, b, 1e-9) < 1e-8);
      CHECK(set_distance(b, a, 1e-9) < 1e-8);
    }
  }

  TEST_CASE("swapped platforms give the inverse poses") {
    int checked = 0;
    for (int k = 0; checked < 3 && k < 60; ++k) {
      auto gt = test::ground_truth(Variant::General66, 15, k);
      SolutionSet a = forward_kinematics(gt.geom, gt.L);
      SolutionSet b = forward_kinematics(gt.geom.swapped(), gt.L);
      CHECK(a.real_count() == b.real_count());
      for (int i = 0; i < 40; ++i) {
        if (!a.root(i).real) continue;
        Pose r = real_part(a.root(i).pose);
        ComplexPose inv = complexify(Pose{-r.p, -r.rotation().transpose() * r.t});
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 40; ++j) best = std::min(best, pose_distance(inv, b.root(j).pose));
        CHECK(best < 1e-5 * (1 + r.p.norm() + r.t.norm()));
        ++checked;
      }
    }
    CHECK(checked > 0);
  }

  TEST_CASE("uniform rescaling of the instance scales translations") {
    auto gt = test::ground_truth(Variant::General66, 16);
    SolutionSet a = forward_kinematics(gt.geom, gt.L);
    const double s = 2.5;
    PlatformGeometry g = gt.geom;
    LegMeasurements L = gt.L;
    for (int i = 0; i < 6; ++i) {
      g.top[i] *= s;
      g.base[i] *= s;
      L.L[i] *= s * s;
    }
    SolutionSet b = forward_kinematics(g, L);
    for (int i = 0; i < 40; ++i) {
      if (a.root(i).residual > 1e-9) continue;
      ComplexPose expect = a.root(i).pose;
      expect.t *= s;
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < 40; ++j) best = std::min(best, pose_distance(expect, b.root(j).pose));
      double scale = 1;
      for (auto z : expect.variables()) scale = std::max(scale, std::abs(z));
      CHECK(best < 1e-6 * scale);
    }
  }

  TEST_CASE("frame conditioning maps roots back to the input frames") {
    const Mat3& Qb = conditioning_base_rotation();
    const Mat3& Qt = conditioning_top_rotation();
    CHECK((Qb.transpose() * Qb - Mat3::Identity()).norm() < 1e-14);
    CHECK((Qt.transpose() * Qt - Mat3::Identity()).norm() < 1e-14);
    auto gt = test::ground_truth(Variant::General66, 17);
    SolutionSet sol = forward_kinematics(gt.geom, gt.L);
    PolynomialSystem sys = build_polynomial_system(gt.geom, gt.L);
    for (int i = 0; i < 40; ++i)
      if (sol.root(i).residual < 1e-10) CHECK(normalized_residual(sys, sol.root(i).pose) < 1e-7);
    SolveOptions raw;
    raw.frame_conditioning = false;
    SolutionSet plain = forward_kinematics(gt.geom, gt.L, raw);
    CHECK(set_distance(sol, plain, 1e-10) < 1e-6);
  }

  TEST_CASE("offline Schur path solves identically to back substitution") {
    auto gt = test::ground_truth(Variant::Coincident65, 18);
    SolveOptions o;
    o.schur_path = SchurPath::OfflineSeries;
    SolutionSet a = forward_kinematics(gt.geom, gt.L);
    SolutionSet b = forward_kinematics(gt.geom, gt.L, o);
    CHECK(set_distance(a, b, 1e-9) < 1e-8);
  }

  TEST_CASE("newton polishing lowers residuals") {
    auto gt = test::ground_truth(Variant::SemiPlanar6P6, 19);
    SolutionSet a = forward_kinematics(gt.geom, gt.L);
    SolveOptions o;
    o.polish_iterations = 3;
    SolutionSet b = forward_kinematics(gt.geom, gt.L, o);
    REQUIRE(b.accepted == a.accepted);
    for (int i = 0; i < 40; ++i) {
      CHECK(b.root(i).residual <= a.root(i).residual);
      CHECK(b.root(i).real == a.root(i).real);
    }
  }

  TEST_CASE("invalid inputs are rejected before solving") {
    auto gt = test::ground_truth(Variant::General66, 20);
    LegMeasurements L = gt.L;
    L.L[0] = 0;
    CHECK_THROWS_AS(forward_kinematics(gt.geom, L), InputError);
    PlatformGeometry g = gt.geom;
    g.top[0] = Vec3(1, 0, 0);
    CHECK_THROWS_AS(forward_kinematics(g, gt.L), InputError);
  }
}
