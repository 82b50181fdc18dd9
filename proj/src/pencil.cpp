#include "sgp/pencil.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include <lapacke.h>

#include "sgp/cayley.hpp"
#include "sgp/errors.hpp"
#include "sgp/kinematics.hpp"

namespace sgp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double conjugate_distance(const ComplexPose& a, const ComplexPose& b) {
  auto va = a.variables();
  auto vb = b.variables();
  double d = 0, s = 1;
  for (int k = 0; k < 6; ++k) {
    d = std::max(d, std::abs(va[k] - std::conj(vb[k])));
    s = std::max(s, std::abs(va[k]));
  }
  return d / s;
}

}  // namespace

ActionPencil build_action_pencil(const EliminatedBlocks& blocks, const TemplateStructure& structure) {
  const int nb = structure.sizes[3];
  const int nr = structure.sizes[2];
  if (static_cast<int>(structure.action_map.size()) != nb)
    throw StructureError("action map has " + std::to_string(structure.action_map.size()) + " entries, expected " +
                             std::to_string(nb),
                         Stage::Qz);
  if (blocks.AR.rows() != nr || blocks.AR.cols() != nr || blocks.AB.rows() != nr || blocks.AB.cols() != nb)
    throw StructureError("eliminated blocks have the wrong shape", Stage::Qz);

  ActionPencil P;
  P.T0 = Eigen::MatrixXd::Zero(nb, nb);
  P.T1 = Eigen::MatrixXd::Zero(nb, nb);
  for (int i = 0; i < nb; ++i) {
    const ActionEntry& a = structure.action_map[i];
    if (a.in_basic) {
      P.T0(i, a.index) = 1.0;
      P.T1(i, i) = 1.0;
      continue;
    }
    P.T0.row(i) = -blocks.AB.row(a.index);
    for (int k = 0; k < nb; ++k) {
      const ActionEntry& ak = structure.action_map[k];
      if (!ak.in_basic) P.T1(i, k) = blocks.AR(a.index, ak.index);
    }
  }
  return P;
}

std::vector<EigenPair> solve_pencil(const ActionPencil& pencil) {
  const int n = static_cast<int>(pencil.T0.rows());
  Eigen::MatrixXd A = pencil.T0, B = pencil.T1, VR(n, n);
  std::vector<double> ar(n), ai(n), be(n);
  double dummy = 0;
  lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', n, A.data(), n, B.data(), n, ar.data(), ai.data(),
                                  be.data(), &dummy, 1, VR.data(), n);
  if (info != 0) throw SolverFailureError("QZ iteration failed (dggev info " + std::to_string(info) + ")", Stage::Qz);

  std::vector<EigenPair> pairs(n);
  for (int j = 0; j < n; ++j) {
    EigenPair& e = pairs[j];
    e.alpha = cdouble(ar[j], ai[j]);
    e.beta = be[j];
    if (ai[j] == 0.0) {
      e.v = VR.col(j).cast<cdouble>();
    } else if (ai[j] > 0.0 && j + 1 < n) {
      e.v = VR.col(j).cast<cdouble>() + cdouble(0, 1) * VR.col(j + 1).cast<cdouble>();
    } else {
      e.v = pairs[j - 1].v.conjugate();
    }
    double s = std::hypot(std::abs(e.alpha), e.beta);
    if (!(s > 0)) throw SolverFailureError("singular pencil: alpha = beta = 0", Stage::Qz);
    e.alpha /= s;
    e.beta /= s;
    double nv = e.v.norm();
    if (nv > 0) e.v /= nv;
  }
  return pairs;
}

std::vector<Candidate> extract_candidates(const std::vector<EigenPair>& pairs, const TemplateStructure& structure) {
  const int ob = structure.block_offset(ColumnBlock::Basic);
  auto pos = [&](const char* name) {
    int c = structure.column_index(Monomial::parse(name));
    if (c < ob || c >= ob + structure.sizes[3])
      throw StructureError(std::string("monomial ") + name + " is not basic", Stage::Qz);
    return c - ob;
  };
  const int iu = pos("uw"), iv = pos("vw"), iw2 = pos("w^2"), ix = pos("xw"), iy = pos("yw"), iz = pos("zw"),
            iw = pos("w");

  std::vector<Candidate> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& v = pairs[k].v;
    Candidate& c = out[k];
    const cdouble d = v(iw);
    if (!(std::abs(d) >= 1e-12 * v.norm())) continue;
    c.pose.p = Vec3c(v(iu), v(iv), v(iw2)) / d;
    c.pose.t = Vec3c(v(ix), v(iy), v(iz)) / d;
    c.valid = c.pose.p.allFinite() && c.pose.t.allFinite();
  }
  return out;
}

bool is_real_pose(const ComplexPose& pose, double tol) {
  double im = 0, re = 0;
  for (const auto& z : pose.variables()) {
    im = std::max(im, std::abs(z.imag()));
    re = std::max(re, std::abs(z.real()));
  }
  return im <= tol * (1.0 + re);
}

int SolutionSet::real_count() const {
  int n = 0;
  for (int a : accepted) n += candidates[a].real ? 1 : 0;
  return n;
}

bool SolutionSet::conjugate_closed() const {
  for (std::size_t k = 0; k < partner.size(); ++k)
    if (partner[k] < 0) return false;
  return true;
}

std::vector<double> SolutionSet::accepted_residuals() const {
  std::vector<double> r;
  for (int a : accepted) r.push_back(candidates[a].residual);
  return r;
}

SolutionSet filter_roots(const PolynomialSystem& system, std::vector<Candidate> candidates) {
  SolutionSet S;
  std::vector<int> order;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    Candidate& c = candidates[k];
    if (!c.valid) continue;
    c.residual = normalized_residual(system, c.pose);
    if (!std::isfinite(c.residual)) {
      c.valid = false;
      continue;
    }
    c.real = is_real_pose(c.pose);
    if (c.real) {
      c.pose.p = c.pose.p.real().cast<cdouble>();
      c.pose.t = c.pose.t.real().cast<cdouble>();
    }
    order.push_back(static_cast<int>(k));
  }
  if (order.size() < static_cast<std::size_t>(kNumRoots))
    throw DegenerateInstanceError("only " + std::to_string(order.size()) + " valid candidates, need 40", Stage::Filter);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return candidates[a].residual < candidates[b].residual; });
  S.accepted.assign(order.begin(), order.begin() + kNumRoots);
  S.gap = order.size() > static_cast<std::size_t>(kNumRoots)
              ? std::log10(candidates[order[kNumRoots - 1]].residual) - std::log10(candidates[order[kNumRoots]].residual)
              : std::numeric_limits<double>::quiet_NaN();

  S.partner.assign(kNumRoots, -1);
  for (int a = 0; a < kNumRoots; ++a) {
    const Candidate& ca = candidates[S.accepted[a]];
    if (ca.real) {
      S.partner[a] = a;
      continue;
    }
    if (S.partner[a] >= 0) continue;
    int best = -1;
    double best_d = kConjugateTol;
    for (int b = a + 1; b < kNumRoots; ++b) {
      const Candidate& cb = candidates[S.accepted[b]];
      if (cb.real || S.partner[b] >= 0) continue;
      double d = conjugate_distance(ca.pose, cb.pose);
      if (d <= best_d) {
        best_d = d;
        best = b;
      }
    }
    if (best >= 0) {
      S.partner[a] = best;
      S.partner[best] = a;
    }
  }
  S.candidates = std::move(candidates);
  return S;
}

namespace {

template <class T>
BasicPose<T> newton_refine(const PolynomialSystem& system, const std::array<std::array<Polynomial, kNumVars>, 6>& jac,
                           BasicPose<T> pose, double& residual, int iterations) {
  using Vec6 = Eigen::Matrix<T, 6, 1>;
  using Mat6 = Eigen::Matrix<T, 6, 6>;
  for (int it = 0; it < iterations; ++it) {
    const auto x = pose.variables();
    Vec6 f;
    Mat6 J;
    for (int i = 0; i < 6; ++i) {
      f(i) = system[i].evaluate(x);
      for (int j = 0; j < kNumVars; ++j) J(i, j) = jac[i][j].evaluate(x);
    }
    Eigen::FullPivLU<Mat6> lu(J);
    if (!lu.isInvertible()) break;
    const Vec6 dx = lu.solve(f);
    if (!dx.allFinite()) break;
    BasicPose<T> next = pose;
    for (int j = 0; j < 3; ++j) {
      next.p(j) -= dx(j);
      next.t(j) -= dx(3 + j);
    }
    const double r = normalized_residual(system, next);
    if (!(r < residual)) break;
    pose = next;
    residual = r;
  }
  return pose;
}

}  // namespace

void polish_roots(const PolynomialSystem& system, SolutionSet& S, int iterations) {
  std::array<std::array<Polynomial, kNumVars>, 6> jac;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < kNumVars; ++j) jac[i][j] = system[i].derivative(j);
  for (int a : S.accepted) {
    Candidate& c = S.candidates[a];
    if (c.real)
      c.pose = complexify(newton_refine(system, jac, real_part(c.pose), c.residual, iterations));
    else
      c.pose = newton_refine(system, jac, c.pose, c.residual, iterations);
  }
}

SolutionSet solve_system(const PolynomialSystem& system, const TemplateStructure& structure,
                         const SolveOptions& opts) {
  Stage stage = Stage::Template;
  try {
    const auto t0 = Clock::now();
    MacaulayMatrix M = assemble_macaulay(system, structure);
    const double L1 = -system[0].coefficient(Monomial::one()) / system[0].coefficient(Monomial::variable(3, 2));
    ReducedTemplate T = schur_reduce(M, structure, L1, opts.schur_path);
    const double t_template = ms_since(t0);

    stage = Stage::Plu;
    const auto t1 = Clock::now();
    EliminatedBlocks blocks = plu_eliminate(T);
    const double t_plu = ms_since(t1);

    stage = Stage::Qz;
    const auto t2 = Clock::now();
    auto candidates = extract_candidates(solve_pencil(build_action_pencil(blocks, structure)), structure);
    const double t_qz = ms_since(t2);

    stage = Stage::Filter;
    const auto t3 = Clock::now();
    SolutionSet S = filter_roots(system, std::move(candidates));
    if (opts.polish_iterations > 0) polish_roots(system, S, opts.polish_iterations);
    S.timings.filter_ms = ms_since(t3);
    S.timings.template_ms = t_template;
    S.timings.plu_ms = t_plu;
    S.timings.qz_ms = t_qz;
    S.rcond = blocks.rcond;
    S.timings.total_ms = ms_since(t0);
    return S;
  } catch (Error& e) {
    if (e.stage() == Stage::Unknown) e.set_stage(stage);
    throw;
  }
}

const Mat3& conditioning_base_rotation() {
  static const Mat3 Q = cayley_rotation<double>(Vec3(0.31, -0.62, 0.47));
  return Q;
}

const Mat3& conditioning_top_rotation() {
  static const Mat3 Q = cayley_rotation<double>(Vec3(-0.53, 0.28, 0.41));
  return Q;
}

SolutionSet forward_kinematics(const PlatformGeometry& geom, const LegMeasurements& L, const SolveOptions& opts) {
  geom.validate();
  L.validate();
  const TemplateStructure& structure = standard_structure();
  const auto t0 = Clock::now();

  PlatformGeometry g = geom;
  const Mat3& Qb = conditioning_base_rotation();
  const Mat3& Qt = conditioning_top_rotation();
  if (opts.frame_conditioning) {
    for (int i = 0; i < 6; ++i) {
      g.top[i] = Qt * geom.top[i];
      g.base[i] = Qb * geom.base[i];
    }
  }
  const auto tb = Clock::now();
  PolynomialSystem system = [&] {
    try {
      return build_polynomial_system(g, L);
    } catch (Error& e) {
      if (e.stage() == Stage::Unknown) e.set_stage(Stage::Template);
      throw;
    }
  }();
  const double t_build = ms_since(tb);

  SolutionSet S = solve_system(system, structure, opts);
  S.timings.template_ms += t_build;

  if (opts.frame_conditioning) {
    const Mat3c Qbc = Qb.cast<cdouble>();
    const Mat3c Qtc = Qt.cast<cdouble>();
    std::vector<char> is_accepted(S.candidates.size(), 0);
    for (int a : S.accepted) is_accepted[a] = 1;
    for (std::size_t k = 0; k < S.candidates.size(); ++k) {
      Candidate& c = S.candidates[k];
      if (!c.valid) continue;
      try {
        if (c.real) {
          Pose r = real_part(c.pose);
          Mat3 R = Qb.transpose() * r.rotation() * Qt;
          r.p = inverse_cayley<double>(R);
          r.t = Qb.transpose() * r.t;
          c.pose = complexify(r);
        } else {
          Mat3c R = Qbc.transpose() * c.pose.rotation() * Qtc;
          c.pose.p = inverse_cayley<cdouble>(R);
          c.pose.t = Qbc.transpose() * c.pose.t;
        }
      } catch (const SingularParametrizationError&) {
        if (is_accepted[k])
          throw DegenerateInstanceError("accepted root maps to a rotation outside the Cayley chart", Stage::Filter);
        c.valid = false;
      }
    }
  }
  S.timings.total_ms = ms_since(t0);
  return S;
}

}  // namespace sgp
