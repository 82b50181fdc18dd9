#include "sgp/template_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "sgp/errors.hpp"

namespace sgp {

std::size_t MacaulayMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

Eigen::MatrixXd MacaulayMatrix::dense(bool with_dropped) const {
  const int nc = template_cols + (with_dropped ? dropped_cols : 0);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(num_rows(), nc);
  for (int r = 0; r < num_rows(); ++r)
    for (const auto& [c, v] : rows[r])
      if (c < nc) D(r, c) = v;
  return D;
}

MacaulayMatrix assemble_macaulay(const PolynomialSystem& system, const TemplateStructure& structure) {
  MacaulayMatrix M;
  M.template_cols = structure.num_template_cols();
  M.dropped_cols = static_cast<int>(structure.dropped.size());
  M.rows.resize(structure.row_plan.size());

  // Position of each instance term inside the generic support of its polynomial.
  std::array<std::vector<std::pair<int, double>>, 6> terms;
  for (int j = 0; j < 6; ++j) {
    for (const auto& t : system[j].terms()) {
      int k = structure.generic_term_index(j, t.m);
      if (k < 0)
        throw StructureError("monomial " + t.m.to_string() + " of f_" + std::to_string(j + 1) +
                                 " lies outside the template support",
                             Stage::Template);
      terms[j].emplace_back(k, t.c);
    }
  }
  for (std::size_t r = 0; r < structure.row_plan.size(); ++r) {
    const int j = structure.row_plan[r].poly;
    const auto& cols = structure.row_columns[r];
    auto& row = M.rows[r];
    row.reserve(terms[j].size());
    for (const auto& [k, c] : terms[j]) row.emplace_back(cols[k], c);
    std::sort(row.begin(), row.end());
  }
  return M;
}

double ReducedTemplate::sparsity() const {
  if (mhat.size() == 0) return 0.0;
  return static_cast<double>((mhat.array() == 0.0).count()) / static_cast<double>(mhat.size());
}

namespace {

using SparseRow = std::vector<std::pair<int, double>>;

// Rows of M0 = M11^-1 M12 by back substitution on the upper triangular M11.
std::vector<SparseRow> m0_back_substitution(const MacaulayMatrix& M, int ne, int width) {
  std::vector<SparseRow> m0(ne);
  std::vector<double> acc(width, 0.0);
  std::vector<char> used(width, 0);
  std::vector<int> touched;
  for (int r = ne - 1; r >= 0; --r) {
    double diag = 0.0;
    touched.clear();
    auto touch = [&](int k) {
      if (!used[k]) {
        used[k] = 1;
        touched.push_back(k);
      }
    };
    for (const auto& [c, v] : M.rows[r]) {
      if (c < ne) {
        if (c < r) throw StructureError("M11 is not upper triangular at row " + std::to_string(r), Stage::Template);
        if (c == r) {
          diag = v;
        } else {
          for (const auto& [k, w] : m0[c]) {
            touch(k);
            acc[k] -= v * w;
          }
        }
      } else if (c - ne < width) {
        touch(c - ne);
        acc[c - ne] += v;
      }
    }
    if (diag == 0.0) throw StructureError("M11 has a zero diagonal at row " + std::to_string(r), Stage::Template);
    std::sort(touched.begin(), touched.end());
    auto& out = m0[r];
    out.reserve(touched.size());
    for (int k : touched) {
      if (acc[k] != 0.0) out.emplace_back(k, acc[k] / diag);
      acc[k] = 0.0;
      used[k] = 0;
    }
  }
  return m0;
}

std::vector<SparseRow> m0_offline(const MacaulayMatrix& M, const TemplateStructure& s, int ne, int width,
                                  double L1) {
  for (int r = 0; r < ne; ++r) {
    bool monic = false;
    for (const auto& [c, v] : M.rows[r])
      if (c == r) monic = v == 1.0;
    if (!monic) throw InputError("offline Schur series requires f_1 = x^2 + y^2 + z^2 - L_1", Stage::Template);
  }
  const int deg = s.series_degree;
  std::vector<SparseRow> m0(ne);
  for (int r = 0; r < ne; ++r) {
    const auto& sr = s.series[r];
    for (std::size_t i = 0; i < sr.cols.size(); ++i) {
      if (sr.cols[i] >= width) continue;
      const double* c = &sr.coeffs[i * (deg + 1)];
      double v = c[deg];
      for (int d = deg - 1; d >= 0; --d) v = v * L1 + c[d];
      if (v != 0.0) m0[r].emplace_back(sr.cols[i], v);
    }
  }
  return m0;
}

}  // namespace

ReducedTemplate schur_reduce(const MacaulayMatrix& M, const TemplateStructure& structure, double L1,
                             SchurPath path, bool with_dropped) {
  if (!std::isfinite(L1) || L1 == 0.0) throw InputError("Schur reduction requires L_1 != 0", Stage::Template);
  const int ne = structure.sizes[0];
  const int ncols = M.template_cols - ne;
  const int width = ncols + (with_dropped ? M.dropped_cols : 0);
  const int nrows = M.num_rows() - ne;

  std::vector<SparseRow> m0 = path == SchurPath::BackSubstitution ? m0_back_substitution(M, ne, width)
                                                                    : m0_offline(M, structure, ne, width, L1);

  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(nrows, width);
  for (int r = 0; r < nrows; ++r) {
    for (const auto& [c, v] : M.rows[ne + r]) {
      if (c >= ne) {
        if (c - ne < width) full(r, c - ne) += v;
      } else {
        for (const auto& [k, w] : m0[c]) full(r, k) -= v * w;
      }
    }
  }
  ReducedTemplate T;
  T.excessive = structure.sizes[1];
  T.reducible = structure.sizes[2];
  T.basic = structure.sizes[3];
  T.mhat = full.leftCols(ncols);
  if (with_dropped) T.dropped = full.rightCols(width - ncols);
  return T;
}

EliminatedBlocks plu_eliminate(const ReducedTemplate& T, const PluOptions& opts) {
  const int n = static_cast<int>(T.mhat.rows());
  const int ne = T.excessive;
  const int nr = n - ne;
  const int nrest = static_cast<int>(T.mhat.cols()) - ne;
  if (ne <= 0 || nr != T.reducible || nrest != T.reducible + T.basic)
    throw StructureError("reduced template blocks are misaligned", Stage::Plu);

  const double scale = T.mhat.cwiseAbs().maxCoeff();
  if (!(scale > 0) || !std::isfinite(scale)) throw DegenerateInstanceError("reduced template is zero or non-finite", Stage::Plu);

  Eigen::MatrixXd LU = T.mhat.leftCols(ne);
  std::vector<lapack_int> ipiv(ne);
  lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, ne, LU.data(), n, ipiv.data());
  if (info < 0) throw SolverFailureError("dgetrf argument error", Stage::Plu);
  const double pivot_min = opts.pivot_tol * scale;
  for (int k = 0; k < ne; ++k)
    if (!(std::abs(LU(k, k)) >= pivot_min))
      throw DegenerateInstanceError("excessive block is rank deficient (pivot " + std::to_string(k + 1) + ")",
                                    Stage::Plu);

  // Apply (PL)^-1 to the R and B columns; only the trailing rows are needed.
  Eigen::MatrixXd rest = T.mhat.rightCols(nrest);
  LAPACKE_dlaswp(LAPACK_COL_MAJOR, nrest, rest.data(), n, 1, ne, ipiv.data(), 1);
  LU.topRows(ne).triangularView<Eigen::UnitLower>().solveInPlace(rest.topRows(ne));
  Eigen::MatrixXd bottom = rest.bottomRows(nr);
  bottom.noalias() -= LU.bottomRows(nr) * rest.topRows(ne);

  EliminatedBlocks out;
  out.AR = bottom.leftCols(T.reducible);
  out.AB = bottom.rightCols(T.basic);

  if (opts.verify) {
    Eigen::MatrixXd E = T.mhat.leftCols(ne);
    LAPACKE_dlaswp(LAPACK_COL_MAJOR, ne, E.data(), n, 1, ne, ipiv.data(), 1);
    LU.topRows(ne).triangularView<Eigen::UnitLower>().solveInPlace(E.topRows(ne));
    Eigen::MatrixXd Eb = E.bottomRows(nr) - LU.bottomRows(nr) * E.topRows(ne);
    out.e_block_residual = Eb.cwiseAbs().maxCoeff() / scale;
    if (out.e_block_residual > opts.zero_tol)
      throw DegenerateInstanceError("eliminated E block is not zero (" + std::to_string(out.e_block_residual) + ")",
                                    Stage::Plu);
  }

  Eigen::MatrixXd ar = out.AR;
  std::vector<lapack_int> ip(nr);
  double anorm = ar.cwiseAbs().colwise().sum().maxCoeff();
  if (LAPACKE_dgetrf(LAPACK_COL_MAJOR, nr, nr, ar.data(), nr, ip.data()) == 0) {
    double rc = 0.0;
    if (LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', nr, ar.data(), nr, anorm, &rc) == 0) out.rcond = rc;
  }
  return out;
}

}  // namespace sgp
