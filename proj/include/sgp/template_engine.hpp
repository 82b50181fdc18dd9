#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgp/polynomial.hpp"
#include "sgp/structure.hpp"

namespace sgp {

// Sparse 511 x 580 Macaulay matrix. Rows follow the structure's row plan and
// hold (column, value) pairs sorted by column. Columns at or beyond
// template_cols belong to the dropped block.
struct MacaulayMatrix {
  int template_cols = 0;
  int dropped_cols = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;

  int num_rows() const { return static_cast<int>(rows.size()); }
  std::size_t nonzeros() const;
  Eigen::MatrixXd dense(bool with_dropped = false) const;
};

MacaulayMatrix assemble_macaulay(const PolynomialSystem& system, const TemplateStructure& structure);

enum class SchurPath { BackSubstitution, OfflineSeries };

// M_hat = M22 - M21 M11^-1 M12 over the E, R, B columns. When requested,
// `dropped` holds the reduced dropped columns.
struct ReducedTemplate {
  Eigen::MatrixXd mhat;
  Eigen::MatrixXd dropped;
  int excessive = 0;
  int reducible = 0;
  int basic = 0;

  // Fraction of exact zeros in mhat.
  double sparsity() const;
};

ReducedTemplate schur_reduce(const MacaulayMatrix& M, const TemplateStructure& structure, double L1,
                             SchurPath path = SchurPath::BackSubstitution, bool with_dropped = false);

struct PluOptions {
  double pivot_tol = 1e-12;  // relative to max |M_hat|
  bool verify = false;       // recompute the eliminated E block and check it
  double zero_tol = 1e-8;
};

struct EliminatedBlocks {
  Eigen::MatrixXd AR;  // 38 x 38
  Eigen::MatrixXd AB;  // 38 x 69
  double rcond = 0.0;  // reciprocal 1-norm condition estimate of AR
  double e_block_residual = -1.0;  // set when PluOptions::verify
};

EliminatedBlocks plu_eliminate(const ReducedTemplate& T, const PluOptions& opts = {});

}  // namespace sgp
