#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgp/shift_tables.hpp"
#include "sgp/polynomial.hpp"

namespace sgp {

enum class ColumnBlock : std::uint8_t { Eliminated, Excessive, Reducible, Basic, Dropped };

struct RowShift {
  Monomial shift;
  int poly;  // 0-based index j of f_{j+1}
};

// Classification of b/w for a basic monomial b.
struct ActionEntry {
  bool in_basic;  // true: index into B, false: index into R
  int index;
};

// Sparse row of M0 = M11^-1 M12 with entries polynomial in L_1.
struct SeriesRow {
  std::vector<int> cols;       // reduced column index (template first, then dropped)
  std::vector<double> coeffs;  // cols.size() * (degree + 1), lowest power first
};

class TemplateStructure {
public:
  static constexpr int kRows = 511;
  static constexpr int kCols = 580;
  static constexpr int kEliminated = 218;
  static constexpr int kExcessive = 255;
  static constexpr int kReducible = 38;
  static constexpr int kBasic = 69;
  static constexpr int kReducedRows = kRows - kEliminated;
  static constexpr int kReducedCols = kCols - kEliminated;

  ShiftTables tables;
  std::array<std::vector<Monomial>, 6> generic_support;
  std::vector<RowShift> row_plan;

  // Template columns in block order: eliminated, E, R, B.
  std::vector<Monomial> columns;
  std::array<int, 4> sizes{};  // eliminated, E, R, B
  // Shifted-support monomials that are not template columns; see dropped_zero.
  std::vector<Monomial> dropped;
  // Number of leading entries of `dropped` whose reduced column vanishes identically.
  int dropped_zero = 0;

  std::vector<ActionEntry> action_map;

  // row_columns[r][k] is the column of shift(r) * generic_support[poly(r)][k];
  // indices >= kCols refer to dropped columns.
  std::vector<std::vector<int>> row_columns;

  // Offline Schur data: rows of M0 as polynomials in L_1.
  int series_degree = 0;
  std::vector<SeriesRow> series;

  int block_offset(ColumnBlock b) const;
  int block_size(ColumnBlock b) const;
  ColumnBlock block_of(int col) const;
  const Monomial& column(int col) const;
  // Column index in [0, kCols + dropped.size()) or -1 when absent.
  int column_index(const Monomial& m) const;
  int num_template_cols() const { return static_cast<int>(columns.size()); }
  int num_rows() const { return static_cast<int>(row_plan.size()); }
  std::size_t full_universe_size() const { return columns.size() + dropped.size(); }
  int generic_term_index(int poly, const Monomial& m) const;

  // Returns every violated invariant; empty when consistent.
  std::vector<std::string> check() const;

  // Internal lookup tables; filled by build_structure.
  std::unordered_map<Monomial, int, MonomialHash> index;
  std::array<std::unordered_map<Monomial, int, MonomialHash>, 6> support_index;
};

// Builds the template from the shift tables and a generic probe system. The
// probe supplies the supports of f_1..f_6 and decides numerically which
// excessive columns are kept. Throws StructureError if a check fails.
TemplateStructure build_structure(const ShiftTables& tables, const PolynomialSystem& probe);

// Template built once from a fixed seeded 6-6 probe and shared read-only.
const TemplateStructure& standard_structure();

}  // namespace sgp
