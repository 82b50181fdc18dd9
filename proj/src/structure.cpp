#include "sgp/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <Eigen/QR>

#include "sgp/errors.hpp"
#include "sgp/experiments.hpp"
#include "sgp/kinematics.hpp"
#include "sgp/template_engine.hpp"

namespace sgp {

namespace {

const Monomial kX2 = Monomial::variable(3, 2);
const Monomial kW = Monomial::variable(2);

constexpr std::uint64_t kProbeSeed = 0x5eed5eedULL;
constexpr double kZeroColumnTol = 1e-12;
constexpr double kRankTol = 1e-10;

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

void sort_grevlex(std::vector<Monomial>& v) { std::sort(v.begin(), v.end(), GrevlexDescending{}); }

// Fills the lookup tables and per-row column indices from columns/dropped.
void index_columns(TemplateStructure& s) {
  s.index.clear();
  int k = 0;
  for (const auto& m : s.columns)
    if (!s.index.emplace(m, k++).second)
      throw StructureError("duplicate template column " + m.to_string());
  for (const auto& m : s.dropped)
    if (!s.index.emplace(m, k++).second)
      throw StructureError("dropped column " + m.to_string() + " also present elsewhere");

  for (int j = 0; j < 6; ++j) {
    s.support_index[j].clear();
    for (std::size_t i = 0; i < s.generic_support[j].size(); ++i)
      s.support_index[j].emplace(s.generic_support[j][i], static_cast<int>(i));
  }
  s.row_columns.assign(s.row_plan.size(), {});
  for (std::size_t r = 0; r < s.row_plan.size(); ++r) {
    const auto& rs = s.row_plan[r];
    auto& cols = s.row_columns[r];
    for (const auto& m : s.generic_support[rs.poly]) {
      int c = s.column_index(rs.shift * m);
      if (c < 0)
        throw StructureError("shifted monomial " + (rs.shift * m).to_string() + " of f_" +
                             std::to_string(rs.poly + 1) + " missing from the column universe");
      cols.push_back(c);
    }
  }
}

// M0 = M11^-1 M12 with M11 = I + N; entries of f_1 rows are 1 or -L_1, so every
// entry of M0 is a polynomial in L_1.
void build_series(TemplateStructure& s) {
  const int ne = s.sizes[0];
  const Monomial one = Monomial::one();
  std::vector<std::map<int, std::vector<double>>> rows(ne);
  auto add_scaled = [](std::vector<double>& dst, const std::vector<double>& a, const std::vector<double>& b,
                       double sign) {
    if (dst.size() < a.size() + b.size() - 1) dst.resize(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < b.size(); ++k) dst[i + k] += sign * a[i] * b[k];
  };
  for (int r = ne - 1; r >= 0; --r) {
    const auto& sup = s.generic_support[0];
    auto& acc = rows[r];
    for (std::size_t k = 0; k < sup.size(); ++k) {
      int c = s.row_columns[r][k];
      std::vector<double> coeff = sup[k] == one ? std::vector<double>{0.0, -1.0} : std::vector<double>{1.0};
      if (c == r) continue;
      if (c >= ne) {
        auto& dst = acc[c - ne];
        add_scaled(dst, coeff, {1.0}, 1.0);
      } else {
        for (const auto& [col, poly] : rows[c]) add_scaled(acc[col], coeff, poly, -1.0);
      }
    }
  }
  int degree = 0;
  for (const auto& row : rows)
    for (const auto& [col, poly] : row) {
      int d = static_cast<int>(poly.size()) - 1;
      while (d > 0 && poly[d] == 0.0) --d;
      degree = std::max(degree, d);
    }
  s.series_degree = degree;
  s.series.assign(ne, {});
  for (int r = 0; r < ne; ++r) {
    for (const auto& [col, poly] : rows[r]) {
      bool nonzero = std::any_of(poly.begin(), poly.end(), [](double c) { return c != 0.0; });
      if (!nonzero) continue;
      s.series[r].cols.push_back(col);
      for (int d = 0; d <= degree; ++d)
        s.series[r].coeffs.push_back(d < static_cast<int>(poly.size()) ? poly[d] : 0.0);
    }
  }
}

std::vector<Monomial> sorted_f1_shifts(const ShiftTables& tables) {
  std::vector<Monomial> a1 = tables.shifts[0];
  std::stable_sort(a1.begin(), a1.end(), [](const Monomial& a, const Monomial& b) { return a[3] > b[3]; });
  return a1;
}

}  // namespace

int TemplateStructure::block_offset(ColumnBlock b) const {
  int off = 0;
  for (int i = 0; i < static_cast<int>(b) && i < 4; ++i) off += sizes[i];
  return off;
}

int TemplateStructure::block_size(ColumnBlock b) const {
  if (b == ColumnBlock::Dropped) return static_cast<int>(dropped.size());
  return sizes[static_cast<int>(b)];
}

ColumnBlock TemplateStructure::block_of(int col) const {
  int off = 0;
  for (int i = 0; i < 4; ++i) {
    off += sizes[i];
    if (col < off) return static_cast<ColumnBlock>(i);
  }
  return ColumnBlock::Dropped;
}

const Monomial& TemplateStructure::column(int col) const {
  int n = num_template_cols();
  return col < n ? columns.at(col) : dropped.at(col - n);
}

int TemplateStructure::column_index(const Monomial& m) const {
  auto it = index.find(m);
  return it == index.end() ? -1 : it->second;
}

int TemplateStructure::generic_term_index(int poly, const Monomial& m) const {
  const auto& idx = support_index.at(poly);
  auto it = idx.find(m);
  return it == idx.end() ? -1 : it->second;
}

std::vector<std::string> TemplateStructure::check() const {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };
  for (int j = 0; j < 6; ++j)
    expect(tables.shifts[j].size() == kShiftSetSizes[j],
           "#A_" + std::to_string(j + 1) + " = " + std::to_string(tables.shifts[j].size()));
  expect(num_rows() == kRows, "#rows = " + std::to_string(num_rows()));
  expect(num_template_cols() == kCols, "#columns = " + std::to_string(num_template_cols()));
  const std::array<int, 4> want{kEliminated, kExcessive, kReducible, kBasic};
  const char* names[4] = {"eliminated", "E", "R", "B"};
  for (int i = 0; i < 4; ++i)
    expect(sizes[i] == want[i], std::string("#") + names[i] + " = " + std::to_string(sizes[i]));
  expect(std::accumulate(sizes.begin(), sizes.end(), 0) == num_template_cols(), "block sizes do not sum to #columns");
  if (!bad.empty()) return bad;

  // Partition: all template and dropped columns are distinct.
  std::set<std::uint64_t> keys;
  for (const auto& m : columns) keys.insert(m.key());
  for (const auto& m : dropped) keys.insert(m.key());
  expect(keys.size() == full_universe_size(), "column blocks are not pairwise disjoint");

  // B in table order with the pinned tail.
  const int ob = block_offset(ColumnBlock::Basic);
  std::vector<Monomial> B(columns.begin() + ob, columns.end());
  expect(B == tables.basic, "B block differs from the tabulated basic set");
  const char* tail[7] = {"uw", "vw", "w^2", "xw", "yw", "zw", "w"};
  for (int k = 0; k < 7; ++k)
    expect(B[62 + k] == Monomial::parse(tail[k]), std::string("B position ") + std::to_string(63 + k) + " is not " + tail[k]);

  // R = {b/w} \ B.
  std::set<std::uint64_t> bkeys, rkeys, derived;
  for (const auto& b : B) bkeys.insert(b.key());
  const int orr = block_offset(ColumnBlock::Reducible);
  for (int i = 0; i < kReducible; ++i) rkeys.insert(columns[orr + i].key());
  for (const auto& b : B) {
    auto q = b.divide(kW);
    expect(q.has_value(), "basic monomial " + b.to_string() + " is not divisible by w");
    if (q && !bkeys.count(q->key())) derived.insert(q->key());
  }
  expect(derived == rkeys, "R is not {b/w : b in B} \\ B");
  expect(derived.size() == static_cast<std::size_t>(kReducible), "derived #R = " + std::to_string(derived.size()));
  for (int i = ob; i < num_template_cols(); ++i)
    expect(columns[i][3] <= 1, "basic monomial with x-degree > 1");
  for (int i = orr; i < orr + kReducible; ++i)
    expect(columns[i][3] <= 1, "reducible monomial with x-degree > 1");

  // Action map.
  int to_r = 0, to_b = 0;
  expect(action_map.size() == B.size(), "action map size");
  for (std::size_t i = 0; i < action_map.size() && i < B.size(); ++i) {
    const auto& a = action_map[i];
    auto q = B[i].divide(kW);
    if (!q) continue;
    const Monomial& target = a.in_basic ? columns.at(ob + a.index) : columns.at(orr + a.index);
    expect(target == *q, "action map entry for " + B[i].to_string());
    (a.in_basic ? to_b : to_r)++;
  }
  expect(to_r == kReducible && to_b == kBasic - kReducible,
         "action map splits " + std::to_string(to_r) + "/" + std::to_string(to_b) + ", expected 38/31");

  // Eliminated columns x^2 m, unit upper triangular M11.
  auto a1 = sorted_f1_shifts(tables);
  for (int r = 0; r < kEliminated; ++r) {
    expect(row_plan[r].poly == 0 && row_plan[r].shift == a1[r], "f_1 row order");
    expect(columns[r] == a1[r] * kX2, "eliminated column " + std::to_string(r) + " is not x^2 m");
  }
  for (int r = 0; r < kEliminated && r < static_cast<int>(row_columns.size()); ++r) {
    const auto& sup = generic_support[0];
    for (std::size_t k = 0; k < sup.size(); ++k) {
      int c = row_columns[r][k];
      if (sup[k] == kX2) expect(c == r, "M11 diagonal misplaced in row " + std::to_string(r));
      else if (c < kEliminated) expect(c > r, "M11 is not upper triangular in row " + std::to_string(r));
    }
  }
  // Shifts of f_1 stay inside the universe, every row is indexed.
  expect(row_columns.size() == row_plan.size(), "row index table size");
  for (const auto& rc : row_columns)
    for (int c : rc) expect(c >= 0 && c < static_cast<int>(full_universe_size()), "row column index out of range");
  expect(static_cast<int>(series.size()) == kEliminated, "offline series size");
  return bad;
}

TemplateStructure build_structure(const ShiftTables& tables, const PolynomialSystem& probe) {
  validate_tables(tables);
  TemplateStructure s;
  s.tables = tables;
  for (int j = 0; j < 6; ++j) s.generic_support[j] = probe[j].support();

  const Monomial one = Monomial::one();
  {
    std::vector<Monomial> f1{kX2, Monomial::variable(4, 2), Monomial::variable(5, 2), one};
    sort_grevlex(f1);
    if (s.generic_support[0] != f1) throw StructureError("f_1 support is not {x^2, y^2, z^2, 1}");
  }

  auto a1 = sorted_f1_shifts(tables);
  for (const auto& m : a1) s.row_plan.push_back({m, 0});
  for (int j = 1; j < 6; ++j)
    for (const auto& m : tables.shifts[j]) s.row_plan.push_back({m, j});

  std::set<Monomial, GrevlexDescending> universe;
  for (const auto& rs : s.row_plan)
    for (const auto& m : s.generic_support[rs.poly]) universe.insert(rs.shift * m);

  std::vector<Monomial> elim;
  std::set<Monomial, GrevlexDescending> elim_set;
  for (const auto& m : a1) {
    Monomial c = m * kX2;
    if (!universe.count(c)) throw StructureError("eliminated column " + c.to_string() + " not in universe");
    if (!elim_set.insert(c).second) throw StructureError("eliminated column " + c.to_string() + " repeated");
    elim.push_back(c);
  }

  const auto& B = tables.basic;
  std::set<Monomial, GrevlexDescending> bset(B.begin(), B.end());
  std::set<Monomial, GrevlexDescending> rset;
  for (const auto& b : B) {
    auto q = b.divide(kW);
    if (!q) throw StructureError("basic monomial " + b.to_string() + " is not divisible by w");
    if (!bset.count(*q)) rset.insert(*q);
  }
  std::vector<Monomial> R(rset.begin(), rset.end());
  if (R.size() != static_cast<std::size_t>(TemplateStructure::kReducible))
    throw StructureError("#R = " + std::to_string(R.size()) + ", expected 38");
  for (const auto& m : B)
    if (!universe.count(m) || elim_set.count(m))
      throw StructureError("basic monomial " + m.to_string() + " unavailable after elimination");
  for (const auto& m : R)
    if (!universe.count(m) || elim_set.count(m))
      throw StructureError("reducible monomial " + m.to_string() + " unavailable after elimination");

  std::vector<Monomial> rest;
  for (const auto& m : universe)
    if (!elim_set.count(m) && !rset.count(m) && !bset.count(m)) rest.push_back(m);

  // Provisional template keeping every remaining column as excessive.
  TemplateStructure prov = s;
  prov.columns = elim;
  prov.columns.insert(prov.columns.end(), rest.begin(), rest.end());
  prov.columns.insert(prov.columns.end(), R.begin(), R.end());
  prov.columns.insert(prov.columns.end(), B.begin(), B.end());
  prov.sizes = {static_cast<int>(elim.size()), static_cast<int>(rest.size()), static_cast<int>(R.size()),
                static_cast<int>(B.size())};
  index_columns(prov);

  ReducedTemplate red = schur_reduce(assemble_macaulay(probe, prov), prov, -probe[0].coefficient(one));
  const int nrest = static_cast<int>(rest.size());
  const double scale = red.mhat.cwiseAbs().maxCoeff();
  std::vector<int> live;
  std::vector<Monomial> zero_cols;
  for (int k = 0; k < nrest; ++k) {
    if (red.mhat.col(k).cwiseAbs().maxCoeff() <= kZeroColumnTol * scale)
      zero_cols.push_back(rest[k]);
    else
      live.push_back(k);
  }
  if (static_cast<int>(live.size()) < TemplateStructure::kExcessive)
    throw StructureError("only " + std::to_string(live.size()) + " nonzero excessive columns, need 255");

  Eigen::MatrixXd E(red.mhat.rows(), static_cast<Eigen::Index>(live.size()));
  for (std::size_t k = 0; k < live.size(); ++k) E.col(static_cast<Eigen::Index>(k)) = red.mhat.col(live[k]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(E);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  const int need = TemplateStructure::kExcessive;
  const double d0 = diag(0);
  const bool rank_ok = diag(need - 1) > kRankTol * d0 &&
                       (diag.size() == need || diag(need) <= kRankTol * d0);
  if (!rank_ok)
    throw StructureError("excessive block of the probe does not have a clean rank 255");

  std::vector<Monomial> keep, dependent;
  std::vector<bool> chosen(live.size(), false);
  for (int k = 0; k < need; ++k) chosen[qr.colsPermutation().indices()(k)] = true;
  for (std::size_t k = 0; k < live.size(); ++k) (chosen[k] ? keep : dependent).push_back(rest[live[k]]);
  sort_grevlex(keep);
  sort_grevlex(dependent);
  sort_grevlex(zero_cols);

  s.columns = elim;
  s.columns.insert(s.columns.end(), keep.begin(), keep.end());
  s.columns.insert(s.columns.end(), R.begin(), R.end());
  s.columns.insert(s.columns.end(), B.begin(), B.end());
  s.sizes = {static_cast<int>(elim.size()), static_cast<int>(keep.size()), static_cast<int>(R.size()),
             static_cast<int>(B.size())};
  s.dropped = zero_cols;
  s.dropped.insert(s.dropped.end(), dependent.begin(), dependent.end());
  s.dropped_zero = static_cast<int>(zero_cols.size());
  index_columns(s);

  for (const auto& b : B) {
    Monomial q = *b.divide(kW);
    auto bi = std::find(B.begin(), B.end(), q);
    if (bi != B.end())
      s.action_map.push_back({true, static_cast<int>(bi - B.begin())});
    else
      s.action_map.push_back({false, static_cast<int>(std::find(R.begin(), R.end(), q) - R.begin())});
  }
  build_series(s);

  auto bad = s.check();
  if (!bad.empty()) throw StructureError("template structure inconsistent: " + join(bad));
  return s;
}

const TemplateStructure& standard_structure() {
  static const TemplateStructure s = [] {
    SplitMix64 rng(kProbeSeed);
    PlatformGeometry g = gen_geometry(Variant::General66, rng);
    GeneratedLengths L = gen_lengths(g, LengthMode::UniformSquared, rng);
    return build_structure(load_shift_tables(), build_polynomial_system(g, L.L));
  }();
  return s;
}

}  // namespace sgp
