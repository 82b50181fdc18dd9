#include "sgp/shift_tables.hpp"

#include <string>
#include <unordered_set>

#include "sgp/errors.hpp"

namespace sgp {

std::vector<Monomial> parse_monomial_list(const char* text) {
  std::vector<Monomial> out;
  std::string_view s(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view item = s.substr(start, end - start);
    if (item.find_first_not_of(" \t\n") != std::string_view::npos) out.push_back(Monomial::parse(item));
    start = end + 1;
  }
  return out;
}

namespace {

void require_distinct(const std::vector<Monomial>& set, const std::string& name) {
  std::unordered_set<Monomial, MonomialHash> seen;
  for (const auto& m : set)
    if (!seen.insert(m).second)
      throw StructureError("table corruption: duplicate monomial " + m.to_string() + " in " + name);
}

}  // namespace

void validate_tables(const ShiftTables& t) {
  for (int j = 0; j < 6; ++j) {
    std::string name = "A_" + std::to_string(j + 1);
    if (t.shifts[j].size() != kShiftSetSizes[j])
      throw StructureError("table corruption: #" + name + " = " + std::to_string(t.shifts[j].size()) +
                           ", expected " + std::to_string(kShiftSetSizes[j]));
    require_distinct(t.shifts[j], name);
  }
  if (t.basic.size() != kBasicSetSize)
    throw StructureError("table corruption: #B = " + std::to_string(t.basic.size()) + ", expected 69");
  require_distinct(t.basic, "B");
  for (const auto& b : t.basic)
    if (!b.divisible_by(t.action_divisor))
      throw StructureError("table corruption: basic monomial " + b.to_string() + " is not divisible by w");
}

ShiftTables load_shift_tables() {
  const char* const raw[6] = {tables::kShiftSet1, tables::kShiftSet2, tables::kShiftSet3,
                              tables::kShiftSet4, tables::kShiftSet5, tables::kShiftSet6};
  ShiftTables t;
  try {
    for (int j = 0; j < 6; ++j) t.shifts[j] = parse_monomial_list(raw[j]);
    t.basic = parse_monomial_list(tables::kBasicSet);
  } catch (const InputError& e) {
    throw StructureError(std::string("table corruption: ") + e.what());
  }
  validate_tables(t);
  return t;
}

}  // namespace sgp
