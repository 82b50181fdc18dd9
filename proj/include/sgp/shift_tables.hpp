#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sgp/monomial.hpp"

namespace sgp {

namespace tables {
extern const char* const kShiftSet1;
extern const char* const kShiftSet2;
extern const char* const kShiftSet3;
extern const char* const kShiftSet4;
extern const char* const kShiftSet5;
extern const char* const kShiftSet6;
extern const char* const kBasicSet;
}  // namespace tables

inline constexpr std::array<std::size_t, 6> kShiftSetSizes{218, 61, 60, 59, 57, 56};
inline constexpr std::size_t kBasicSetSize = 69;

struct ShiftTables {
  std::array<std::vector<Monomial>, 6> shifts;  // A_1..A_6 in table order
  std::vector<Monomial> basic;                  // B in table order
  Monomial action_divisor = Monomial::variable(2);  // a = 1/w
};

// Parses the compiled tables and checks cardinalities and duplicates.
// Throws StructureError on any violation.
ShiftTables load_shift_tables();

// Checks cardinalities, duplicates and divisibility of B by w.
void validate_tables(const ShiftTables& t);

// Splits a comma separated monomial list.
std::vector<Monomial> parse_monomial_list(const char* text);

}  // namespace sgp
