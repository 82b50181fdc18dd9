#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sgp {

// Variables are ordered (u, v, w, x, y, z): p = (u, v, w) and t = (x, y, z).
inline constexpr int kNumVars = 6;
inline constexpr char kVarNames[kNumVars + 1] = "uvwxyz";

struct Monomial {
  std::array<std::uint8_t, kNumVars> e{};

  static Monomial one() { return {}; }
  static Monomial variable(int i, int power = 1);
  static Monomial from_exponents(const std::array<int, kNumVars>& exps);

  // Accepts products such as "zw^3y", "u^2v" or "1"; factors may repeat.
  static Monomial parse(std::string_view text);

  int operator[](int i) const { return e[i]; }
  int degree() const;
  bool is_one() const { return degree() == 0; }

  Monomial operator*(const Monomial& o) const;
  bool divisible_by(const Monomial& d) const;
  std::optional<Monomial> divide(const Monomial& d) const;

  std::uint64_t key() const;
  std::string to_string() const;

  template <class T>
  T evaluate(const std::array<T, kNumVars>& vals) const {
    T r(1);
    for (int i = 0; i < kNumVars; ++i)
      for (int k = 0; k < e[i]; ++k) r *= vals[i];
    return r;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e != b.e; }
};

// Graded reverse lexicographic order on (u, v, w, x, y, z).
bool grevlex_greater(const Monomial& a, const Monomial& b);

struct GrevlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_greater(a, b); }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = m.key() * 0x9e3779b97f4a7c15ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace sgp
