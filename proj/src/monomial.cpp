#include "sgp/monomial.hpp"

#include <cctype>

#include "sgp/errors.hpp"

namespace sgp {

namespace {

int var_index(char c) {
  for (int i = 0; i < kNumVars; ++i)
    if (kVarNames[i] == c) return i;
  return -1;
}

std::uint8_t checked_exponent(int value) {
  if (value < 0 || value > 255) throw InputError("monomial exponent out of range");
  return static_cast<std::uint8_t>(value);
}

}  // namespace

Monomial Monomial::variable(int i, int power) {
  Monomial m;
  m.e.at(i) = checked_exponent(power);
  return m;
}

Monomial Monomial::from_exponents(const std::array<int, kNumVars>& exps) {
  Monomial m;
  for (int i = 0; i < kNumVars; ++i) m.e[i] = checked_exponent(exps[i]);
  return m;
}

Monomial Monomial::parse(std::string_view text) {
  std::array<int, kNumVars> exps{};
  bool seen_factor = false;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '1' && !seen_factor) {
      ++i;
      seen_factor = true;
      continue;
    }
    int v = var_index(c);
    if (v < 0) throw InputError("cannot parse monomial '" + std::string(text) + "'");
    ++i;
    int power = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t start = i;
      power = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        power = power * 10 + (text[i++] - '0');
      if (i == start) throw InputError("missing exponent in monomial '" + std::string(text) + "'");
    }
    exps[v] += power;
    seen_factor = true;
  }
  if (!seen_factor) throw InputError("empty monomial");
  return from_exponents(exps);
}

int Monomial::degree() const {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r.e[i] = checked_exponent(int(e[i]) + int(o.e[i]));
  return r;
}

bool Monomial::divisible_by(const Monomial& d) const {
  for (int i = 0; i < kNumVars; ++i)
    if (e[i] < d.e[i]) return false;
  return true;
}

std::optional<Monomial> Monomial::divide(const Monomial& d) const {
  if (!divisible_by(d)) return std::nullopt;
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] - d.e[i]);
  return r;
}

std::uint64_t Monomial::key() const {
  std::uint64_t k = 0;
  for (int i = 0; i < kNumVars; ++i) k |= std::uint64_t(e[i]) << (8 * i);
  return k;
}

std::string Monomial::to_string() const {
  std::string s;
  for (int i = 0; i < kNumVars; ++i) {
    if (e[i] == 0) continue;
    s += kVarNames[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

bool grevlex_greater(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  for (int i = kNumVars - 1; i >= 0; --i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
  return false;
}

}  // namespace sgp
