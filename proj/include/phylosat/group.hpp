#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "phylosat/error.hpp"

namespace phylosat {

/// Element of the cyclic group Z_n. The modulus travels with the value so that
/// arithmetic across different groups is caught instead of silently wrapped.
class GroupElement {
 public:
  constexpr GroupElement() = default;

  GroupElement(int value, int modulus) : modulus_(static_cast<std::uint8_t>(modulus)) {
    if (modulus < 1 || modulus > 255) {
      throw Error(ErrorKind::Malformed, "modulus out of range: " + std::to_string(modulus));
    }
    if (value < 0 || value >= modulus) {
      throw Error(ErrorKind::Malformed,
                  "residue " + std::to_string(value) + " outside Z_" + std::to_string(modulus));
    }
    value_ = static_cast<std::uint8_t>(value);
  }

  constexpr int value() const noexcept { return value_; }
  constexpr int modulus() const noexcept { return modulus_; }
  constexpr bool is_identity() const noexcept { return value_ == 0; }

  friend constexpr bool operator==(GroupElement, GroupElement) = default;
  friend constexpr auto operator<=>(GroupElement, GroupElement) = default;

 private:
  std::uint8_t value_ = 0;
  std::uint8_t modulus_ = 1;
};

inline void require_same_group(GroupElement a, GroupElement b) {
  if (a.modulus() != b.modulus()) {
    throw Error(ErrorKind::ModulusMismatch, "Z_" + std::to_string(a.modulus()) + " vs Z_" +
                                                std::to_string(b.modulus()));
  }
}

inline GroupElement add(GroupElement a, GroupElement b) {
  require_same_group(a, b);
  return {(a.value() + b.value()) % a.modulus(), a.modulus()};
}

inline GroupElement neg(GroupElement a) {
  return {(a.modulus() - a.value()) % a.modulus(), a.modulus()};
}

inline GroupElement operator+(GroupElement a, GroupElement b) { return add(a, b); }
inline GroupElement operator-(GroupElement a) { return neg(a); }

namespace z3 {
// g1 is residue 1 and g2 is residue 2 everywhere in the library.
inline constexpr int kZero = 0;
inline constexpr int kG1 = 1;
inline constexpr int kG2 = 2;

inline GroupElement zero() { return {kZero, 3}; }
inline GroupElement g1() { return {kG1, 3}; }
inline GroupElement g2() { return {kG2, 3}; }
}  // namespace z3

}  // namespace phylosat
