#pragma once

#include <sstream>
#include <string>

#include "phylosat/certificate.hpp"

namespace phylosat {

/// Short form with 1-based leaves: "0", "(1,2)" for a pair (g1 leaf, g2 leaf),
/// "(1,4,5)_g1" for triples, raw labels "[1,2,2,1,0]" otherwise.
inline std::string notation(const Flow& f) {
  std::ostringstream out;
  const auto c = classify(f);
  switch (f.modulus() == 3 ? c.kind : FlowClass::Kind::General) {
    case FlowClass::Kind::Zero: return "0";
    case FlowClass::Kind::Pair:
      out << '(' << c.leaves[0] + 1 << ',' << c.leaves[1] + 1 << ')';
      return out.str();
    case FlowClass::Kind::TripleG1:
    case FlowClass::Kind::TripleG2:
      out << '(' << c.leaves[0] + 1 << ',' << c.leaves[1] + 1 << ',' << c.leaves[2] + 1 << ")_g"
          << (c.kind == FlowClass::Kind::TripleG1 ? 1 : 2);
      return out.str();
    case FlowClass::Kind::General: break;
  }
  if (f.is_zero()) return "0";
  out << '[';
  for (int i = 0; i < f.leaves(); ++i) out << (i ? "," : "") << f.residue(i);
  out << ']';
  return out.str();
}

inline std::string notation(const FlowMultiset& side) {
  if (side.empty()) return "{}";
  std::string s;
  for (const auto& f : side) s += (s.empty() ? "" : " + ") + notation(f);
  return s;
}

inline std::string notation(const Relation& rel) {
  return notation(rel.left()) + " = " + notation(rel.right());
}

inline std::string notation(const Step& step) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AddZeroFlow>) {
          return "add 0 to both sides";
        } else if constexpr (std::is_same_v<T, ApplyGenerator>) {
          return std::string("[") + s.case_tag + "] " + to_string(s.side) + ": " +
                 notation(s.removed) + " = " + notation(s.added);
        } else if constexpr (std::is_same_v<T, DeleteCommon>) {
          return "delete " + notation(s.flow);
        } else {
          return "final: " + notation(s.generator);
        }
      },
      step);
}

}  // namespace phylosat
