#pragma once

#include <string>
#include <vector>

#include "phylosat/certificate.hpp"

// The two worked relations on K_{1,5} used as end-to-end references.

namespace phylosat::golden {

/// Mixed flows of size up to 4, needing both splitting and triple matching.
inline Relation example_2_6() {
  using F = Flow;
  return Relation::validated(
      {F::from_residues({1, 2, 2, 1, 0}), F::from_residues({0, 1, 2, 1, 2}),
       F::from_residues({2, 0, 0, 0, 1}), F::zero(5)},
      {F::from_residues({1, 0, 0, 1, 1}), F::from_residues({2, 0, 2, 0, 2}),
       F::from_residues({0, 2, 0, 1, 0}), F::from_residues({0, 1, 2, 0, 0})},
      5);
}

/// Pairs and one g1-triple per side; decomposes into four quadrics.
inline Relation example_2_8() {
  auto p = [](Leaf a, Leaf b) { return pair_flow(5, a - 1, b - 1); };
  auto t = [](Leaf a, Leaf b, Leaf c) { return triple_flow(5, z3::kG1, a - 1, b - 1, c - 1); };
  return Relation::validated({t(1, 2, 3), p(4, 2), p(1, 5), p(5, 3), p(4, 3)},
                             {t(3, 4, 5), p(1, 2), p(1, 3), p(4, 5), p(2, 3)}, 5);
}

namespace golden_detail {

inline bool same(FlowMultiset a, FlowMultiset b) { return sorted(std::move(a)) == sorted(std::move(b)); }

inline bool has_apply(const Certificate& cert, int degree, const FlowMultiset& added) {
  for (const auto& s : cert.steps) {
    const auto* g = std::get_if<ApplyGenerator>(&s);
    if (g && g->generator.degree() == degree && same(g->added, added)) return true;
  }
  return false;
}

}  // namespace golden_detail

/// Landmarks of the hand reduction of example_2_6(): two splits, the cubic
/// that matches the triples, and the closing quadric. Returns what is missing.
inline std::vector<std::string> missing_2_6_landmarks(const Certificate& cert) {
  using golden_detail::has_apply;
  using golden_detail::same;
  auto p = [](Leaf a, Leaf b) { return pair_flow(5, a - 1, b - 1); };
  std::vector<std::string> missing;
  if (!has_apply(cert, 2, {p(1, 2), p(4, 3)})) missing.push_back("split (1,2) + (4,3)");
  if (!has_apply(cert, 2, {p(2, 3), p(4, 5)})) missing.push_back("split (2,3) + (4,5)");
  if (!has_apply(cert, 3, {p(1, 3), p(4, 5), p(5, 1)})) missing.push_back("cubic giving (1,3) + (4,5) + (5,1)");
  bool final_ok = false;
  if (!cert.steps.empty()) {
    if (const auto* f = std::get_if<EmitFinal>(&cert.steps.back())) {
      const FlowMultiset a{p(4, 2), p(1, 3)}, b{p(1, 2), p(4, 3)};
      const auto& g = f->generator;
      final_ok = (same(g.left(), a) && same(g.right(), b)) || (same(g.left(), b) && same(g.right(), a));
    }
  }
  if (!final_ok) missing.push_back("final quadric (4,2) + (1,3) = (1,2) + (4,3)");
  return missing;
}

}  // namespace phylosat::golden
