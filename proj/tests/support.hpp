#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "phylosat/certificate.hpp"

// Test-side helpers that do not go through the library's own checks.
namespace testsupport {

using namespace phylosat;

inline Flow P(Leaf a, Leaf b, int r = 5) { return pair_flow(r, a - 1, b - 1); }
inline Flow T1(Leaf a, Leaf b, Leaf c, int r = 5) { return triple_flow(r, z3::kG1, a - 1, b - 1, c - 1); }
inline Flow T2(Leaf a, Leaf b, Leaf c, int r = 5) { return triple_flow(r, z3::kG2, a - 1, b - 1, c - 1); }

/// Polynomial in flow variables: monomial (sorted flows) -> coefficient.
using Poly = std::map<FlowMultiset, long long>;

inline FlowMultiset times(FlowMultiset a, const FlowMultiset& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

inline void add_term(Poly& p, const FlowMultiset& mono, long long c) {
  if ((p[mono] += c) == 0) p.erase(mono);
}

/// A degree <= 3 binomial with equal label counts whose sides are a and b.
inline bool same_binomial(const Relation& g, FlowMultiset a, FlowMultiset b) {
  if (g.left().size() > 3 || g.left().size() != g.right().size()) return false;
  std::map<std::pair<int, int>, int> count;
  for (const auto& f : g.left())
    for (int i = 0; i < f.leaves(); ++i) ++count[{i, f.residue(i)}];
  for (const auto& f : g.right())
    for (int i = 0; i < f.leaves(); ++i) --count[{i, f.residue(i)}];
  for (const auto& [k, c] : count)
    if (c != 0) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  FlowMultiset gl = g.left(), gr = g.right();
  std::sort(gl.begin(), gl.end());
  std::sort(gr.begin(), gr.end());
  return (gl == a && gr == b) || (gl == b && gr == a);
}

/// Replays a certificate as polynomial algebra: checks that
/// x0^n (x_L - x_R) equals the sum of monomial multiples of the generators.
/// Returns false if a step cannot be read as such a multiple.
inline bool telescopes(const Certificate& cert) {
  const int r = cert.original.leaves();
  const Flow zero = Flow::zero(r, cert.original.modulus());
  FlowMultiset L = cert.original.left(), R = cert.original.right();
  int zeros_left = cert.n;
  FlowMultiset deleted;
  Poly terms;
  auto multiplier = [&] { return times(deleted, FlowMultiset(static_cast<std::size_t>(zeros_left), zero)); };
  auto take = [](FlowMultiset side, const FlowMultiset& part, FlowMultiset& rest) {
    for (const auto& f : part) {
      auto it = std::find(side.begin(), side.end(), f);
      if (it == side.end()) return false;
      side.erase(it);
    }
    rest = side;
    return true;
  };
  for (const auto& step : cert.steps) {
    if (std::holds_alternative<AddZeroFlow>(step)) {
      if (--zeros_left < 0) return false;
      L.push_back(zero);
      R.push_back(zero);
    } else if (const auto* d = std::get_if<DeleteCommon>(&step)) {
      FlowMultiset l2, r2;
      if (!take(L, {d->flow}, l2) || !take(R, {d->flow}, r2)) return false;
      L = l2;
      R = r2;
      deleted.push_back(d->flow);
    } else if (const auto* g = std::get_if<ApplyGenerator>(&step)) {
      if (!same_binomial(g->generator, g->removed, g->added)) return false;
      FlowMultiset& side = g->side == Side::Left ? L : R;
      FlowMultiset rest;
      if (!take(side, g->removed, rest)) return false;
      const long long sign = g->side == Side::Left ? 1 : -1;
      const FlowMultiset m = times(multiplier(), rest);
      add_term(terms, times(m, g->removed), sign);
      add_term(terms, times(m, g->added), -sign);
      side = times(rest, g->added);
    } else {
      if (!same_binomial(std::get<EmitFinal>(step).generator, L, R)) return false;
      const FlowMultiset m = multiplier();
      add_term(terms, times(m, L), 1);
      add_term(terms, times(m, R), -1);
      L.clear();
      R.clear();
    }
  }
  if (!L.empty() || !R.empty() || zeros_left != 0) return false;
  Poly lhs;
  const FlowMultiset pad(static_cast<std::size_t>(cert.n), zero);
  add_term(lhs, times(pad, cert.original.left()), 1);
  add_term(lhs, times(pad, cert.original.right()), -1);
  return lhs == terms;
}

}  // namespace testsupport
