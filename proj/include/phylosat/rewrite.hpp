#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "phylosat/cases.hpp"

namespace phylosat {

struct ReduceOptions {
  /// Upper bound on recorded steps; exceeding it raises IterationLimit.
  std::size_t max_steps = 1'000'000;
  /// At degree 3, try one more round and keep it when it needs no cubic.
  bool finish_with_quadrics = true;
};

namespace detail {

inline std::optional<Flow> first_large_flow(const FlowMultiset& side) {
  for (const auto& f : side)
    if (f.size() >= 4) return f;
  return std::nullopt;
}

inline void ensure_zero(Workspace& ws, Side s) {
  if (!ws.has(s, ws.zero())) ws.add_zero();
}

/// The pair or triple split off a flow of size >= 4 and what remains of it.
inline std::pair<Flow, Flow> split_off(const Flow& f) {
  const int r = f.leaves();
  Leaf first_g1 = -1, first_g2 = -1;
  std::vector<Leaf> nontrivial;
  for (Leaf i = 0; i < r; ++i) {
    const int v = f.residue(i);
    if (v == 0) continue;
    nontrivial.push_back(i);
    if (v == z3::kG1 && first_g1 < 0) first_g1 = i;
    if (v == z3::kG2 && first_g2 < 0) first_g2 = i;
  }
  Flow part = first_g1 >= 0 && first_g2 >= 0
                  ? pair_flow(r, first_g1, first_g2)
                  : triple_flow(r, f.residue(nontrivial[0]), nontrivial[0], nontrivial[1],
                                nontrivial[2]);
  std::vector<std::uint8_t> rest(static_cast<std::size_t>(r));
  for (Leaf i = 0; i < r; ++i) {
    rest[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((f.residue(i) - part.residue(i) + 3) % 3);
  }
  return {part, Flow::trusted(std::move(rest), 3)};
}

inline void split_phase(Workspace& ws) {
  for (Side s : {Side::Left, Side::Right}) {
    while (auto f = first_large_flow(ws.side(s))) {
      auto [part, rest] = split_off(*f);
      ensure_zero(ws, s);
      ws.apply(s, {*f, ws.zero()}, {part, rest}, "2.3");
    }
  }
}

inline std::optional<TripleRef> first_triple(const FlowMultiset& side, int element) {
  auto ts = triples_of(side, element);
  if (ts.empty()) return std::nullopt;
  return ts.front();
}

/// Matches the g1-triple leaves against the g2-triple leaves avoiding equal
/// leaves: identity first, then cyclic rotations of the second triple.
inline std::array<Flow, 3> match_triples(int r, std::array<Leaf, 3> a, std::array<Leaf, 3> x) {
  std::sort(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  for (std::size_t rot = 0; rot < 3; ++rot) {
    bool clash = false;
    for (std::size_t i = 0; i < 3; ++i) clash = clash || a[i] == x[(i + rot) % 3];
    if (clash) continue;
    return {pair_flow(r, a[0], x[rot % 3]), pair_flow(r, a[1], x[(1 + rot) % 3]),
            pair_flow(r, a[2], x[(2 + rot) % 3])};
  }
  throw Error(ErrorKind::InternalContradiction, "no collision-free triple matching");
}

inline void normalize_phase(Workspace& ws) {
  for (Side s : {Side::Left, Side::Right}) {
    for (;;) {
      auto t1 = first_triple(ws.side(s), z3::kG1);
      auto t2 = first_triple(ws.side(s), z3::kG2);
      if (!t1 || !t2) break;
      const auto pairs = match_triples(ws.leaves(), t1->leaves, t2->leaves);
      ensure_zero(ws, s);
      ws.apply(s, {t1->flow, t2->flow, ws.zero()}, {pairs[0], pairs[1], pairs[2]}, "2.4");
    }
  }
}

inline Step map_step(const Step& step, const SymmetryFrame& back) {
  return std::visit(
      [&](const auto& s) -> Step {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ApplyGenerator>) {
          ApplyGenerator out = s;
          out.side = back.side_swapped ? other(s.side) : s.side;
          out.removed = apply_frame(s.removed, back);
          out.added = apply_frame(s.added, back);
          return out;
        } else if constexpr (std::is_same_v<T, DeleteCommon>) {
          return DeleteCommon{apply_frame(s.flow, back)};
        } else {
          return s;
        }
      },
      step);
}

inline void replay_into(Workspace& ws, const Step& step) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ApplyGenerator>) {
          ws.apply(s.side, s.removed, s.added, s.case_tag);
        } else if constexpr (std::is_same_v<T, DeleteCommon>) {
          ws.delete_flow(s.flow);
        } else if constexpr (std::is_same_v<T, AddZeroFlow>) {
          ws.add_zero();
        } else {
          ws.emit_final();
        }
      },
      step);
}

/// One reduction round on a normalized, canceled workspace: dispatch, run the
/// case tactic in normal position, and replay its steps back in place. Ends
/// with at least one deletion.
inline void round(Workspace& ws) {
  if (ws.delete_common() > 0) return;
  const int before = grading(ws.relation());
  const int max_dispatches = 4 * ws.degree() + 8;
  for (int attempt = 0; attempt < max_dispatches; ++attempt) {
    const CaseSelection sel = find_case(ws.relation());
    Workspace framed(apply_frame(ws.relation(), sel.frame));
    const Outcome outcome = CaseSolver(framed, sel.tag).run();
    const SymmetryFrame back = sel.frame.inverse();
    for (const auto& step : framed.steps()) replay_into(ws, map_step(step, back));
    if (outcome == Outcome::Deleted) {
      if (grading(ws.relation()) >= before) {
        throw Error(ErrorKind::InternalContradiction, "grading did not decrease in a round");
      }
      return;
    }
  }
  throw Error(ErrorKind::IterationLimit, "round made no deletion");
}

inline void normal_form(Workspace& ws) {
  ws.delete_common();
  split_phase(ws);
  normalize_phase(ws);
  ws.delete_common();
}

inline void check_budget(const Workspace& ws, const ReduceOptions& opt) {
  if (ws.steps().size() > opt.max_steps) {
    throw Error(ErrorKind::IterationLimit, "step budget exceeded");
  }
}

inline bool uses_cubic(const std::vector<Step>& steps, std::size_t from) {
  for (std::size_t i = from; i < steps.size(); ++i)
    if (const auto* g = std::get_if<ApplyGenerator>(&steps[i]); g && g->removed.size() == 3)
      return true;
  return false;
}

}  // namespace detail

/// Splits every flow of size >= 4 into pairs and triples.
inline std::pair<Relation, std::vector<Step>> split_to_pairs_triples(const Relation& rel) {
  Workspace ws(rel);
  detail::split_phase(ws);
  return {ws.relation(), ws.take_steps()};
}

/// Rewrites each side so it carries triples of one type only.
inline std::pair<Relation, std::vector<Step>> normalize_triples(const Relation& rel) {
  Workspace ws(rel);
  detail::normalize_phase(ws);
  return {ws.relation(), ws.take_steps()};
}

/// One reduction round; the returned relation is canceled but may need
/// re-normalization.
inline std::pair<Relation, std::vector<Step>> reduce_round(const Relation& rel) {
  Workspace ws(rel);
  detail::round(ws);
  return {ws.relation(), ws.take_steps()};
}

inline Certificate reduce(const Relation& rel, const ReduceOptions& opt = {}) {
  Workspace ws(rel);
  detail::normal_form(ws);
  while (ws.degree() >= 4) {
    detail::round(ws);
    detail::normal_form(ws);
    detail::check_budget(ws, opt);
  }
  if (ws.degree() == 3 && opt.finish_with_quadrics && rel.modulus() == 3) {
    Workspace trial = ws;
    const std::size_t mark = trial.steps().size();
    try {
      detail::round(trial);
      detail::normal_form(trial);
      if (trial.degree() <= 2 && !detail::uses_cubic(trial.steps(), mark)) ws = std::move(trial);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalContradiction && e.kind() != ErrorKind::NotNormalized &&
          e.kind() != ErrorKind::IterationLimit) {
        throw;
      }
    }
  }
  if (ws.degree() > 0) ws.emit_final();
  detail::check_budget(ws, opt);
  Certificate cert{rel, ws.padding(), ws.take_steps()};
  return cert;
}

}  // namespace phylosat
