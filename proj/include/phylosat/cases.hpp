#pragma once

#include <array>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "phylosat/workspace.hpp"

namespace phylosat {

/// Configurations of a normalized relation (pairs and triples only, at most one
/// triple type per side) that decide which reduction tactic runs.
enum class CaseTag {
  NoPairsSharedTwo,    // 3.1
  NoPairsDisjoint,     // 3.2
  FourIndexTriples,    // 4.1
  FourIndexOneTriple,  // 4.2
  FourIndexNoTriples,  // 4.3
  ThreeIndexA1,        // 5.1.1
  ThreeIndexA2,        // 5.1.2
  ThreeIndexA3,        // 5.1.3
  ThreeIndexB1,        // 5.2.1
  ThreeIndexB2,        // 5.2.2
  ThreeIndexB3,        // 5.2.3
  TwoIndex,            // 6
};

enum class CaseFamily { NoPairs, FourIndexPairs, ThreeIndexPairsA, ThreeIndexPairsB, TwoIndexPairs };

inline const char* section(CaseTag tag) {
  switch (tag) {
    case CaseTag::NoPairsSharedTwo: return "3.1";
    case CaseTag::NoPairsDisjoint: return "3.2";
    case CaseTag::FourIndexTriples: return "4.1";
    case CaseTag::FourIndexOneTriple: return "4.2";
    case CaseTag::FourIndexNoTriples: return "4.3";
    case CaseTag::ThreeIndexA1: return "5.1.1";
    case CaseTag::ThreeIndexA2: return "5.1.2";
    case CaseTag::ThreeIndexA3: return "5.1.3";
    case CaseTag::ThreeIndexB1: return "5.2.1";
    case CaseTag::ThreeIndexB2: return "5.2.2";
    case CaseTag::ThreeIndexB3: return "5.2.3";
    case CaseTag::TwoIndex: return "6";
  }
  return "?";
}

inline CaseFamily family(CaseTag tag) {
  switch (tag) {
    case CaseTag::NoPairsSharedTwo:
    case CaseTag::NoPairsDisjoint: return CaseFamily::NoPairs;
    case CaseTag::FourIndexTriples:
    case CaseTag::FourIndexOneTriple:
    case CaseTag::FourIndexNoTriples: return CaseFamily::FourIndexPairs;
    case CaseTag::ThreeIndexA1:
    case CaseTag::ThreeIndexA2:
    case CaseTag::ThreeIndexA3: return CaseFamily::ThreeIndexPairsA;
    case CaseTag::ThreeIndexB1:
    case CaseTag::ThreeIndexB2:
    case CaseTag::ThreeIndexB3: return CaseFamily::ThreeIndexPairsB;
    case CaseTag::TwoIndex: return CaseFamily::TwoIndexPairs;
  }
  return CaseFamily::NoPairs;
}

inline const char* to_string(CaseFamily f) {
  switch (f) {
    case CaseFamily::NoPairs: return "NoPairs";
    case CaseFamily::FourIndexPairs: return "FourIndexPairs";
    case CaseFamily::ThreeIndexPairsA: return "ThreeIndexPairs-A";
    case CaseFamily::ThreeIndexPairsB: return "ThreeIndexPairs-B";
    case CaseFamily::TwoIndexPairs: return "TwoIndexPairs";
  }
  return "?";
}

struct CaseSelection {
  CaseTag tag;
  SymmetryFrame frame;  // maps the relation into the case's normal position
};

namespace detail {

// Leaf names used by the tactics once the relation sits in normal position.
inline constexpr Leaf kOne = 0;
inline constexpr Leaf kTwo = 1;
inline constexpr Leaf kA = 2;  // third named leaf (called 3 in the no-pairs cases)
inline constexpr Leaf kB = 3;
inline constexpr Leaf kThree = 2;
inline constexpr Leaf kSharedOther = 3;

inline constexpr int kG1 = z3::kG1;
inline constexpr int kG2 = z3::kG2;

struct TripleRef {
  int element = kG1;
  std::array<Leaf, 3> leaves{};
  Flow flow;

  bool contains(Leaf i) const { return leaves[0] == i || leaves[1] == i || leaves[2] == i; }

  /// The leaf that is neither i nor j.
  Leaf other(Leaf i, Leaf j) const {
    for (Leaf l : leaves)
      if (l != i && l != j) return l;
    return -1;
  }

  std::array<Leaf, 2> others(Leaf i) const {
    std::array<Leaf, 2> out{};
    int k = 0;
    for (Leaf l : leaves)
      if (l != i && k < 2) out[static_cast<std::size_t>(k++)] = l;
    return out;
  }
};

inline std::vector<TripleRef> triples_of(const FlowMultiset& side, int element) {
  std::vector<TripleRef> out;
  for (const auto& f : side) {
    if (!out.empty() && out.back().flow == f) continue;
    const auto c = classify(f);
    const bool match = (element == kG1 && c.kind == FlowClass::Kind::TripleG1) ||
                       (element == kG2 && c.kind == FlowClass::Kind::TripleG2);
    if (match) out.push_back({element, c.leaves, f});
  }
  return out;
}

inline bool in_triple(const FlowMultiset& side, int element, Leaf i) {
  for (const auto& t : triples_of(side, element))
    if (t.contains(i)) return true;
  return false;
}

/// Distinct pairs of a side as (g1 leaf, g2 leaf).
inline std::vector<std::array<Leaf, 2>> pairs_of(const FlowMultiset& side) {
  std::vector<std::array<Leaf, 2>> out;
  for (const auto& f : side) {
    const auto c = classify(f);
    if (c.kind != FlowClass::Kind::Pair) continue;
    const std::array<Leaf, 2> p{c.leaves[0], c.leaves[1]};
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  return out;
}

inline std::optional<Flow> pair_or_none(int leaves, Leaf g1_leaf, Leaf g2_leaf) {
  Flow f;
  if (!build_flow({FlowClass::Kind::Pair, {g1_leaf, g2_leaf, -1}, 2}, leaves, f)) {
    return std::nullopt;
  }
  return f;
}

inline std::optional<Flow> triple_or_none(int leaves, int element, Leaf a, Leaf b, Leaf c) {
  const auto kind = element == kG1 ? FlowClass::Kind::TripleG1 : FlowClass::Kind::TripleG2;
  Flow f;
  if (!build_flow({kind, {a, b, c}, 3}, leaves, f)) return std::nullopt;
  return f;
}

inline void require_normalized(const Relation& rel) {
  if (rel.modulus() != 3) throw Error(ErrorKind::NotNormalized, "case analysis is for Z_3 only");
  if (!rel.disjoint()) throw Error(ErrorKind::NotNormalized, "relation is not canceled");
  for (const auto* side : {&rel.left(), &rel.right()}) {
    bool g1 = false, g2 = false;
    for (const auto& f : *side) {
      const auto k = classify(f).kind;
      if (k == FlowClass::Kind::General) {
        throw Error(ErrorKind::NotNormalized, "flow with more than three nontrivial labels");
      }
      g1 = g1 || k == FlowClass::Kind::TripleG1;
      g2 = g2 || k == FlowClass::Kind::TripleG2;
    }
    if (g1 && g2) throw Error(ErrorKind::NotNormalized, "side mixes g1- and g2-triples");
  }
}

// Case predicates, evaluated on a relation already placed in normal position.

inline bool four_index_triples(const Relation& n) {
  return !triples_of(n.right(), kG2).size() && in_triple(n.right(), kG1, kOne) &&
         in_triple(n.right(), kG1, kA);
}
inline bool four_index_one_triple(const Relation& n) {
  return triples_of(n.right(), kG2).empty() && in_triple(n.right(), kG1, kOne) &&
         !in_triple(n.right(), kG1, kA);
}
inline bool four_index_no_triples(const Relation& n) {
  return !in_triple(n.right(), kG1, kOne) && !in_triple(n.right(), kG1, kA) &&
         !in_triple(n.right(), kG2, kTwo) && !in_triple(n.right(), kG2, kB);
}
inline bool three_a1(const Relation& n) { return in_triple(n.right(), kG2, kTwo); }
inline bool three_a2(const Relation& n) { return in_triple(n.right(), kG1, kOne); }
inline bool three_a3(const Relation& n) {
  return !in_triple(n.right(), kG1, kOne) && !in_triple(n.right(), kG2, kTwo) &&
         !in_triple(n.right(), kG2, kA);
}
inline bool three_b1(const Relation& n) { return in_triple(n.right(), kG1, kOne); }
inline bool three_b2(const Relation& n) {
  return !in_triple(n.right(), kG1, kOne) && in_triple(n.right(), kG2, kTwo);
}
inline bool three_b3(const Relation& n) {
  return !in_triple(n.right(), kG1, kOne) && !in_triple(n.right(), kG2, kOne) &&
         !in_triple(n.right(), kG2, kTwo) && !in_triple(n.right(), kG1, kA);
}
inline bool two_index(const Relation& n) {
  bool pair_from_one = false;
  for (const auto& p : pairs_of(n.right()))
    if (p[0] == kOne) pair_from_one = true;
  return pair_from_one && in_triple(n.right(), kG2, kTwo);
}

struct Candidate {
  CaseTag tag;
  std::function<bool(const Relation&)> holds;
};

/// First frame (in the given order) under which one of the candidates holds.
inline std::optional<CaseSelection> first_match(const Relation& rel,
                                                const std::vector<SymmetryFrame>& frames,
                                                const std::vector<Candidate>& candidates) {
  for (const auto& frame : frames) {
    const Relation normal = apply_frame(rel, frame);
    for (const auto& c : candidates)
      if (c.holds(normal)) return CaseSelection{c.tag, frame};
  }
  return std::nullopt;
}

inline int distinct_count(std::array<Leaf, 2> p, std::array<Leaf, 2> q) {
  std::vector<Leaf> v{p[0], p[1], q[0], q[1]};
  std::sort(v.begin(), v.end());
  return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace detail

/// Picks the case of a normalized, canceled, nonempty relation and the frame
/// that puts it into the case's normal position. Two pairs sharing a leaf in
/// the same position (the 5.1 shape) are looked for on both sides before the
/// 5.2 shape, so the 5.2 tactics only ever see cyclic triangles of pairs.
inline CaseSelection find_case(const Relation& rel) {
  using namespace detail;
  require_normalized(rel);
  if (rel.empty()) throw Error(ErrorKind::NotNormalized, "empty relation has no case");
  const int r = rel.leaves();
  // Pairs of pairs from both sides, smallest leaf names first; ties go to the
  // left side. The first configuration in this order is the one used.
  struct PairPair {
    std::array<Leaf, 2> p, q;
    Side side;
  };
  std::vector<PairPair> pair_pairs;
  std::vector<std::pair<std::array<Leaf, 2>, Side>> single_pairs;
  for (Side s : {Side::Left, Side::Right}) {
    auto pairs = pairs_of(s == Side::Left ? rel.left() : rel.right());
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      single_pairs.emplace_back(pairs[i], s);
      for (std::size_t j = i + 1; j < pairs.size(); ++j) pair_pairs.push_back({pairs[i], pairs[j], s});
    }
  }
  std::stable_sort(pair_pairs.begin(), pair_pairs.end(), [](const PairPair& x, const PairPair& y) {
    return std::tie(x.p, x.q) < std::tie(y.p, y.q);
  });
  std::stable_sort(single_pairs.begin(), single_pairs.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  // Four different leaves in two pairs on one side.
  for (const auto& [p, q, s] : pair_pairs) {
    if (distinct_count(p, q) != 4) continue;
    const bool swap = s == Side::Right;
    // Conjugation reverses every pair, so (p0,p1) becomes (p1,p0).
    const std::vector<SymmetryFrame> frames{
        SymmetryFrame::naming(r, {p[0], p[1], q[0], q[1]}, swap, false),
        SymmetryFrame::naming(r, {q[0], q[1], p[0], p[1]}, swap, false),
        SymmetryFrame::naming(r, {p[1], p[0], q[1], q[0]}, swap, true),
        SymmetryFrame::naming(r, {q[1], q[0], p[1], p[0]}, swap, true),
    };
    const std::vector<Candidate> candidates{
        {CaseTag::FourIndexTriples, four_index_triples},
        {CaseTag::FourIndexOneTriple, four_index_one_triple},
        {CaseTag::FourIndexNoTriples, four_index_no_triples},
    };
    if (auto sel = first_match(rel, frames, candidates)) return *sel;
    throw Error(ErrorKind::InternalContradiction, "four-index pairs fit no subcase");
  }

  // Three leaves, shared leaf in the same position: (1,2), (1,a).
  for (const auto& [p, q, s] : pair_pairs) {
    if (distinct_count(p, q) != 3) continue;
    const bool swap = s == Side::Right;
    std::vector<SymmetryFrame> frames;
    if (p[0] == q[0]) {
      frames.push_back(SymmetryFrame::naming(r, {p[0], p[1], q[1]}, swap, false));
      frames.push_back(SymmetryFrame::naming(r, {p[0], q[1], p[1]}, swap, false));
    } else if (p[1] == q[1]) {
      frames.push_back(SymmetryFrame::naming(r, {p[1], p[0], q[0]}, swap, true));
      frames.push_back(SymmetryFrame::naming(r, {p[1], q[0], p[0]}, swap, true));
    } else {
      continue;
    }
    const std::vector<Candidate> candidates{
        {CaseTag::ThreeIndexA1, three_a1},
        {CaseTag::ThreeIndexA2, three_a2},
        {CaseTag::ThreeIndexA3, three_a3},
    };
    if (auto sel = first_match(rel, frames, candidates)) return *sel;
    throw Error(ErrorKind::InternalContradiction, "(1,2),(1,a) pairs fit no subcase");
  }

  // Three leaves, shared leaf in different positions: (1,2), (a,1).
  for (auto [p, q, s] : pair_pairs) {
    if (distinct_count(p, q) != 3) continue;
    if (p[1] == q[0]) std::swap(p, q);
    if (q[1] != p[0]) continue;
    // p = (1,2), q = (a,1). Conjugating turns them into (1,a), (2,1).
    const bool swap = s == Side::Right;
    const std::vector<SymmetryFrame> frames{
        SymmetryFrame::naming(r, {p[0], p[1], q[0]}, swap, false),
        SymmetryFrame::naming(r, {p[0], q[0], p[1]}, swap, true),
    };
    const std::vector<Candidate> candidates{
        {CaseTag::ThreeIndexB1, three_b1},
        {CaseTag::ThreeIndexB2, three_b2},
        {CaseTag::ThreeIndexB3, three_b3},
    };
    if (auto sel = first_match(rel, frames, candidates)) return *sel;
    throw Error(ErrorKind::InternalContradiction, "(1,2),(a,1) pairs fit no subcase");
  }

  // Pairs present, but each side uses at most two leaves in pairs.
  if (!single_pairs.empty()) {
    const auto& [p, s] = single_pairs.front();
    const bool swap = s == Side::Right;
    const std::vector<SymmetryFrame> frames{
        SymmetryFrame::naming(r, {p[0], p[1]}, swap, false),
        SymmetryFrame::naming(r, {p[1], p[0]}, swap, true),
    };
    if (auto sel = first_match(rel, frames, {{CaseTag::TwoIndex, two_index}})) return *sel;
    throw Error(ErrorKind::InternalContradiction, "two-index pairs fit no subcase");
  }

  // Only triples (and trivial flows). Both sides carry the same triple type.
  const bool conj = !triples_of(rel.left(), kG2).empty();
  const int element = conj ? kG2 : kG1;
  const auto lt = triples_of(rel.left(), element);
  const auto rt = triples_of(rel.right(), element);
  for (const auto& t : lt) {
    for (const auto& u : rt) {
      std::vector<Leaf> shared;
      for (Leaf l : t.leaves)
        if (u.contains(l)) shared.push_back(l);
      if (shared.size() != 2) continue;
      return {CaseTag::NoPairsSharedTwo,
              SymmetryFrame::naming(r, {shared[0], shared[1], t.other(shared[0], shared[1]),
                                        u.other(shared[0], shared[1])},
                                    false, conj)};
    }
  }
  if (lt.empty()) throw Error(ErrorKind::InternalContradiction, "no triples on the left");
  const auto& t = lt.front();
  return {CaseTag::NoPairsDisjoint,
          SymmetryFrame::naming(r, {t.leaves[0], t.leaves[1], t.leaves[2]}, false, conj)};
}

namespace detail {

enum class Outcome { Deleted, Progressed };

/// Runs one case tactic on a relation in normal position. The side called 𝓛 is
/// Side::Left, g1 is residue 1, and the named leaves are 0, 1, 2, 3.
class CaseSolver {
 public:
  CaseSolver(Workspace& ws, CaseTag tag) : ws_(ws), tag_(tag), r_(ws.leaves()) {}

  Outcome run() {
    switch (tag_) {
      case CaseTag::NoPairsSharedTwo: return shared_two();
      case CaseTag::NoPairsDisjoint: return no_shared_two();
      case CaseTag::FourIndexTriples: return four_triples();
      case CaseTag::FourIndexOneTriple: return four_one_triple();
      case CaseTag::FourIndexNoTriples: return four_no_triples();
      case CaseTag::ThreeIndexA1: return three_a_g2_triples();
      case CaseTag::ThreeIndexA2: return three_a_g1_triple();
      case CaseTag::ThreeIndexA3: return three_a_pairs();
      case CaseTag::ThreeIndexB1: return three_b_g1_triple();
      case CaseTag::ThreeIndexB2: return three_b_g2_triple();
      case CaseTag::ThreeIndexB3: return three_b_pairs();
      case CaseTag::TwoIndex: return two_index_pairs();
    }
    contradiction("unknown case");
  }

 private:
  using OptFlow = std::optional<Flow>;
  static constexpr Side L = Side::Left;
  static constexpr Side R = Side::Right;

  struct Move {
    Side side;
    std::vector<OptFlow> removed;
    std::vector<OptFlow> added;
  };

  [[noreturn]] void contradiction(const std::string& what) const {
    throw Error(ErrorKind::InternalContradiction,
                std::string("case ") + section(tag_) + ": " + what);
  }

  OptFlow P(Leaf g1_leaf, Leaf g2_leaf) const { return pair_or_none(r_, g1_leaf, g2_leaf); }
  OptFlow T1(Leaf a, Leaf b, Leaf c) const { return triple_or_none(r_, kG1, a, b, c); }
  OptFlow T2(Leaf a, Leaf b, Leaf c) const { return triple_or_none(r_, kG2, a, b, c); }

  /// The triple with leaf `from` replaced by `to`.
  OptFlow moved(const TripleRef& t, Leaf from, Leaf to) const {
    if (!t.contains(from)) return std::nullopt;
    const auto o = t.others(from);
    return triple_or_none(r_, t.element, to, o[0], o[1]);
  }

  static Move rel(Side s, std::initializer_list<OptFlow> removed,
                  std::initializer_list<OptFlow> added) {
    return {s, removed, added};
  }

  std::vector<TripleRef> triples(Side s, int element, Leaf containing) const {
    std::vector<TripleRef> out;
    for (auto& t : triples_of(ws_.side(s), element))
      if (t.contains(containing)) out.push_back(t);
    return out;
  }
  std::vector<Leaf> pairs_from(Side s, Leaf g1_leaf) const {
    std::vector<Leaf> out;
    for (const auto& p : pairs_of(ws_.side(s)))
      if (p[0] == g1_leaf) out.push_back(p[1]);
    return out;
  }
  std::vector<Leaf> pairs_into(Side s, Leaf g2_leaf) const {
    std::vector<Leaf> out;
    for (const auto& p : pairs_of(ws_.side(s)))
      if (p[1] == g2_leaf) out.push_back(p[0]);
    return out;
  }
  bool has_pair(Side s, Leaf i, Leaf j) const {
    const auto p = P(i, j);
    return p && ws_.has(s, *p);
  }

  /// Applies the moves on a scratch copy and keeps the result only when it
  /// exposes a flow common to both sides, which is then deleted.
  bool attempt(std::initializer_list<Move> moves) {
    Workspace scratch = ws_;
    if (!apply_all(scratch, moves)) return false;
    if (scratch.delete_common() == 0) return false;
    ws_ = std::move(scratch);
    return true;
  }

  /// Applies the moves unconditionally (they must be valid) and reports whether
  /// a deletion already became possible.
  Outcome commit(std::initializer_list<Move> moves) {
    Workspace scratch = ws_;
    if (!apply_all(scratch, moves)) contradiction("preparatory relation does not apply");
    const bool deleted = scratch.delete_common() > 0;
    ws_ = std::move(scratch);
    return deleted ? Outcome::Deleted : Outcome::Progressed;
  }

  bool apply_all(Workspace& w, std::initializer_list<Move> moves) const {
    for (const auto& m : moves) {
      FlowMultiset removed, added;
      for (const auto& f : m.removed) {
        if (!f) return false;
        removed.push_back(*f);
      }
      for (const auto& f : m.added) {
        if (!f) return false;
        added.push_back(*f);
      }
      if (removed.size() == added.size() && sorted(removed) == sorted(added)) continue;  // no-op
      if (!w.prepare(m.side, removed, added)) return false;
      w.apply(m.side, removed, added, section(tag_));
    }
    return true;
  }

  // ---- 3.1: (1,2,3) in L and (1,2,a) in R, all g1-triples ----
  Outcome shared_two() {
    const Leaf three = kThree, a = kSharedOther;
    const auto t = T1(kOne, kTwo, three), u = T1(kOne, kTwo, a);
    for (const auto& v : triples(R, kG1, three)) {
      if (!v.contains(a) && attempt({rel(R, {u, v.flow}, {t, moved(v, three, a)})})) {
        return Outcome::Deleted;
      }
    }
    for (const auto& w : triples(L, kG1, a)) {
      if (!w.contains(three) && attempt({rel(L, {t, w.flow}, {u, moved(w, a, three)})})) {
        return Outcome::Deleted;
      }
    }
    contradiction("a only with 3 in L and 3 only with a in R");
  }

  // ---- 3.2: no two triples across sides share two leaves ----
  Outcome no_shared_two() {
    const auto t = T1(kOne, kTwo, kThree);
    const auto with_one = triples(R, kG1, kOne);
    if (with_one.empty()) contradiction("1 does not appear in R");
    const auto& u = with_one.front();
    const auto ab = u.others(kOne);
    // Produce in R a triple sharing two leaves with (1,2,3).
    for (Leaf q : {kTwo, kThree}) {
      for (const auto& v : triples(R, kG1, q)) {
        for (Leaf x : ab) {
          if (v.contains(x)) continue;
          return commit({rel(R, {u.flow, v.flow}, {moved(u, x, q), moved(v, q, x)})});
        }
      }
    }
    // Or produce it in L.
    for (Leaf x : ab) {
      for (const auto& w : triples(L, kG1, x)) {
        for (Leaf q : {kTwo, kThree}) {
          if (w.contains(q)) continue;
          return commit({rel(L, {t, w.flow}, {T1(kOne, x, kTwo + kThree - q), moved(w, x, q)})});
        }
      }
    }
    contradiction("2 and 3 in L outnumber their occurrences in R");
  }

  // ---- 4.1: (1,2),(a,b) in L; R has g1-triples through 1 and through a ----
  Outcome four_triples() {
    const Leaf one = kOne, two = kTwo, a = kA, b = kB;
    for (const auto& t : triples(R, kG1, one))
      for (Leaf u : pairs_into(R, two))
        if (attempt({rel(R, {t.flow, P(u, two)}, {moved(t, one, u), P(one, two)})}))
          return Outcome::Deleted;
    for (const auto& t : triples(R, kG1, a))
      for (Leaf v : pairs_into(R, b))
        if (attempt({rel(R, {t.flow, P(v, b)}, {moved(t, a, v), P(a, b)})}))
          return Outcome::Deleted;

    const auto into_two = pairs_into(R, two), into_b = pairs_into(R, b);
    if (into_two.empty() || into_b.empty()) contradiction("2 or b missing from R pairs");
    const TripleRef t1 = triples(R, kG1, one).front();
    const TripleRef ta = triples(R, kG1, a).front();
    const Leaf x = into_two.front(), s = into_b.front();
    if (!t1.contains(x) || !ta.contains(s)) contradiction("pair leaves outside the triples");
    const Leaf t = ta.other(a, s);

    if (pairs_from(L, x).empty()) {
      // 4.1.1: x carries g1 in L only inside triples.
      for (const auto& w : triples(L, kG1, x))
        if (!w.contains(one) &&
            attempt({rel(L, {P(one, two), w.flow}, {P(x, two), moved(w, x, one)})}))
          return Outcome::Deleted;
      const auto from_one = pairs_from(R, one);
      if (!from_one.empty()) {
        for (Leaf e : from_one) {
          if (e != x && attempt({rel(R, {P(x, two), P(one, e)}, {P(x, e), P(one, two)})}))
            return Outcome::Deleted;
          if (e != s && attempt({rel(R, {P(s, b), P(one, e)}, {P(one, b), P(s, e)}),
                                 rel(L, {P(one, two), P(a, b)}, {P(one, b), P(a, two)})}))
            return Outcome::Deleted;
        }
        for (const auto& w : triples(L, kG1, x)) {
          const Leaf d = w.other(x, one);
          if (d != a && attempt({rel(L, {P(a, b), w.flow}, {P(x, b), moved(w, x, a)})}))
            return Outcome::Deleted;
        }
        // Now (x,1,a) is in L; make (a,x,1) in R.
        if (attempt({rel(R, {P(one, x), ta.flow}, {P(t, x), moved(ta, t, one)})}))
          return Outcome::Deleted;
        contradiction("4.1.1 pair branch exhausted");
      }
      for (const auto& w : triples(R, kG1, one))
        if (!w.contains(x) &&
            attempt({rel(R, {P(x, two), w.flow}, {P(one, two), moved(w, one, x)})}))
          return Outcome::Deleted;
      contradiction("x only with 1 in L and 1 only with x in R");
    }

    // 4.1.2: x carries g1 in L inside a pair.
    for (Leaf c : pairs_from(L, x))
      if (c != one && attempt({rel(L, {P(x, c), P(one, two)}, {P(x, two), P(one, c)})}))
        return Outcome::Deleted;
    // (x,1) is in L, so 1 carries g2 in R inside pairs.
    for (Leaf e : pairs_into(R, one))
      if (e != two && attempt({rel(R, {P(e, one), P(x, two)}, {P(x, one), P(e, two)})}))
        return Outcome::Deleted;
    if (!has_pair(R, two, one)) contradiction("(2,1) missing from R");
    if (attempt({rel(R, {P(x, two), P(s, b), P(two, one)}, {P(x, one), P(two, b), P(s, two)})}))
      return Outcome::Deleted;
    if (s != two) contradiction("cubic failed with s != 2");
    // (2,b) is in R; look at 2 with g1 in L.
    for (Leaf h : pairs_from(L, two)) {
      if (attempt({rel(L, {P(two, h), P(x, one)}, {P(two, one), P(x, h)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(two, h), P(a, b)}, {P(two, b), P(a, h)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(one, two), P(a, b)}, {P(one, b), P(a, two)})})) return Outcome::Deleted;
    }
    for (const auto& w : triples(L, kG1, two)) {
      if (attempt({rel(L, {w.flow, P(a, b)}, {moved(w, two, a), P(two, b)})})) return Outcome::Deleted;
      if (attempt({rel(L, {w.flow, P(x, one)}, {moved(w, two, x), P(two, one)})}))
        return Outcome::Deleted;
      if (x == a &&
          attempt({rel(L, {P(one, two), P(a, b)}, {P(one, b), P(a, two)})}))
        return Outcome::Deleted;
      if (attempt({rel(R, {ta.flow, P(x, two)}, {moved(ta, t, x), P(t, two)})}))
        return Outcome::Deleted;
    }
    contradiction("4.1.2 exhausted");
  }

  // ---- 4.2: 1 in a g1-triple of R, a in none ----
  Outcome four_one_triple() {
    const Leaf one = kOne, two = kTwo, a = kA, b = kB;
    for (const auto& t : triples(R, kG1, one))
      for (Leaf z : pairs_into(R, two))
        if (attempt({rel(R, {t.flow, P(z, two)}, {moved(t, one, z), P(one, two)})}))
          return Outcome::Deleted;
    const auto into_two = pairs_into(R, two);
    if (into_two.empty()) contradiction("2 missing from R pairs");
    const TripleRef t1 = triples(R, kG1, one).front();
    const Leaf x = into_two.front();
    if (!t1.contains(x)) contradiction("(z,2) outside the triple");
    const Leaf y = t1.other(one, x);

    for (Leaf u : pairs_from(R, a))
      for (Leaf v : pairs_into(R, b))
        if (u != v && attempt({rel(R, {P(a, u), P(v, b)}, {P(a, b), P(v, u)})}))
          return Outcome::Deleted;
    for (Leaf u : pairs_from(R, a))
      if (u != x && attempt({rel(R, {P(a, u), P(x, two)}, {P(a, two), P(x, u)}),
                             rel(L, {P(one, two), P(a, b)}, {P(one, b), P(a, two)})}))
        return Outcome::Deleted;
    if (!has_pair(R, a, x) || !has_pair(R, x, b)) contradiction("(a,x) or (x,b) missing");

    for (Leaf c : pairs_from(L, x)) {
      if (attempt({rel(L, {P(x, c), P(one, two)}, {P(x, two), P(one, c)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(x, c), P(a, b)}, {P(x, b), P(a, c)})})) return Outcome::Deleted;
    }
    for (const auto& w : triples(L, kG1, x)) {
      if (attempt({rel(L, {w.flow, P(one, two)}, {P(x, two), moved(w, x, one)})}))
        return Outcome::Deleted;
      if (attempt({rel(L, {w.flow, P(a, b)}, {P(x, b), moved(w, x, a)})})) return Outcome::Deleted;
    }
    // Every g1-triple with x in L is (x,1,a).
    if (attempt({rel(R, {t1.flow, P(a, x)}, {moved(t1, y, a), P(y, x)})})) return Outcome::Deleted;
    contradiction("4.2 exhausted");
  }

  // ---- 4.3: no g1-triple through 1 or a, no g2-triple through 2 or b in R ----
  Outcome four_no_triples() {
    const Leaf one = kOne, two = kTwo, a = kA, b = kB;
    for (Leaf x : pairs_from(R, one))
      for (Leaf x2 : pairs_into(R, two))
        if (x != x2 && attempt({rel(R, {P(one, x), P(x2, two)}, {P(one, two), P(x2, x)})}))
          return Outcome::Deleted;
    for (Leaf y : pairs_from(R, a))
      for (Leaf y2 : pairs_into(R, b))
        if (y != y2 && attempt({rel(R, {P(a, y), P(y2, b)}, {P(a, b), P(y2, y)})}))
          return Outcome::Deleted;
    const auto from_one = pairs_from(R, one), from_a = pairs_from(R, a);
    if (from_one.empty() || from_a.empty()) contradiction("1 or a missing from R pairs");
    const Leaf x = from_one.front(), y = from_a.front();
    if (x != y) {
      if (attempt({rel(R, {P(one, x), P(y, b)}, {P(one, b), P(y, x)}),
                   rel(L, {P(one, two), P(a, b)}, {P(one, b), P(a, two)})}))
        return Outcome::Deleted;
      contradiction("swap through (1,b) failed");
    }
    for (Leaf c : pairs_from(L, x)) {
      if (attempt({rel(L, {P(x, c), P(one, two)}, {P(x, two), P(one, c)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(x, c), P(a, b)}, {P(x, b), P(a, c)})})) return Outcome::Deleted;
    }
    for (Leaf c : pairs_into(L, x)) {
      if (attempt({rel(L, {P(c, x), P(one, two)}, {P(one, x), P(c, two)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(c, x), P(a, b)}, {P(a, x), P(c, b)})})) return Outcome::Deleted;
    }
    contradiction("x would need both triple types in L");
  }

  // ---- 5.1.1: (1,2),(1,a) in L; 2 in a g2-triple of R ----
  Outcome three_a_g2_triples() {
    const Leaf one = kOne, two = kTwo, a = kA;
    for (const auto& t : triples(R, kG2, two))
      for (Leaf u : pairs_from(R, one))
        if (attempt({rel(R, {t.flow, P(one, u)}, {moved(t, two, u), P(one, two)})}))
          return Outcome::Deleted;
    const auto from_one = pairs_from(R, one);
    if (from_one.empty()) contradiction("1 missing from R pairs");
    const Leaf x = from_one.front();

    for (Leaf c : pairs_into(L, x)) {
      if (attempt({rel(L, {P(c, x), P(one, two)}, {P(c, two), P(one, x)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(c, x), P(one, a)}, {P(c, a), P(one, x)})})) return Outcome::Deleted;
    }
    for (const auto& w : triples(L, kG2, x)) {
      if (attempt({rel(L, {w.flow, P(one, two)}, {moved(w, x, two), P(one, x)})}))
        return Outcome::Deleted;
      if (attempt({rel(L, {w.flow, P(one, a)}, {moved(w, x, a), P(one, x)})})) return Outcome::Deleted;
    }
    // Every g2-triple with x in L is (x,a,2).
    const auto into_two = pairs_into(R, two);
    if (into_two.empty()) {
      for (const auto& t : triples(R, kG2, two))
        if (!t.contains(x) &&
            attempt({rel(R, {t.flow, P(one, x)}, {moved(t, two, x), P(one, two)})}))
          return Outcome::Deleted;
      contradiction("x only with 2 in L and 2 only with x in R");
    }
    for (Leaf e : into_two)
      if (e != x && attempt({rel(R, {P(e, two), P(one, x)}, {P(one, two), P(e, x)})}))
        return Outcome::Deleted;
    // (x,2) in R: x carries g1 in L inside a pair.
    for (Leaf f : pairs_from(L, x)) {
      if (f != one && attempt({rel(L, {P(x, f), P(one, two)}, {P(x, two), P(one, f)})}))
        return Outcome::Deleted;
      if (f == one)
        for (const auto& w : triples(L, kG2, x))
          if (attempt({rel(L, {w.flow, P(x, one)}, {moved(w, two, one), P(x, two)})}))
            return Outcome::Deleted;
    }
    contradiction("5.1.1 exhausted");
  }

  // ---- 5.1.2: (1,2),(1,a) in L; 1 in a g1-triple of R ----
  Outcome three_a_g1_triple() {
    const Leaf one = kOne, two = kTwo, a = kA;
    for (const auto& t : triples(R, kG1, one)) {
      for (Leaf z : pairs_into(R, two))
        if (attempt({rel(R, {t.flow, P(z, two)}, {moved(t, one, z), P(one, two)})}))
          return Outcome::Deleted;
      for (Leaf z : pairs_into(R, a))
        if (attempt({rel(R, {t.flow, P(z, a)}, {moved(t, one, z), P(one, a)})}))
          return Outcome::Deleted;
    }
    const auto into_two = pairs_into(R, two), into_a = pairs_into(R, a);
    if (into_two.empty() || into_a.empty()) contradiction("2 or a missing from R pairs");
    const Leaf x = into_two.front(), t = into_a.front();

    const auto xs = pairs_from(L, x), ts = pairs_from(L, t);
    for (Leaf c : xs)
      if (c != one && attempt({rel(L, {P(x, c), P(one, two)}, {P(x, two), P(one, c)})}))
        return Outcome::Deleted;
    for (Leaf d : ts)
      if (d != one && attempt({rel(L, {P(t, d), P(one, a)}, {P(t, a), P(one, d)})}))
        return Outcome::Deleted;
    if (!xs.empty() && !ts.empty()) {
      // (x,1) and (t,1) are in L; 1 carries g2 in R inside pairs.
      for (Leaf e : pairs_into(R, one)) {
        if (attempt({rel(R, {P(e, one), P(x, two)}, {P(x, one), P(e, two)})})) return Outcome::Deleted;
        if (attempt({rel(R, {P(e, one), P(t, a)}, {P(t, one), P(e, a)})})) return Outcome::Deleted;
      }
      contradiction("(e,1) swaps failed");
    }

    const std::array<std::array<Leaf, 2>, 2> options{{{x, two}, {t, a}}};
    for (const auto& [w, q] : options) {
      if (!pairs_from(L, w).empty()) continue;
      for (const auto& v : triples(L, kG1, w))
        if (!v.contains(one) &&
            attempt({rel(L, {v.flow, P(one, q)}, {moved(v, w, one), P(w, q)})}))
          return Outcome::Deleted;
      const auto from_one = pairs_from(R, one);
      if (from_one.empty()) {
        for (const auto& u : triples(R, kG1, one))
          if (!u.contains(w) &&
              attempt({rel(R, {u.flow, P(w, q)}, {moved(u, one, w), P(one, q)})}))
            return Outcome::Deleted;
        contradiction("w only with 1 in L and 1 only with w in R");
      }
      for (Leaf k : from_one) {
        if (attempt({rel(R, {P(one, k), P(x, two)}, {P(one, two), P(x, k)})})) return Outcome::Deleted;
        if (attempt({rel(R, {P(one, k), P(t, a)}, {P(one, a), P(t, k)})})) return Outcome::Deleted;
      }
      // (1,x) is in R with x = t; x carries g2 in L inside pairs.
      for (Leaf m : pairs_into(L, x)) {
        if (attempt({rel(L, {P(m, x), P(one, two)}, {P(one, x), P(m, two)})})) return Outcome::Deleted;
        if (attempt({rel(L, {P(m, x), P(one, a)}, {P(one, x), P(m, a)})})) return Outcome::Deleted;
      }
      contradiction("5.1.2 pair branch exhausted");
    }
    contradiction("5.1.2 exhausted");
  }

  // ---- 5.1.3: (1,2),(1,a) in L; 1, 2, a only in pairs of R ----
  Outcome three_a_pairs() {
    const Leaf one = kOne, two = kTwo, a = kA;
    for (Leaf x : pairs_from(R, one)) {
      for (Leaf y : pairs_into(R, two))
        if (attempt({rel(R, {P(one, x), P(y, two)}, {P(one, two), P(y, x)})})) return Outcome::Deleted;
      for (Leaf z : pairs_into(R, a))
        if (attempt({rel(R, {P(one, x), P(z, a)}, {P(one, a), P(z, x)})})) return Outcome::Deleted;
    }
    const auto from_one = pairs_from(R, one);
    if (from_one.empty()) contradiction("1 missing from R pairs");
    const Leaf x = from_one.front();

    for (Leaf c : pairs_from(L, x))
      if (c != one && attempt({rel(L, {P(x, c), P(one, two)}, {P(x, two), P(one, c)})}))
        return Outcome::Deleted;
    if (has_pair(L, x, one)) {
      for (const auto& t : triples(R, kG2, one))
        if (attempt({rel(R, {t.flow, P(x, two)}, {moved(t, one, two), P(x, one)})}))
          return Outcome::Deleted;
      for (Leaf s : pairs_into(R, one)) {
        if (attempt({rel(R, {P(s, one), P(x, two)}, {P(x, one), P(s, two)})})) return Outcome::Deleted;
        if (attempt({rel(R, {P(s, one), P(x, a)}, {P(x, one), P(s, a)})})) return Outcome::Deleted;
      }
      contradiction("(x,1) in L cannot be matched");
    }
    for (Leaf c : pairs_into(L, x)) {
      if (attempt({rel(L, {P(c, x), P(one, two)}, {P(c, two), P(one, x)})})) return Outcome::Deleted;
      if (attempt({rel(L, {P(c, x), P(one, a)}, {P(c, a), P(one, x)})})) return Outcome::Deleted;
    }
    contradiction("5.1.3 exhausted");
  }

  // ---- 5.2.1: (1,2),(a,1) in L; 1 in a g1-triple of R ----
  Outcome three_b_g1_triple() {
    const Leaf one = kOne, two = kTwo, a = kA;
    for (const auto& t : triples(R, kG1, one))
      for (Leaf z : pairs_into(R, two))
        if (attempt({rel(R, {t.flow, P(z, two)}, {moved(t, one, z), P(one, two)})}))
          return Outcome::Deleted;
    const auto into_two = pairs_into(R, two);
    if (into_two.empty()) contradiction("2 missing from R pairs");
    const TripleRef t1 = triples(R, kG1, one).front();
    const Leaf x = into_two.front();
    if (!t1.contains(x)) contradiction("(z,2) outside the triple");
    const Leaf y = t1.other(one, x);
    if (!has_pair(R, two, one)) contradiction("1 with g2 in R is not (2,1)");

    if (attempt({rel(L, {P(one, two), P(a, one), P(two, a)}, {P(one, a), P(two, one), P(a, two)})}))
      return Outcome::Deleted;
    for (const auto& w : triples(L, kG1, two))
      if (!w.contains(a) && attempt({rel(L, {w.flow, P(a, one)}, {moved(w, two, a), P(two, one)})}))
        return Outcome::Deleted;

    if (!pairs_from(R, a).empty()) {
      // The pair is (x,2) with x = a, so R holds (1,a,y).
      for (const auto& w : triples(L, kG1, two)) {
        const Leaf d = w.other(two, a);
        if (attempt({rel(L, {w.flow, P(one, two)}, {moved(w, d, one), P(d, two)}),
                     rel(R, {t1.flow, P(two, one)}, {moved(t1, y, two), P(y, one)})}))
          return Outcome::Deleted;
      }
      contradiction("5.2.1 pair branch exhausted");
    }
    for (const auto& u : triples(R, kG1, a))
      if (!u.contains(two) &&
          attempt({rel(R, {u.flow, P(two, one)}, {P(a, one), moved(u, a, two)})}))
        return Outcome::Deleted;
    contradiction("2 only with a in L and a only with 2 in R");
  }

  // ---- 5.2.2: (1,2),(a,1) in L; 1 in no g1-triple, 2 in a g2-triple of R ----
  Outcome three_b_g2_triple() {
    const Leaf one = kOne, two = kTwo, a = kA;
    for (const auto& t : triples(R, kG2, two))
      for (Leaf x : pairs_from(R, one))
        if (attempt({rel(R, {P(one, x), t.flow}, {P(one, two), moved(t, two, x)})}))
          return Outcome::Deleted;
    const auto from_one = pairs_from(R, one), from_a = pairs_from(R, a);
    if (from_one.empty() || from_a.empty()) contradiction("1 or a missing from R pairs");
    if (from_one.front() != a) contradiction("(1,x) in R with x != a");
    const Leaf s = from_a.front();

    for (Leaf c : pairs_into(R, one))
      if (attempt({rel(R, {P(one, a), P(a, c), P(c, one)}, {P(one, c), P(a, one), P(c, a)})}))
        return Outcome::Deleted;
    for (const auto& t : triples(R, kG2, one))
      if (!t.contains(s) && attempt({rel(R, {t.flow, P(a, s)}, {P(a, one), moved(t, one, s)})}))
        return Outcome::Deleted;

    if (attempt({rel(L, {P(one, two), P(a, one), P(two, a)}, {P(one, a), P(two, one), P(a, two)})}))
      return Outcome::Deleted;
    for (const auto& w : triples(L, kG2, a))
      if (attempt({rel(L, {w.flow, P(one, two)}, {moved(w, a, two), P(one, a)})}))
        return Outcome::Deleted;

    if (pairs_into(R, two).empty()) {
      for (const auto& t : triples(R, kG2, two))
        if (!t.contains(a) && attempt({rel(R, {P(one, a), t.flow}, {P(one, two), moved(t, two, a)})}))
          return Outcome::Deleted;
      contradiction("a only with 2 in L and 2 only with a in R");
    }
    // (a,2) and (1,2,e) are in R; (a,2,i) is in L.
    for (const auto& w : triples(L, kG2, a)) {
      const Leaf i = w.other(a, two);
      for (const auto& t : triples(R, kG2, one)) {
        const Leaf e = t.other(one, two);
        if (attempt({rel(L, {w.flow, P(a, one)}, {moved(w, i, one), P(a, i)}),
                     rel(R, {t.flow, P(one, a)}, {moved(t, e, a), P(one, e)})}))
          return Outcome::Deleted;
      }
    }
    contradiction("5.2.2 exhausted");
  }

  // ---- 5.2.3: (1,2),(a,1) in L; 1, 2 and a only in pairs of R ----
  Outcome three_b_pairs() {
    const Leaf one = kOne, two = kTwo, a = kA;
    for (Leaf x : pairs_from(R, one))
      for (Leaf x2 : pairs_into(R, two))
        if (x != x2 && attempt({rel(R, {P(one, x), P(x2, two)}, {P(one, two), P(x2, x)})}))
          return Outcome::Deleted;
    for (Leaf y : pairs_into(R, one))
      for (Leaf y2 : pairs_from(R, a))
        if (y != y2 && attempt({rel(R, {P(y, one), P(a, y2)}, {P(a, one), P(y, y2)})}))
          return Outcome::Deleted;
    for (Leaf x : pairs_from(R, one))
      if (attempt({rel(R, {P(one, x), P(x, two), P(two, one)}, {P(one, two), P(two, x), P(x, one)})}))
        return Outcome::Deleted;
    contradiction("5.2.3 exhausted");
  }

  // ---- 6: pairs use only leaves 1 and 2 on each side ----
  Outcome two_index_pairs() {
    const Leaf one = kOne, two = kTwo;
    for (const auto& t : triples(R, kG2, two))
      for (Leaf x : pairs_from(R, one))
        if (attempt({rel(R, {t.flow, P(one, x)}, {moved(t, two, x), P(one, two)})}))
          return Outcome::Deleted;
    const auto from_one = pairs_from(R, one);
    if (from_one.empty()) contradiction("1 missing from R pairs");
    const Leaf x = from_one.front();
    for (const auto& w : triples(L, kG2, x))
      if (!w.contains(two) &&
          attempt({rel(L, {w.flow, P(one, two)}, {moved(w, x, two), P(one, x)})}))
        return Outcome::Deleted;
    contradiction("x only with 2 in L and 2 only with x in R");
  }

  Workspace& ws_;
  CaseTag tag_;
  int r_;
};

}  // namespace detail

}  // namespace phylosat
