#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "phylosat/certificate.hpp"

// The verifier deliberately uses nothing from the reduction engine: every check
// is a recount over raw labels.

namespace phylosat {

struct CertificateStats {
  int n = 0;
  int quadrics = 0;
  int cubics = 0;
  int deletes = 0;
  int peak_degree = 0;
  int peak_grading = 0;

  friend bool operator==(const CertificateStats&, const CertificateStats&) = default;
};

struct VerifyReport {
  bool accepted = false;
  std::optional<int> failing_step;  // index into steps; -1 for the original or the end state
  std::optional<std::string> clause;
  std::string message;
  FlowMultiset left_at_failure;
  FlowMultiset right_at_failure;
  CertificateStats stats;
};

namespace verify_detail {

inline bool same_shape(const Flow& f, int leaves, int modulus) {
  return f.leaves() == leaves && f.modulus() == modulus;
}

inline bool multiset_equal(FlowMultiset a, FlowMultiset b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline bool is_submultiset(FlowMultiset part, FlowMultiset whole) {
  std::sort(part.begin(), part.end());
  std::sort(whole.begin(), whole.end());
  return std::includes(whole.begin(), whole.end(), part.begin(), part.end());
}

inline void remove_one_each(FlowMultiset& side, const FlowMultiset& part) {
  for (const auto& f : part) side.erase(std::find(side.begin(), side.end(), f));
}

/// Counts each (leaf, residue) over a multiset straight from the labels.
inline std::vector<int> recount(const FlowMultiset& flows, int leaves, int modulus) {
  std::vector<int> counts(static_cast<std::size_t>(leaves * modulus), 0);
  for (const auto& f : flows)
    for (int i = 0; i < leaves; ++i) ++counts[static_cast<std::size_t>(i * modulus + f.residue(i))];
  return counts;
}

inline bool labels_sum_to_zero(const Flow& f) {
  int sum = 0;
  for (int i = 0; i < f.leaves(); ++i) sum += f.residue(i);
  return sum % f.modulus() == 0;
}

inline bool valid_generator(const Relation& g, int leaves, int modulus) {
  const auto& l = g.left();
  const auto& r = g.right();
  if (l.size() != r.size() || l.size() < 2 || l.size() > 3) return false;
  for (const auto* side : {&l, &r})
    for (const auto& f : *side)
      if (!same_shape(f, leaves, modulus) || !labels_sum_to_zero(f)) return false;
  for (const auto& f : l)
    if (std::find(r.begin(), r.end(), f) != r.end()) return false;
  return recount(l, leaves, modulus) == recount(r, leaves, modulus);
}

inline int size_sum(const FlowMultiset& side) {
  int s = 0;
  for (const auto& f : side)
    for (int i = 0; i < f.leaves(); ++i) s += f.residue(i) != 0;
  return s;
}

}  // namespace verify_detail

/// Replays the certificate from its original relation. Clauses:
/// (a) original is a valid relation, (b) add-zero pads both sides, (c) each
/// generator is valid and applies to its side, (d) deletions are common,
/// (e) a final step equals the residual, (f) the replay ends empty; clause "n"
/// checks the declared padding exponent.
inline VerifyReport verify(const Certificate& cert) {
  using namespace verify_detail;
  VerifyReport rep;
  const Relation& orig = cert.original;
  const int r = orig.leaves();
  const int m = orig.modulus();
  FlowMultiset left = orig.left(), right = orig.right();

  auto fail = [&](int step, const char* clause, std::string msg) {
    rep.accepted = false;
    rep.failing_step = step;
    rep.clause = clause;
    rep.message = std::move(msg);
    rep.left_at_failure = left;
    rep.right_at_failure = right;
    return rep;
  };
  auto observe = [&] {
    rep.stats.peak_degree = std::max(rep.stats.peak_degree, static_cast<int>(left.size()));
    rep.stats.peak_grading = std::max(rep.stats.peak_grading, size_sum(left) + size_sum(right));
  };

  if (m < 2 || r < 1) return fail(-1, "a", "bad leaf count or modulus");
  if (left.size() != right.size()) return fail(-1, "a", "sides differ in cardinality");
  for (const auto* side : {&left, &right})
    for (const auto& f : *side)
      if (!same_shape(f, r, m) || !labels_sum_to_zero(f)) return fail(-1, "a", "invalid flow");
  if (recount(left, r, m) != recount(right, r, m)) return fail(-1, "a", "tallies differ");
  observe();

  const Flow zero = Flow::zero(r, m);
  int pads = 0;
  for (std::size_t k = 0; k < cert.steps.size(); ++k) {
    const int idx = static_cast<int>(k);
    const Step& step = cert.steps[k];
    if (std::holds_alternative<AddZeroFlow>(step)) {
      left.push_back(zero);
      right.push_back(zero);
      ++pads;
    } else if (const auto* g = std::get_if<ApplyGenerator>(&step)) {
      const Relation& gen = g->generator;
      if (gen.leaves() != r || gen.modulus() != m) return fail(idx, "c", "generator on another star");
      if (!valid_generator(gen, r, m)) return fail(idx, "c", "generator is not a valid relation");
      const bool forward = multiset_equal(gen.left(), g->removed) && multiset_equal(gen.right(), g->added);
      const bool backward = multiset_equal(gen.right(), g->removed) && multiset_equal(gen.left(), g->added);
      if (!forward && !backward) return fail(idx, "c", "removed/added differ from the generator");
      FlowMultiset& side = g->side == Side::Left ? left : right;
      if (!is_submultiset(g->removed, side)) return fail(idx, "c", "removed flows not on the side");
      if (recount(g->removed, r, m) != recount(g->added, r, m)) {
        return fail(idx, "c", "replacement changes the side's tally");
      }
      remove_one_each(side, g->removed);
      side.insert(side.end(), g->added.begin(), g->added.end());
      (gen.degree() == 2 ? rep.stats.quadrics : rep.stats.cubics)++;
    } else if (const auto* d = std::get_if<DeleteCommon>(&step)) {
      if (!same_shape(d->flow, r, m)) return fail(idx, "d", "flow on another star");
      const bool in_left = std::find(left.begin(), left.end(), d->flow) != left.end();
      const bool in_right = std::find(right.begin(), right.end(), d->flow) != right.end();
      if (!in_left || !in_right) return fail(idx, "d", "deleted flow is not on both sides");
      remove_one_each(left, {d->flow});
      remove_one_each(right, {d->flow});
      ++rep.stats.deletes;
    } else {
      const auto& fin = std::get<EmitFinal>(step).generator;
      if (fin.leaves() != r || fin.modulus() != m) return fail(idx, "e", "generator on another star");
      if (!valid_generator(fin, r, m)) return fail(idx, "e", "final generator is not valid");
      const bool equal = (multiset_equal(fin.left(), left) && multiset_equal(fin.right(), right)) ||
                         (multiset_equal(fin.left(), right) && multiset_equal(fin.right(), left));
      if (!equal) return fail(idx, "e", "final generator differs from the residual");
      (fin.degree() == 2 ? rep.stats.quadrics : rep.stats.cubics)++;
      left.clear();
      right.clear();
    }
    observe();
  }
  if (!left.empty() || !right.empty()) return fail(-1, "f", "replay does not end empty");
  if (pads != cert.n) return fail(-1, "n", "declared n differs from the add-zero count");
  rep.stats.n = pads;
  rep.accepted = true;
  return rep;
}

/// Statistics of a certificate; meaningful for accepted ones.
inline CertificateStats stats(const Certificate& cert) { return verify(cert).stats; }

}  // namespace phylosat
