#pragma once

#include <optional>
#include <string>
#include <utility>

#include "phylosat/flow.hpp"

namespace phylosat {

/// A pair of flow multisets with equal tallies: the binomial x_L - x_R. Sides are
/// kept sorted in the canonical flow order. Not necessarily disjoint; see
/// cancel_common.
class Relation {
 public:
  Relation() = default;

  /// Builds a relation after checking shapes, degrees and tallies.
  static Relation validated(FlowMultiset left, FlowMultiset right, int leaves, int modulus = 3) {
    for (const auto* side : {&left, &right}) {
      for (const auto& f : *side) {
        if (f.leaves() != leaves) throw Error(ErrorKind::LeafCountMismatch, "flow has wrong r");
        if (f.modulus() != modulus) throw Error(ErrorKind::ModulusMismatch, "flow group differs");
      }
    }
    if (left.size() != right.size()) {
      throw Error(ErrorKind::DegreeMismatch, "sides have " + std::to_string(left.size()) +
                                                 " and " + std::to_string(right.size()) + " flows");
    }
    if (tally(left, leaves, modulus) != tally(right, leaves, modulus)) {
      throw Error(ErrorKind::TallyMismatch, "per-leaf tallies differ");
    }
    return Relation(sorted(std::move(left)), sorted(std::move(right)), leaves, modulus);
  }

  static Relation empty(int leaves, int modulus = 3) { return Relation({}, {}, leaves, modulus); }

  /// No validation; for producers that preserve tally equality by construction.
  static Relation trusted(FlowMultiset left, FlowMultiset right, int leaves, int modulus = 3) {
    return Relation(sorted(std::move(left)), sorted(std::move(right)), leaves, modulus);
  }

  const FlowMultiset& left() const noexcept { return left_; }
  const FlowMultiset& right() const noexcept { return right_; }
  int leaves() const noexcept { return leaves_; }
  int modulus() const noexcept { return modulus_; }
  int degree() const noexcept { return static_cast<int>(left_.size()); }
  bool empty() const noexcept { return left_.empty() && right_.empty(); }
  bool disjoint() const { return common_part(left_, right_).empty(); }

  Relation swapped() const { return Relation(right_, left_, leaves_, modulus_); }

  /// Smaller side first; used as a deduplication key.
  Relation canonical() const { return right_ < left_ ? swapped() : *this; }

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation& a, const Relation& b) {
    return std::tie(a.leaves_, a.modulus_, a.left_, a.right_) <=>
           std::tie(b.leaves_, b.modulus_, b.left_, b.right_);
  }

 private:
  Relation(FlowMultiset left, FlowMultiset right, int leaves, int modulus)
      : left_(std::move(left)), right_(std::move(right)), leaves_(leaves), modulus_(modulus) {}

  FlowMultiset left_;
  FlowMultiset right_;
  int leaves_ = 0;
  int modulus_ = 3;
};

/// Removes the maximal common sub-multiset from both sides.
inline std::pair<Relation, FlowMultiset> cancel_common(const Relation& rel) {
  FlowMultiset common = common_part(rel.left(), rel.right());
  if (common.empty()) return {rel, {}};
  FlowMultiset left = rel.left(), right = rel.right();
  remove_all(left, common);
  remove_all(right, common);
  return {Relation::trusted(std::move(left), std::move(right), rel.leaves(), rel.modulus()),
          std::move(common)};
}

/// Validates (L, R) as an invariant and returns its canceled form.
inline Relation check_relation(FlowMultiset left, FlowMultiset right, int leaves,
                               int modulus = 3) {
  return cancel_common(Relation::validated(std::move(left), std::move(right), leaves, modulus))
      .first;
}

inline int grading(const Relation& rel) {
  int total = 0;
  for (const auto& f : rel.left()) total += f.size();
  for (const auto& f : rel.right()) total += f.size();
  return total;
}

/// A disjoint relation of degree 2 (quadric) or 3 (cubic).
class Generator {
 public:
  const Relation& relation() const noexcept { return rel_; }
  int degree() const noexcept { return rel_.degree(); }
  bool is_quadric() const noexcept { return degree() == 2; }
  bool is_cubic() const noexcept { return degree() == 3; }

  friend bool operator==(const Generator&, const Generator&) = default;

 private:
  explicit Generator(Relation rel) : rel_(std::move(rel)) {}
  friend std::optional<Generator> is_generator(const Relation& rel);

  Relation rel_;
};

inline std::optional<Generator> is_generator(const Relation& rel) {
  if (rel.degree() < 2 || rel.degree() > 3 || !rel.disjoint()) return std::nullopt;
  if (rel.left().size() != rel.right().size()) return std::nullopt;
  if (tally(rel.left(), rel.leaves(), rel.modulus()) !=
      tally(rel.right(), rel.leaves(), rel.modulus())) {
    return std::nullopt;
  }
  return Generator(rel);
}

}  // namespace phylosat
