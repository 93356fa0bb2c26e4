#pragma once

#include <string>
#include <utility>
#include <vector>

#include "phylosat/certificate.hpp"
#include "phylosat/frame.hpp"

namespace phylosat {

/// Mutable replay state of a reduction: the two sides of the current binomial
/// plus the steps that produced it. Every mutation is checked and recorded.
class Workspace {
 public:
  explicit Workspace(const Relation& rel)
      : left_(rel.left()), right_(rel.right()), leaves_(rel.leaves()), modulus_(rel.modulus()) {}

  int leaves() const noexcept { return leaves_; }
  int modulus() const noexcept { return modulus_; }
  int degree() const noexcept { return static_cast<int>(left_.size()); }
  int padding() const noexcept { return padding_; }

  const FlowMultiset& side(Side s) const { return s == Side::Left ? left_ : right_; }
  Relation relation() const { return Relation::trusted(left_, right_, leaves_, modulus_); }
  const std::vector<Step>& steps() const noexcept { return steps_; }
  std::vector<Step> take_steps() { return std::exchange(steps_, {}); }

  Flow zero() const { return Flow::zero(leaves_, modulus_); }
  bool has(Side s, const Flow& f) const { return contains(side(s), f); }

  void add_zero() {
    insert_all(left_, {zero()});
    insert_all(right_, {zero()});
    ++padding_;
    steps_.emplace_back(AddZeroFlow{});
  }

  /// Checks that removed -> added is a usable generator on side `s` once the
  /// flows common to both lists are dropped. Returns the reduced lists.
  bool prepare(Side s, FlowMultiset& removed, FlowMultiset& added) const {
    removed = sorted(std::move(removed));
    added = sorted(std::move(added));
    const FlowMultiset shared = common_part(removed, added);
    remove_all(removed, shared);
    remove_all(added, shared);
    if (removed.size() < 2 || removed.size() > 3 || removed.size() != added.size()) return false;
    if (!std::includes(side(s).begin(), side(s).end(), removed.begin(), removed.end())) {
      return false;
    }
    for (const auto& f : added)
      if (f.leaves() != leaves_ || f.modulus() != modulus_) return false;
    return tally(removed, leaves_, modulus_) == tally(added, leaves_, modulus_);
  }

  /// Applies removed = added on side `s`; throws when it is not a generator.
  void apply(Side s, FlowMultiset removed, FlowMultiset added, std::string tag) {
    if (!prepare(s, removed, added)) {
      throw Error(ErrorKind::InternalContradiction, "invalid generator application [" + tag + "]");
    }
    FlowMultiset& target = s == Side::Left ? left_ : right_;
    remove_all(target, removed);
    insert_all(target, added);
    Relation gen = Relation::trusted(removed, added, leaves_, modulus_);
    steps_.emplace_back(
        ApplyGenerator{s, std::move(removed), std::move(added), std::move(gen), std::move(tag)});
  }

  void delete_flow(const Flow& f) {
    FlowMultiset one{f};
    if (!has(Side::Left, f) || !has(Side::Right, f)) {
      throw Error(ErrorKind::InternalContradiction, "deleted flow is not on both sides");
    }
    remove_all(left_, one);
    remove_all(right_, one);
    steps_.emplace_back(DeleteCommon{f});
  }

  /// Deletes the whole common part; returns how many flows were removed per side.
  int delete_common() {
    const FlowMultiset shared = common_part(left_, right_);
    for (const auto& f : shared) delete_flow(f);
    return static_cast<int>(shared.size());
  }

  void emit_final() {
    const Relation residual = relation();
    if (residual.degree() < 2 || residual.degree() > 3 || !residual.disjoint()) {
      throw Error(ErrorKind::InternalContradiction, "residual is not a generator");
    }
    steps_.emplace_back(EmitFinal{residual});
    left_.clear();
    right_.clear();
  }

 private:
  FlowMultiset left_;
  FlowMultiset right_;
  int leaves_ = 0;
  int modulus_ = 3;
  int padding_ = 0;
  std::vector<Step> steps_;
};

}  // namespace phylosat
