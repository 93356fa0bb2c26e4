#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "phylosat/relation.hpp"

namespace phylosat {

/// Side swap, g1<->g2 conjugation and leaf renaming. `leaf_map[i]` is the new
/// index of old leaf i. Conjugation and renaming commute, so the order in which
/// they are applied does not matter.
struct SymmetryFrame {
  bool side_swapped = false;
  bool group_conjugated = false;
  std::vector<Leaf> leaf_map;

  static SymmetryFrame identity(int leaves) {
    SymmetryFrame f;
    f.leaf_map.resize(static_cast<std::size_t>(leaves));
    std::iota(f.leaf_map.begin(), f.leaf_map.end(), 0);
    return f;
  }

  /// Frame sending named[k] to leaf k; the remaining leaves keep their relative
  /// order after the named ones.
  static SymmetryFrame naming(int leaves, const std::vector<Leaf>& named, bool swap = false,
                              bool conjugate = false) {
    SymmetryFrame f;
    f.side_swapped = swap;
    f.group_conjugated = conjugate;
    f.leaf_map.assign(static_cast<std::size_t>(leaves), -1);
    Leaf next = 0;
    for (Leaf old : named) {
      if (old < 0 || old >= leaves || f.leaf_map[static_cast<std::size_t>(old)] != -1) {
        throw Error(ErrorKind::Malformed, "frame names must be distinct leaves");
      }
      f.leaf_map[static_cast<std::size_t>(old)] = next++;
    }
    for (auto& slot : f.leaf_map)
      if (slot == -1) slot = next++;
    return f;
  }

  SymmetryFrame inverse() const {
    SymmetryFrame inv;
    inv.side_swapped = side_swapped;
    inv.group_conjugated = group_conjugated;
    inv.leaf_map.assign(leaf_map.size(), 0);
    for (std::size_t i = 0; i < leaf_map.size(); ++i) {
      inv.leaf_map[static_cast<std::size_t>(leaf_map[i])] = static_cast<Leaf>(i);
    }
    return inv;
  }

  bool is_permutation_of(int leaves) const {
    if (leaf_map.size() != static_cast<std::size_t>(leaves)) return false;
    std::vector<Leaf> sorted_map = leaf_map;
    std::sort(sorted_map.begin(), sorted_map.end());
    for (std::size_t i = 0; i < sorted_map.size(); ++i)
      if (sorted_map[i] != static_cast<Leaf>(i)) return false;
    return true;
  }

  friend bool operator==(const SymmetryFrame&, const SymmetryFrame&) = default;
};

inline Flow apply_frame(const Flow& f, const SymmetryFrame& frame) {
  const int n = f.modulus();
  std::vector<std::uint8_t> labels(f.residues().size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int v = f.residues()[i];
    if (frame.group_conjugated) v = (n - v) % n;
    labels[static_cast<std::size_t>(frame.leaf_map[i])] = static_cast<std::uint8_t>(v);
  }
  return Flow::trusted(std::move(labels), n);
}

inline FlowMultiset apply_frame(const FlowMultiset& side, const SymmetryFrame& frame) {
  FlowMultiset out;
  out.reserve(side.size());
  for (const auto& f : side) out.push_back(apply_frame(f, frame));
  return sorted(std::move(out));
}

inline Relation apply_frame(const Relation& rel, const SymmetryFrame& frame) {
  if (!frame.is_permutation_of(rel.leaves())) {
    throw Error(ErrorKind::Malformed, "frame permutation does not match leaf count");
  }
  auto left = apply_frame(rel.left(), frame);
  auto right = apply_frame(rel.right(), frame);
  if (frame.side_swapped) std::swap(left, right);
  return Relation::trusted(std::move(left), std::move(right), rel.leaves(), rel.modulus());
}

}  // namespace phylosat
