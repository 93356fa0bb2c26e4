#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "phylosat/error.hpp"
#include "phylosat/group.hpp"

namespace phylosat {

using Leaf = int;  // 0-based leaf index; reports print leaf + 1

/// A group-based flow on the claw tree K_{1,r}: one label per leaf edge, labels
/// summing to the identity. Immutable once built.
class Flow {
 public:
  Flow() = default;

  /// Validating constructor from raw residues.
  static Flow from_residues(std::span<const int> residues, int modulus = 3) {
    if (residues.empty()) throw Error(ErrorKind::Malformed, "flow needs at least one leaf");
    if (modulus < 1 || modulus > 255) throw Error(ErrorKind::Malformed, "bad modulus");
    std::vector<std::uint8_t> labels;
    labels.reserve(residues.size());
    int sum = 0;
    for (int v : residues) {
      if (v < 0 || v >= modulus) {
        throw Error(ErrorKind::Malformed,
                    "residue " + std::to_string(v) + " outside Z_" + std::to_string(modulus));
      }
      labels.push_back(static_cast<std::uint8_t>(v));
      sum += v;
    }
    if (sum % modulus != 0) throw Error(ErrorKind::NonZeroSum, "labels do not sum to zero");
    return Flow(std::move(labels), modulus);
  }

  static Flow from_residues(std::initializer_list<int> residues, int modulus = 3) {
    return from_residues(std::span<const int>(residues.begin(), residues.size()), modulus);
  }

  static Flow zero(int leaves, int modulus = 3) {
    return Flow(std::vector<std::uint8_t>(static_cast<std::size_t>(leaves), 0), modulus);
  }

  /// Unchecked construction for internal producers that keep the zero sum by
  /// construction. Callers that cannot guarantee it must use from_residues.
  static Flow trusted(std::vector<std::uint8_t> labels, int modulus) {
    return Flow(std::move(labels), modulus);
  }

  int leaves() const noexcept { return static_cast<int>(labels_.size()); }
  int modulus() const noexcept { return modulus_; }
  int size() const noexcept { return size_; }
  bool is_zero() const noexcept { return size_ == 0; }

  int residue(Leaf i) const { return labels_.at(static_cast<std::size_t>(i)); }
  GroupElement at(Leaf i) const { return {residue(i), modulus_}; }
  const std::vector<std::uint8_t>& residues() const noexcept { return labels_; }

  friend bool operator==(const Flow& a, const Flow& b) {
    return a.modulus_ == b.modulus_ && a.labels_ == b.labels_;
  }
  friend std::strong_ordering operator<=>(const Flow& a, const Flow& b) {
    if (auto c = a.modulus_ <=> b.modulus_; c != 0) return c;
    return a.labels_ <=> b.labels_;
  }

 private:
  Flow(std::vector<std::uint8_t> labels, int modulus)
      : labels_(std::move(labels)), modulus_(static_cast<std::uint8_t>(modulus)) {
    size_ = static_cast<int>(std::count_if(labels_.begin(), labels_.end(),
                                           [](std::uint8_t v) { return v != 0; }));
  }

  std::vector<std::uint8_t> labels_;
  std::uint8_t modulus_ = 3;
  int size_ = 0;
};

inline Flow make_flow(std::span<const GroupElement> labels) {
  if (labels.empty()) throw Error(ErrorKind::Malformed, "flow needs at least one leaf");
  const int modulus = labels.front().modulus();
  std::vector<int> residues;
  residues.reserve(labels.size());
  for (auto g : labels) {
    require_same_group(labels.front(), g);
    residues.push_back(g.value());
  }
  return Flow::from_residues(residues, modulus);
}

/// Pair/triple taxonomy for Z_3 flows.
struct FlowClass {
  enum class Kind { Zero, Pair, TripleG1, TripleG2, General };

  Kind kind = Kind::Zero;
  std::array<Leaf, 3> leaves{};  // Pair: {g1 leaf, g2 leaf}; triples: ascending
  int size = 0;

  friend bool operator==(const FlowClass&, const FlowClass&) = default;
};

inline FlowClass classify(const Flow& f) {
  FlowClass c;
  c.size = f.size();
  if (f.is_zero()) return c;
  if (f.modulus() != 3 || f.size() > 3) {
    c.kind = FlowClass::Kind::General;
    return c;
  }
  std::vector<Leaf> ones, twos;
  for (Leaf i = 0; i < f.leaves(); ++i) {
    if (f.residue(i) == z3::kG1) ones.push_back(i);
    if (f.residue(i) == z3::kG2) twos.push_back(i);
  }
  if (ones.size() == 1 && twos.size() == 1) {
    c.kind = FlowClass::Kind::Pair;
    c.leaves = {ones[0], twos[0], -1};
  } else if (ones.size() == 3) {
    c.kind = FlowClass::Kind::TripleG1;
    c.leaves = {ones[0], ones[1], ones[2]};
  } else if (twos.size() == 3) {
    c.kind = FlowClass::Kind::TripleG2;
    c.leaves = {twos[0], twos[1], twos[2]};
  } else {
    c.kind = FlowClass::Kind::General;  // unreachable for valid Z_3 flows
  }
  return c;
}

inline bool is_pair(const Flow& f) { return classify(f).kind == FlowClass::Kind::Pair; }

/// Inverse of classify for the Zero/Pair/Triple classes. Returns false when the
/// leaves collide or fall outside 0..r-1.
inline bool build_flow(const FlowClass& c, int leaves, Flow& out) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(leaves), 0);
  auto put = [&](Leaf i, int v) {
    if (i < 0 || i >= leaves || labels[static_cast<std::size_t>(i)] != 0) return false;
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
    return true;
  };
  switch (c.kind) {
    case FlowClass::Kind::Zero:
      break;
    case FlowClass::Kind::Pair:
      if (!put(c.leaves[0], z3::kG1) || !put(c.leaves[1], z3::kG2)) return false;
      break;
    case FlowClass::Kind::TripleG1:
    case FlowClass::Kind::TripleG2: {
      const int v = c.kind == FlowClass::Kind::TripleG1 ? z3::kG1 : z3::kG2;
      for (Leaf i : c.leaves)
        if (!put(i, v)) return false;
      break;
    }
    case FlowClass::Kind::General:
      return false;
  }
  out = Flow::trusted(std::move(labels), 3);
  return true;
}

inline Flow pair_flow(int leaves, Leaf g1_leaf, Leaf g2_leaf) {
  Flow f;
  if (!build_flow({FlowClass::Kind::Pair, {g1_leaf, g2_leaf, -1}, 2}, leaves, f)) {
    throw Error(ErrorKind::Malformed, "pair leaves must be distinct and in range");
  }
  return f;
}

inline Flow triple_flow(int leaves, int element, Leaf a, Leaf b, Leaf c) {
  const auto kind = element == z3::kG1 ? FlowClass::Kind::TripleG1 : FlowClass::Kind::TripleG2;
  Flow f;
  if (!build_flow({kind, {a, b, c}, 3}, leaves, f)) {
    throw Error(ErrorKind::Malformed, "triple leaves must be distinct and in range");
  }
  return f;
}

inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 22;

/// All flows on K_{1,r} over Z_n in canonical order; n^(r-1) of them.
inline std::vector<Flow> enumerate_flows(int leaves, int modulus = 3,
                                         std::size_t limit = kDefaultEnumerationLimit) {
  if (leaves < 1) throw Error(ErrorKind::Malformed, "leaf count must be positive");
  std::size_t count = 1;
  for (int i = 1; i < leaves; ++i) {
    count *= static_cast<std::size_t>(modulus);
    if (count > limit) {
      throw Error(ErrorKind::BudgetExceeded, "flow enumeration beyond configured limit");
    }
  }
  std::vector<Flow> out;
  out.reserve(count);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(leaves), 0);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t rest = code;
    int sum = 0;
    // Most significant digit first so that code order is lexicographic order.
    for (int i = leaves - 2; i >= 0; --i) {
      labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rest % modulus);
      sum += labels[static_cast<std::size_t>(i)];
      rest /= static_cast<std::size_t>(modulus);
    }
    labels.back() = static_cast<std::uint8_t>((modulus - sum % modulus) % modulus);
    out.push_back(Flow::trusted(labels, modulus));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Per-leaf occurrence counts of each nontrivial element.
class Tally {
 public:
  Tally() = default;
  Tally(int leaves, int modulus)
      : leaves_(leaves),
        modulus_(modulus),
        counts_(static_cast<std::size_t>(leaves) * static_cast<std::size_t>(modulus - 1), 0) {}

  int leaves() const noexcept { return leaves_; }
  int modulus() const noexcept { return modulus_; }

  int count(Leaf leaf, int residue) const {
    if (residue <= 0 || residue >= modulus_) return 0;
    return counts_.at(index(leaf, residue));
  }

  void add(const Flow& f, int times = 1) {
    check_shape(f.leaves(), f.modulus());
    for (Leaf i = 0; i < leaves_; ++i) {
      const int v = f.residue(i);
      if (v != 0) counts_[index(i, v)] += times;
    }
  }

  Tally& operator+=(const Tally& other) {
    check_shape(other.leaves_, other.modulus_);
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
    return *this;
  }
  friend Tally operator+(Tally a, const Tally& b) { return a += b; }

  bool is_zero() const {
    return std::all_of(counts_.begin(), counts_.end(), [](int c) { return c == 0; });
  }
  const std::vector<int>& raw() const noexcept { return counts_; }

  friend bool operator==(const Tally&, const Tally&) = default;
  friend auto operator<=>(const Tally&, const Tally&) = default;

 private:
  std::size_t index(Leaf leaf, int residue) const {
    return static_cast<std::size_t>(leaf) * static_cast<std::size_t>(modulus_ - 1) +
           static_cast<std::size_t>(residue - 1);
  }
  void check_shape(int leaves, int modulus) const {
    if (leaves != leaves_) throw Error(ErrorKind::LeafCountMismatch, "tally over mixed r");
    if (modulus != modulus_) throw Error(ErrorKind::ModulusMismatch, "tally over mixed groups");
  }

  int leaves_ = 0;
  int modulus_ = 3;
  std::vector<int> counts_;
};

using FlowMultiset = std::vector<Flow>;

inline Tally tally(std::span<const Flow> flows, int leaves, int modulus = 3) {
  Tally t(leaves, modulus);
  for (const auto& f : flows) t.add(f);
  return t;
}

/// Tally of a nonempty multiset; the shape is taken from its first flow.
inline Tally tally(std::span<const Flow> flows) {
  if (flows.empty()) throw Error(ErrorKind::Malformed, "tally of an empty multiset needs r");
  return tally(flows, flows.front().leaves(), flows.front().modulus());
}

// Multiset helpers on sorted vectors.

inline FlowMultiset sorted(FlowMultiset m) {
  std::sort(m.begin(), m.end());
  return m;
}

inline bool contains(const FlowMultiset& sorted_side, const Flow& f) {
  return std::binary_search(sorted_side.begin(), sorted_side.end(), f);
}

/// Removes every element of `part` from `side` (both sorted). Returns false and
/// leaves `side` untouched when `part` is not a sub-multiset.
inline bool remove_all(FlowMultiset& side, const FlowMultiset& part) {
  if (!std::includes(side.begin(), side.end(), part.begin(), part.end())) return false;
  FlowMultiset rest;
  rest.reserve(side.size() - part.size());
  std::set_difference(side.begin(), side.end(), part.begin(), part.end(),
                      std::back_inserter(rest));
  side = std::move(rest);
  return true;
}

inline void insert_all(FlowMultiset& side, const FlowMultiset& part) {
  FlowMultiset merged;
  merged.reserve(side.size() + part.size());
  std::merge(side.begin(), side.end(), part.begin(), part.end(), std::back_inserter(merged));
  side = std::move(merged);
}

inline FlowMultiset common_part(const FlowMultiset& a, const FlowMultiset& b) {
  FlowMultiset out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace phylosat
