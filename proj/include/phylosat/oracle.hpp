#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "phylosat/relation.hpp"

// Brute-force view of the main theorem: two multisets with equal tallies are
// joined by moves of bounded degree once both are padded with trivial flows.
// Nothing here looks at the shapes of flows.

namespace phylosat {

struct OracleBudget {
  std::size_t max_multisets = 4'000'000;  // enumeration of candidate sides
  std::size_t max_members = 2'000'000;    // fiber members / visited search states
};

struct Fiber {
  Tally tally;
  int degree = 0;
  std::vector<FlowMultiset> members;  // sorted, pairwise distinct
};

struct Connectivity {
  bool connected = false;
  int components = 0;
};

namespace oracle_detail {

using Members = std::vector<std::uint16_t>;  // sorted indices into the flow universe

struct Universe {
  int leaves = 0;
  int modulus = 3;
  std::vector<Flow> flows;                    // sorted
  std::vector<std::vector<int>> contribution;  // flow -> counts per (leaf, residue-1)

  Universe(int r, int m, const OracleBudget&) : leaves(r), modulus(m) {
    flows = enumerate_flows(r, m);
    const std::size_t width = static_cast<std::size_t>(r * (m - 1));
    for (const auto& f : flows) {
      std::vector<int> c(width, 0);
      for (int i = 0; i < r; ++i)
        if (f.residue(i) != 0) ++c[static_cast<std::size_t>(i * (m - 1) + f.residue(i) - 1)];
      contribution.push_back(std::move(c));
    }
  }

  std::uint16_t index_of(const Flow& f) const {
    const auto it = std::lower_bound(flows.begin(), flows.end(), f);
    if (it == flows.end() || *it != f) throw Error(ErrorKind::Malformed, "flow outside universe");
    return static_cast<std::uint16_t>(it - flows.begin());
  }

  Members indices(const FlowMultiset& side) const {
    Members out;
    for (const auto& f : side) out.push_back(index_of(f));
    std::sort(out.begin(), out.end());
    return out;
  }

  FlowMultiset flows_of(const Members& m) const {
    FlowMultiset out;
    for (auto i : m) out.push_back(flows[i]);
    return out;
  }

  std::vector<int> counts(const Members& m) const {
    std::vector<int> c(static_cast<std::size_t>(leaves * (modulus - 1)), 0);
    for (auto i : m)
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += contribution[i][k];
    return c;
  }

  /// All multisets of `degree` flows whose counts equal `target`.
  std::vector<Members> fiber(std::vector<int> target, int degree, std::size_t limit) const {
    std::vector<Members> out;
    Members current;
    const int width = modulus - 1;
    auto feasible = [&](int remaining) {
      for (int leaf = 0; leaf < leaves; ++leaf) {
        int nontrivial = 0;
        for (int v = 0; v < width; ++v) nontrivial += target[static_cast<std::size_t>(leaf * width + v)];
        if (nontrivial > remaining) return false;
      }
      return true;
    };
    auto rec = [&](auto&& self, std::size_t start, int remaining) -> void {
      if (remaining == 0) {
        if (std::all_of(target.begin(), target.end(), [](int c) { return c == 0; })) {
          if (out.size() >= limit) throw Error(ErrorKind::BudgetExceeded, "fiber too large");
          out.push_back(current);
        }
        return;
      }
      if (!feasible(remaining)) return;
      for (std::size_t i = start; i < flows.size(); ++i) {
        const auto& c = contribution[i];
        bool fits = true;
        for (std::size_t k = 0; k < c.size(); ++k) fits = fits && c[k] <= target[k];
        if (!fits) continue;
        for (std::size_t k = 0; k < c.size(); ++k) target[k] -= c[k];
        current.push_back(static_cast<std::uint16_t>(i));
        self(self, i, remaining - 1);
        current.pop_back();
        for (std::size_t k = 0; k < c.size(); ++k) target[k] += c[k];
      }
    };
    if (std::any_of(target.begin(), target.end(), [](int c) { return c < 0; })) return out;
    rec(rec, 0, degree);
    return out;
  }
};

/// Neighbours of a state under moves replacing a sub-multiset of size 2..d.
class MoveGraph {
 public:
  MoveGraph(const Universe& u, int move_degree, std::size_t limit)
      : u_(u), move_degree_(move_degree), limit_(limit) {}

  template <class Visit>
  void neighbours(const Members& state, Visit&& visit) {
    const int n = static_cast<int>(state.size());
    for (int s = 2; s <= std::min(move_degree_, n); ++s) {
      std::vector<int> pick(static_cast<std::size_t>(s));
      std::iota(pick.begin(), pick.end(), 0);
      std::set<Members> seen_parts;
      for (;;) {
        Members part;
        for (int p : pick) part.push_back(state[static_cast<std::size_t>(p)]);
        if (seen_parts.insert(part).second) {
          Members rest;
          std::size_t q = 0;
          for (int i = 0; i < n; ++i) {
            if (q < pick.size() && pick[q] == i) {
              ++q;
              continue;
            }
            rest.push_back(state[static_cast<std::size_t>(i)]);
          }
          for (const auto& alt : alternatives(part)) {
            if (alt == part) continue;
            Members next = rest;
            next.insert(next.end(), alt.begin(), alt.end());
            std::sort(next.begin(), next.end());
            visit(next);
          }
        }
        int k = s - 1;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == n - s + k) --k;
        if (k < 0) break;
        ++pick[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < s; ++j)
          pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }

 private:
  const std::vector<Members>& alternatives(const Members& part) {
    auto key = std::make_pair(static_cast<int>(part.size()), u_.counts(part));
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, u_.fiber(key.second, key.first, limit_)).first;
    }
    return it->second;
  }

  const Universe& u_;
  int move_degree_;
  std::size_t limit_;
  std::map<std::pair<int, std::vector<int>>, std::vector<Members>> cache_;
};

inline Members padded(Members m, int k) {
  m.insert(m.end(), static_cast<std::size_t>(k), std::uint16_t{0});  // flow 0 is the zero flow
  std::sort(m.begin(), m.end());
  return m;
}

/// Multisets of `degree` flows grouped by their counts.
inline std::map<std::vector<int>, std::vector<Members>> group_by_tally(const Universe& u, int degree,
                                                                       const OracleBudget& budget) {
  std::map<std::vector<int>, std::vector<Members>> groups;
  std::size_t produced = 0;
  Members current;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(current.size()) == degree) {
      if (++produced > budget.max_multisets) {
        throw Error(ErrorKind::BudgetExceeded, "too many multisets to enumerate");
      }
      groups[u.counts(current)].push_back(current);
      return;
    }
    for (std::size_t i = start; i < u.flows.size(); ++i) {
      current.push_back(static_cast<std::uint16_t>(i));
      self(self, i);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return groups;
}

}  // namespace oracle_detail

/// Canceled relations of degree 2..max_degree, one per unordered pair of sides.
inline std::vector<Relation> enumerate_relations(int leaves, int max_degree, int modulus = 3,
                                                 const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  const Universe u(leaves, modulus, budget);
  std::vector<Relation> out;
  for (int d = 2; d <= max_degree; ++d) {
    for (const auto& [key, members] : group_by_tally(u, d, budget)) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          Members shared;
          std::set_intersection(members[i].begin(), members[i].end(), members[j].begin(),
                                members[j].end(), std::back_inserter(shared));
          if (!shared.empty()) continue;
          out.push_back(Relation::trusted(u.flows_of(members[i]), u.flows_of(members[j]), leaves,
                                          modulus));
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Every fiber of exactly `degree` flows with at least two members.
inline std::vector<Fiber> all_fibers(int leaves, int degree, int modulus = 3,
                                     const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  const Universe u(leaves, modulus, budget);
  std::vector<Fiber> out;
  for (const auto& [key, members] : group_by_tally(u, degree, budget)) {
    if (members.size() < 2) continue;
    Fiber f{tally(u.flows_of(members.front()), leaves, modulus), degree, {}};
    for (const auto& m : members) f.members.push_back(u.flows_of(m));
    out.push_back(std::move(f));
  }
  return out;
}

inline Fiber build_fiber(const Tally& t, int degree, const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  const Universe u(t.leaves(), t.modulus(), budget);
  Fiber fiber{t, degree, {}};
  for (const auto& m : u.fiber(t.raw(), degree, budget.max_members))
    fiber.members.push_back(u.flows_of(m));
  return fiber;
}

/// Connectivity of the fiber padded with `padding` trivial flows. `connected`
/// says whether all padded members of the original fiber share a component;
/// `components` counts components of the whole padded fiber.
inline Connectivity fiber_connected(const Fiber& fiber, int move_degree, int padding,
                                    const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  const Universe u(fiber.tally.leaves(), fiber.tally.modulus(), budget);
  const auto all = u.fiber(fiber.tally.raw(), fiber.degree + padding, budget.max_members);
  std::vector<int> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto position = [&](const Members& m) {
    return static_cast<int>(std::lower_bound(all.begin(), all.end(), m) - all.begin());
  };
  MoveGraph graph(u, move_degree, budget.max_members);
  int components = static_cast<int>(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    graph.neighbours(all[i], [&](const Members& next) {
      const int a = find(static_cast<int>(i)), b = find(position(next));
      if (a != b) {
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        --components;
      }
    });
  }
  std::set<int> roots;
  for (const auto& m : fiber.members) roots.insert(find(position(padded(u.indices(m), padding))));
  return {roots.size() <= 1, components};
}

/// Whether the two sides are joined by moves of degree <= move_degree after
/// padding both with k trivial flows. Breadth-first from the left side.
inline bool sides_connected(const Relation& rel, int move_degree, int k,
                            const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  const Universe u(rel.leaves(), rel.modulus(), budget);
  const Members start = padded(u.indices(rel.left()), k);
  const Members goal = padded(u.indices(rel.right()), k);
  if (start == goal) return true;
  MoveGraph graph(u, move_degree, budget.max_members);
  std::set<Members> seen{start};
  std::deque<Members> queue{start};
  bool found = false;
  while (!queue.empty() && !found) {
    const Members cur = std::move(queue.front());
    queue.pop_front();
    graph.neighbours(cur, [&](const Members& next) {
      if (found || !seen.insert(next).second) return;
      if (seen.size() > budget.max_members) throw Error(ErrorKind::BudgetExceeded, "search too large");
      if (next == goal) found = true;
      queue.push_back(next);
    });
  }
  return found;
}

/// Least padding k <= cap at which the sides of `rel` are connected.
inline std::optional<int> min_padding(const Relation& rel, int move_degree, int cap,
                                      const OracleBudget& budget = {}) {
  for (int k = 0; k <= cap; ++k)
    if (sides_connected(rel, move_degree, k, budget)) return k;
  return std::nullopt;
}

/// Random canceled relation of the given degree, deterministic in `seed`.
inline Relation random_relation(int leaves, int degree, std::uint64_t seed, int modulus = 3,
                                int max_retries = 256, std::size_t node_budget = 200'000) {
  using namespace oracle_detail;
  const Universe u(leaves, modulus, OracleBudget{});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, u.flows.size() - 1);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Members left;
    for (int i = 0; i < degree; ++i) left.push_back(static_cast<std::uint16_t>(pick(rng)));
    std::sort(left.begin(), left.end());

    std::vector<std::uint16_t> order;
    for (std::size_t i = 0; i < u.flows.size(); ++i)
      if (!std::binary_search(left.begin(), left.end(), static_cast<std::uint16_t>(i)))
        order.push_back(static_cast<std::uint16_t>(i));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> target = u.counts(left);
    Members right;
    std::size_t nodes = 0;
    auto rec = [&](auto&& self, std::size_t start, int remaining) -> bool {
      if (++nodes > node_budget) return false;
      if (remaining == 0) return std::all_of(target.begin(), target.end(), [](int c) { return c == 0; });
      for (std::size_t p = start; p < order.size(); ++p) {
        const auto& c = u.contribution[order[p]];
        bool fits = true;
        for (std::size_t k = 0; k < c.size(); ++k) fits = fits && c[k] <= target[k];
        if (!fits) continue;
        for (std::size_t k = 0; k < c.size(); ++k) target[k] -= c[k];
        right.push_back(order[p]);
        if (self(self, p, remaining - 1)) return true;
        right.pop_back();
        for (std::size_t k = 0; k < c.size(); ++k) target[k] += c[k];
      }
      return false;
    };
    if (rec(rec, 0, degree)) {
      return Relation::validated(u.flows_of(left), u.flows_of(right), leaves, modulus);
    }
  }
  throw Error(ErrorKind::Exhausted, "no random relation found within the retry bound");
}

}  // namespace phylosat
