#include <gtest/gtest.h>

#include <random>

#include "phylosat/frame.hpp"
#include "phylosat/golden.hpp"
#include "phylosat/rewrite.hpp"

using namespace phylosat;

namespace {

Flow P(Leaf a, Leaf b, int r = 5) { return pair_flow(r, a - 1, b - 1); }
Flow T1(Leaf a, Leaf b, Leaf c, int r = 5) { return triple_flow(r, z3::kG1, a - 1, b - 1, c - 1); }
Flow T2(Leaf a, Leaf b, Leaf c, int r = 5) { return triple_flow(r, z3::kG2, a - 1, b - 1, c - 1); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Malformed;
}

// Per-(leaf, residue) counts, straight from the labels.
std::vector<int> counts(const FlowMultiset& side, int r) {
  std::vector<int> c(static_cast<std::size_t>(r * 3), 0);
  for (const auto& f : side)
    for (int i = 0; i < r; ++i) ++c[static_cast<std::size_t>(i * 3 + f.residue(i))];
  return c;
}

}  // namespace

TEST(Relation, ExampleIsValidDegreeFour) {
  const Relation rel = golden::example_2_6();
  EXPECT_EQ(rel.degree(), 4);
  EXPECT_EQ(counts(rel.left(), 5), counts(rel.right(), 5));
}

TEST(Relation, TrivialCases) {
  const Relation same = Relation::validated({P(1, 2, 3)}, {P(1, 2, 3)}, 3);
  EXPECT_TRUE(cancel_common(same).first.empty());
  EXPECT_EQ(kind_of([] { (void)Relation::validated({P(1, 2, 3)}, {P(2, 1, 3)}, 3); }), ErrorKind::TallyMismatch);
  EXPECT_EQ(kind_of([] { (void)Relation::validated({Flow::zero(3)}, {}, 3); }), ErrorKind::DegreeMismatch);
  EXPECT_EQ(kind_of([] { (void)Relation::validated({Flow::zero(4)}, {Flow::zero(4)}, 3); }),
            ErrorKind::LeafCountMismatch);
}

TEST(Relation, CheckMatchesRecountOnRandomPairs) {
  const auto flows = enumerate_flows(3);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, flows.size() - 1);
  int accepted = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    FlowMultiset l, r;
    for (int i = 0; i < 2; ++i) {
      l.push_back(flows[pick(rng)]);
      r.push_back(flows[pick(rng)]);
    }
    const bool expect = counts(l, 3) == counts(r, 3);
    bool got = true;
    try {
      (void)check_relation(l, r, 3);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::TallyMismatch);
      got = false;
    }
    EXPECT_EQ(got, expect);
    accepted += got;
  }
  EXPECT_GT(accepted, 0);
}

TEST(Relation, CancellationAfterSplits) {
  const Relation rel = golden::example_2_6();
  const auto [split, steps] = split_to_pairs_triples(rel);
  EXPECT_TRUE(contains(split.left(), P(2, 3)));
  EXPECT_TRUE(contains(split.right(), P(2, 3)));
  const auto [canceled, deleted] = cancel_common(split);
  EXPECT_EQ(deleted, (FlowMultiset{P(2, 3)}));
  EXPECT_EQ(canceled.degree(), split.degree() - 1);
  EXPECT_TRUE(canceled.disjoint());
}

TEST(Relation, CancelIdempotentAndDisjointUnchanged) {
  const Relation rel = golden::example_2_8();
  const auto [once, del] = cancel_common(rel);
  EXPECT_TRUE(del.empty());
  EXPECT_EQ(once, rel);
  const Relation padded = Relation::validated({P(1, 2), P(3, 4), Flow::zero(5)}, {P(3, 2), P(1, 4), Flow::zero(5)}, 5);
  const auto a = cancel_common(padded).first;
  EXPECT_EQ(cancel_common(a).first, a);
  EXPECT_EQ(a.degree(), 2);
}

TEST(Relation, Grading) {
  // Printed sizes: 4+4+2+0 on the left, 3+3+2+2 on the right.
  const Relation ex = golden::example_2_6();
  int recount = 0;
  for (const auto* side : {&ex.left(), &ex.right()})
    for (const auto& f : *side)
      for (int i = 0; i < 5; ++i) recount += f.residue(i) != 0;
  EXPECT_EQ(recount, 20);
  EXPECT_EQ(grading(ex), 20);
  EXPECT_EQ(grading(Relation::empty(5)), 0);
  EXPECT_EQ(grading(Relation::validated({P(4, 2), P(1, 3)}, {P(1, 2), P(4, 3)}, 5)), 8);
}

TEST(Relation, GradingInvariantUnderSymmetry) {
  const Relation rel = golden::example_2_6();
  std::vector<Leaf> perm{0, 1, 2, 3, 4};
  do {
    for (bool conj : {false, true}) {
      SymmetryFrame f;
      f.leaf_map = perm;
      f.group_conjugated = conj;
      f.side_swapped = perm[0] % 2 == 0;
      EXPECT_EQ(grading(apply_frame(rel, f)), 20);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Relation, Generators) {
  EXPECT_TRUE(is_generator(Relation::validated({P(4, 2), P(1, 3)}, {P(1, 2), P(4, 3)}, 5)));
  const auto cubic = is_generator(
      Relation::validated({T1(1, 2, 3, 6), T2(4, 5, 6, 6), Flow::zero(6)}, {P(1, 4, 6), P(2, 5, 6), P(3, 6, 6)}, 6));
  ASSERT_TRUE(cubic);
  EXPECT_TRUE(cubic->is_cubic());
  EXPECT_FALSE(is_generator(golden::example_2_6()));
  EXPECT_FALSE(is_generator(Relation::validated({P(1, 2)}, {P(1, 2)}, 5)));
}

TEST(Relation, CanonicalPutsSmallerSideLeft) {
  const Relation rel = golden::example_2_8();
  const Relation c = rel.canonical();
  EXPECT_LE(c.left(), c.right());
  EXPECT_EQ(rel.swapped().canonical(), c);
}

TEST(Frame, ConjugationAndInverse) {
  const auto conj = [] {
    SymmetryFrame f = SymmetryFrame::identity(5);
    f.group_conjugated = true;
    return f;
  }();
  EXPECT_EQ(apply_frame(P(1, 2), conj), P(2, 1));
  EXPECT_EQ(apply_frame(T1(1, 4, 5), conj), T2(1, 4, 5));

  const Relation rel = golden::example_2_6();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Leaf> named{0, 1, 2, 3, 4};
    std::shuffle(named.begin(), named.end(), rng);
    named.resize(static_cast<std::size_t>(trial % 6));
    const auto f = SymmetryFrame::naming(5, named, trial % 2 == 0, trial % 3 == 0);
    EXPECT_EQ(apply_frame(apply_frame(rel, f), f.inverse()), rel);
    EXPECT_EQ(apply_frame(apply_frame(rel, f.inverse()), f), rel);
  }
}
