#include <gtest/gtest.h>

#include "phylosat/phylosat.hpp"
#include "support.hpp"

using namespace phylosat;
using namespace testsupport;

namespace {

Tree claw(int r) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= r; ++i) edges.emplace_back(0, i);
  return Tree(r + 1, edges, 0);
}

// K_{1,5} with leaf 5 replaced by an edge to an inner vertex carrying leaves 6 and 7.
Tree split_fifth_leaf() {
  return Tree(8, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {5, 6}, {5, 7}}, 0);
}

// Inner path u - v - w; v has three leaves, u and w two each. Rooted at u.
Tree caterpillar() {
  return Tree(10, {{0, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {0, 6}, {0, 7}, {2, 8}, {2, 9}}, 0);
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Malformed;
}

}  // namespace

TEST(Tree, Validation) {
  EXPECT_EQ(kind_of([] { (void)Tree(3, {{0, 1}}, 0); }), ErrorKind::InvalidTree);
  EXPECT_EQ(kind_of([] { (void)Tree(4, {{0, 1}, {1, 2}, {2, 0}}, 0); }), ErrorKind::InvalidTree);
  EXPECT_EQ(kind_of([] { (void)Tree(3, {{0, 1}, {1, 1}}, 0); }), ErrorKind::InvalidTree);
  EXPECT_EQ(kind_of([] { (void)Tree(3, {{0, 1}, {1, 2}}, 5); }), ErrorKind::InvalidTree);
  const Tree t = caterpillar();
  EXPECT_EQ(t.head(0), 1);
  EXPECT_EQ(t.tail(1), 1);
  EXPECT_EQ(kind_of([&] { (void)star(t, 8); }), ErrorKind::InvalidTree);
}

TEST(Star, Shapes) {
  EXPECT_EQ(star(claw(5), 0).leaves(), 5);
  const Tree two_inner(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}}, 0);
  EXPECT_EQ(star(two_inner, 0).leaves(), 3);
  EXPECT_EQ(star(two_inner, 1).leaves(), 3);
  const Tree path(3, {{0, 1}, {1, 2}}, 0);
  EXPECT_EQ(star(path, 1).leaves(), 2);
  EXPECT_EQ(star(caterpillar(), 1).leaves(), 5);
}

TEST(Restrict, ClawIsIdentity) {
  const Tree t = claw(5);
  for (const auto& f : enumerate_flows(5)) {
    const TreeFlow tf = extend(f, t, 0);
    EXPECT_TRUE(is_valid(t, tf));
    for (int i = 0; i < 5; ++i) EXPECT_EQ(tf.labels[static_cast<std::size_t>(i)], f.residue(i));
    EXPECT_EQ(restrict(tf, t, 0), f);
  }
  EXPECT_TRUE(restrict(TreeFlow{std::vector<std::uint8_t>(5, 0), 3}, t, 0).is_zero());
}

TEST(Restrict, SharedEdgeIsNegatedAcrossInnerVertices) {
  const Tree t(6, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}}, 0);
  // g1 flows from leaf 2 through 0 -> 1 and out at leaf 4.
  TreeFlow f{{1, 2, 0, 1, 0}, 3};
  ASSERT_TRUE(is_valid(t, f));
  const Flow at0 = restrict(f, t, 0), at1 = restrict(f, t, 1);
  // Edge 0 is the first edge at both vertices.
  EXPECT_EQ(at0.residue(0), 1);
  EXPECT_EQ(at1.residue(0), 2);
  EXPECT_EQ((at0.residue(0) + at1.residue(0)) % 3, 0);
}

TEST(Extend, SplitLeafCarriesLabelToSmallestLeaf) {
  const Tree t = split_fifth_leaf();
  const Relation rel = golden::example_2_8();
  const TreeRelation ext = extend_relation(rel, t, 0);
  EXPECT_TRUE(check_tree_relation(t, ext));
  for (std::size_t k = 0; k < rel.left().size(); ++k) {
    const auto& tf = ext.left[k];
    EXPECT_EQ(tf.labels[4], rel.left()[k].residue(4));
    EXPECT_EQ(tf.labels[5], tf.labels[4]);
    EXPECT_EQ(tf.labels[6], 0);
    EXPECT_EQ(restrict(tf, t, 0), rel.left()[k]);
  }
}

TEST(Extend, ZeroAndEmpty) {
  const Tree t = caterpillar();
  const TreeFlow z = extend(Flow::zero(5), t, 1);
  EXPECT_TRUE(std::all_of(z.labels.begin(), z.labels.end(), [](auto l) { return l == 0; }));
  EXPECT_TRUE(check_tree_relation(t, extend_relation(Relation::empty(5), t, 1)));
  EXPECT_EQ(kind_of([&] { (void)extend(Flow::zero(4), t, 1); }), ErrorKind::LeafCountMismatch);
}

TEST(Extend, RestrictAfterExtendIsIdentityOnCaterpillar) {
  const Tree t = caterpillar();
  for (const auto& f : enumerate_flows(5)) {
    const TreeFlow tf = extend(f, t, 1);
    EXPECT_TRUE(is_valid(t, tf));
    EXPECT_EQ(restrict(tf, t, 1), f);
  }
}

TEST(CheckTreeRelation, PerturbedPathRejected) {
  const Tree t = split_fifth_leaf();
  TreeRelation ext = extend_relation(golden::example_2_8(), t, 0);
  // Reroute one left flow's leaf-5 label through leaf 7 instead of leaf 6.
  auto it = std::find_if(ext.left.begin(), ext.left.end(), [](const TreeFlow& f) { return f.labels[4] != 0; });
  ASSERT_NE(it, ext.left.end());
  std::swap(it->labels[5], it->labels[6]);
  EXPECT_TRUE(is_valid(t, *it));
  EXPECT_FALSE(check_tree_relation(t, ext));
}

TEST(CheckTreeRelation, RejectsInvalidFlowsAndSizes) {
  const Tree t = claw(3);
  const TreeFlow good{{1, 2, 0}, 3}, bad{{1, 1, 0}, 3};
  EXPECT_TRUE(check_tree_relation(t, {good}, {good}));
  EXPECT_FALSE(check_tree_relation(t, {bad}, {bad}));
  EXPECT_FALSE(check_tree_relation(t, {good}, {}));
  EXPECT_TRUE(check_tree_relation(t, {}, {}));
}
