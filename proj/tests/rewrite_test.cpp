#include <gtest/gtest.h>

#include <set>

#include "phylosat/phylosat.hpp"
#include "support.hpp"

using namespace phylosat;
using namespace testsupport;

namespace {

std::vector<const ApplyGenerator*> applications(const std::vector<Step>& steps) {
  std::vector<const ApplyGenerator*> out;
  for (const auto& s : steps)
    if (const auto* g = std::get_if<ApplyGenerator>(&s)) out.push_back(g);
  return out;
}

int count_zero_steps(const std::vector<Step>& steps) {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(),
                                        [](const Step& s) { return std::holds_alternative<AddZeroFlow>(s); }));
}

bool same(FlowMultiset a, FlowMultiset b) { return sorted(std::move(a)) == sorted(std::move(b)); }

// Normalized, canceled form used as find_case input.
Relation normalized(const Relation& rel) {
  return cancel_common(normalize_triples(cancel_common(split_to_pairs_triples(rel).first).first).first).first;
}

// Family predicted from the pair layout alone.
CaseFamily expected_family(const Relation& rel) {
  bool any = false, four = false, same_pos = false, three = false;
  for (const auto* side : {&rel.left(), &rel.right()}) {
    std::vector<FlowClass> pairs;
    for (const auto& f : *side)
      if (classify(f).kind == FlowClass::Kind::Pair) pairs.push_back(classify(f));
    any = any || !pairs.empty();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        const auto a = pairs[i].leaves, b = pairs[j].leaves;
        std::set<Leaf> s{a[0], a[1], b[0], b[1]};
        if (s.size() == 4) four = true;
        if (s.size() == 3 && (a[0] == b[0] || a[1] == b[1])) same_pos = true;
        if (s.size() == 3) three = true;
      }
    }
  }
  if (!any) return CaseFamily::NoPairs;
  if (four) return CaseFamily::FourIndexPairs;
  if (same_pos) return CaseFamily::ThreeIndexPairsA;
  if (three) return CaseFamily::ThreeIndexPairsB;
  return CaseFamily::TwoIndexPairs;
}

}  // namespace

TEST(Split, ExampleSplitsAndPadding) {
  const auto [rel, steps] = split_to_pairs_triples(golden::example_2_6());
  const Flow L1 = Flow::from_residues({1, 2, 2, 1, 0});
  const Flow L2 = Flow::from_residues({0, 1, 2, 1, 2});
  const Flow zero = Flow::zero(5);
  bool saw1 = false, saw2 = false;
  for (const auto* g : applications(steps)) {
    EXPECT_EQ(g->case_tag, "2.3");
    EXPECT_TRUE(is_generator(g->generator));
    EXPECT_EQ(g->generator.degree(), 2);
    saw1 = saw1 || (same(g->removed, {L1, zero}) && same(g->added, {P(1, 2), P(4, 3)}));
    saw2 = saw2 || (same(g->removed, {L2, zero}) && same(g->added, {P(2, 3), P(4, 5)}));
  }
  EXPECT_TRUE(saw1);
  EXPECT_TRUE(saw2);
  // One trivial flow is present on the left; the second split needs another.
  EXPECT_EQ(count_zero_steps(steps), 1);
  for (const auto* side : {&rel.left(), &rel.right()})
    for (const auto& f : *side) EXPECT_LE(f.size(), 3);
  EXPECT_EQ(tally(rel.left(), 5), tally(rel.right(), 5));
}

TEST(Split, AllG1SizeSix) {
  const Flow big = Flow::from_residues({1, 1, 1, 1, 1, 1});
  const Relation rel =
      Relation::validated({big, Flow::zero(6)}, {T1(1, 2, 3, 6), T1(4, 5, 6, 6)}, 6);
  const auto [out, steps] = split_to_pairs_triples(rel);
  EXPECT_TRUE(same(out.left(), {T1(1, 2, 3, 6), T1(4, 5, 6, 6)}));
  EXPECT_EQ(count_zero_steps(steps), 0);
  EXPECT_EQ(tally(out.left(), 6), tally(rel.left(), 6));
}

TEST(Normalize, MatchingRule) {
  struct Case {
    Flow a, x;
    FlowMultiset expected;
    int r;
  };
  const std::vector<Case> cases{
      {T1(1, 4, 5), T2(1, 3, 5), {P(1, 3), P(4, 5), P(5, 1)}, 5},
      {T1(1, 2, 3, 6), T2(4, 5, 6, 6), {P(1, 4, 6), P(2, 5, 6), P(3, 6, 6)}, 6},
      {T1(1, 2, 3, 6), T2(1, 2, 3, 6), {P(1, 2, 6), P(2, 3, 6), P(3, 1, 6)}, 6},
  };
  for (const auto& c : cases) {
    const Relation rel = Relation::validated({c.a, c.x, Flow::zero(c.r)}, c.expected, c.r);
    const auto [out, steps] = normalize_triples(rel);
    ASSERT_EQ(applications(steps).size(), 1u);
    const auto* g = applications(steps).front();
    EXPECT_EQ(g->case_tag, "2.4");
    EXPECT_TRUE(same(g->added, c.expected));
    EXPECT_EQ(count_zero_steps(steps), 0);
    EXPECT_TRUE(same(out.left(), c.expected));
  }
}

TEST(Normalize, AddsTrivialFlowWhenMissing) {
  const Relation rel =
      Relation::validated({T1(1, 4, 5), T2(1, 3, 5)}, {P(1, 5), Flow::from_residues({2, 0, 2, 1, 1})}, 5);
  const auto [out, steps] = normalize_triples(rel);
  EXPECT_EQ(count_zero_steps(steps), 1);
  EXPECT_TRUE(same(out.left(), {P(1, 3), P(4, 5), P(5, 1)}));
  EXPECT_EQ(out.degree(), 3);
}

TEST(FindCase, ExampleFourIndexWithSideSwap) {
  const Relation rel = golden::example_2_8();
  const CaseSelection sel = find_case(rel);
  EXPECT_EQ(family(sel.tag), CaseFamily::FourIndexPairs);
  EXPECT_TRUE(sel.frame.side_swapped);
  // The named pairs are (1,2) and (4,5) of the right side.
  const Relation framed = apply_frame(rel, sel.frame);
  EXPECT_TRUE(contains(framed.left(), pair_flow(5, 0, 1)));
  EXPECT_TRUE(contains(framed.left(), pair_flow(5, 2, 3)));
}

TEST(FindCase, TriplesOnlyIsNoPairs) {
  const Relation rel = Relation::validated({T1(1, 2, 3, 6), T1(4, 5, 6, 6)}, {T1(1, 2, 4, 6), T1(3, 5, 6, 6)}, 6);
  EXPECT_EQ(family(find_case(rel).tag), CaseFamily::NoPairs);
  EXPECT_EQ(find_case(rel).tag, CaseTag::NoPairsSharedTwo);
}

TEST(FindCase, RejectsUnnormalizedInput) {
  try {
    (void)find_case(golden::example_2_6());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalized);
  }
}

TEST(FindCase, FamilyFollowsPairLayoutExhaustively) {
  std::map<CaseFamily, int> seen;
  for (const auto& rel : enumerate_relations(4, 4)) {
    const Relation n = normalized(rel);
    if (n.empty()) continue;
    const CaseSelection sel = find_case(n);
    EXPECT_EQ(family(sel.tag), expected_family(n)) << notation(n);
    ++seen[family(sel.tag)];
  }
  EXPECT_GT(seen[CaseFamily::FourIndexPairs], 0);
  EXPECT_GT(seen[CaseFamily::ThreeIndexPairsA], 0);
  EXPECT_GT(seen[CaseFamily::TwoIndexPairs], 0);
}

TEST(Round, CommonFlowIsJustDeleted) {
  const Relation rel = Relation::validated({P(1, 2), P(4, 2), P(1, 3)}, {P(1, 2), P(1, 2), P(4, 3)}, 5);
  const auto [out, steps] = reduce_round(rel);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(std::get<DeleteCommon>(steps[0]).flow, P(1, 2));
  EXPECT_EQ(out.degree(), 2);
}

TEST(Round, ExampleRoundDeletesOneFlow) {
  const Relation rel = golden::example_2_8();
  const auto [out, steps] = reduce_round(rel);
  EXPECT_EQ(out.degree(), rel.degree() - 1);
  EXPECT_LT(grading(out), grading(rel));
  ASSERT_FALSE(steps.empty());
  EXPECT_TRUE(std::holds_alternative<DeleteCommon>(steps.back()));
  for (const auto* g : applications(steps)) EXPECT_EQ(g->generator.degree(), 2);
}

TEST(Round, ResidualCubicOfFirstExample) {
  // After both splits and deleting (2,3): the cubic on the right yields two more deletions.
  const Flow zero = Flow::zero(5);
  const Relation rel = Relation::validated({P(4, 5), P(4, 3), P(1, 2), P(5, 1)},
                                           {T1(1, 4, 5), T2(1, 3, 5), zero, P(4, 2)}, 5);
  const auto [normal, steps] = normalize_triples(rel);
  const auto apps = applications(steps);
  ASSERT_EQ(apps.size(), 1u);
  EXPECT_EQ(apps[0]->side, Side::Right);
  EXPECT_TRUE(same(apps[0]->added, {P(1, 3), P(4, 5), P(5, 1)}));
  const auto [canceled, common] = cancel_common(normal);
  EXPECT_TRUE(same(common, {P(4, 5), P(5, 1)}));
  EXPECT_TRUE(same(canceled.left(), {P(4, 3), P(1, 2)}));
  EXPECT_TRUE(same(canceled.right(), {P(1, 3), P(4, 2)}));
}

TEST(Reduce, FirstExampleLandmarks) {
  const Certificate cert = reduce(golden::example_2_6());
  EXPECT_TRUE(golden::missing_2_6_landmarks(cert).empty());
  EXPECT_GE(cert.n, 1);
  EXPECT_LE(cert.n, 2);
  EXPECT_EQ(cert.n, count_zero_steps(cert.steps));
  EXPECT_TRUE(verify(cert).accepted);
  EXPECT_TRUE(telescopes(cert));
}

TEST(Reduce, SecondExampleFourQuadrics) {
  const Certificate cert = reduce(golden::example_2_8());
  EXPECT_EQ(cert.n, 0);
  int quadrics = 0, cubics = 0;
  for (const auto& s : cert.steps) {
    const Relation* g = nullptr;
    if (const auto* a = std::get_if<ApplyGenerator>(&s)) g = &a->generator;
    if (const auto* f = std::get_if<EmitFinal>(&s)) g = &f->generator;
    if (!g) continue;
    (g->degree() == 2 ? quadrics : cubics) += 1;
  }
  EXPECT_EQ(quadrics, 4);
  EXPECT_EQ(cubics, 0);
  EXPECT_TRUE(telescopes(cert));
}

TEST(Reduce, SingleQuadricIsOneFinalStep) {
  const Relation q = Relation::validated({P(4, 2), P(1, 3)}, {P(1, 2), P(4, 3)}, 5);
  const Certificate cert = reduce(q);
  ASSERT_EQ(cert.steps.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<EmitFinal>(cert.steps[0]));
  EXPECT_EQ(cert.n, 0);
}

TEST(Reduce, EmptyAndCommonOnly) {
  EXPECT_TRUE(reduce(Relation::empty(4)).steps.empty());
  const Relation same_sides = Relation::validated({P(1, 2, 4), P(3, 4, 4)}, {P(1, 2, 4), P(3, 4, 4)}, 4);
  const Certificate cert = reduce(same_sides);
  EXPECT_TRUE(verify(cert).accepted);
  for (const auto& s : cert.steps) EXPECT_TRUE(std::holds_alternative<DeleteCommon>(s));
}

TEST(Reduce, StepBudget) {
  ReduceOptions opt;
  opt.max_steps = 2;
  try {
    (void)reduce(golden::example_2_6(), opt);
    FAIL() << "budget not enforced";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IterationLimit);
  }
}

TEST(Reduce, Deterministic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Relation rel = random_relation(5, 5, seed);
    const Certificate a = reduce(rel), b = reduce(rel);
    EXPECT_EQ(a.steps, b.steps);
    EXPECT_EQ(a.n, b.n);
  }
}

TEST(Reduce, RoundsDescendAndCertificatesTelescope) {
  std::set<std::string> tags;
  for (std::uint64_t seed = 100; seed < 400; ++seed) {
    const Relation rel = random_relation(5, 2 + static_cast<int>(seed % 5), seed);
    // Round by round: grading must drop each time.
    Relation cur = normalized(rel);
    while (cur.degree() >= 4) {
      const auto [next, steps] = reduce_round(cur);
      ASSERT_LT(grading(next), grading(cur));
      cur = normalized(next);
    }
    const Certificate cert = reduce(rel);
    ASSERT_TRUE(verify(cert).accepted) << notation(rel);
    ASSERT_TRUE(telescopes(cert)) << notation(rel);
    for (const auto& s : cert.steps)
      if (const auto* g = std::get_if<ApplyGenerator>(&s)) tags.insert(g->case_tag);
  }
  EXPECT_TRUE(tags.count("2.3"));
  EXPECT_TRUE(tags.count("2.4"));
  EXPECT_TRUE(tags.count("4.3"));
}
