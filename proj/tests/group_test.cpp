#include <gtest/gtest.h>

#include "phylosat/group.hpp"

using namespace phylosat;

TEST(Group, Addition) {
  EXPECT_EQ(z3::g1() + z3::g2(), z3::zero());
  EXPECT_EQ(z3::g1() + z3::g1(), z3::g2());
  EXPECT_EQ(z3::zero() + z3::g2(), z3::g2());
}

TEST(Group, Negation) {
  EXPECT_EQ(-z3::g1(), z3::g2());
  EXPECT_EQ(-z3::zero(), z3::zero());
  EXPECT_EQ(-z3::g2(), z3::g1());
}

TEST(Group, AxiomsExhaustiveSmallModuli) {
  for (int n = 1; n <= 7; ++n) {
    for (int a = 0; a < n; ++a) {
      const GroupElement x{a, n};
      EXPECT_EQ(x + (-x), GroupElement(0, n));
      EXPECT_EQ(-(-x), x);
      for (int b = 0; b < n; ++b) {
        const GroupElement y{b, n};
        EXPECT_EQ(x + y, y + x);
        for (int c = 0; c < n; ++c) {
          const GroupElement z{c, n};
          EXPECT_EQ((x + y) + z, x + (y + z));
        }
      }
    }
  }
}

TEST(Group, ModulusMismatchRejected) {
  try {
    (void)(GroupElement(1, 3) + GroupElement(1, 2));
    FAIL() << "mixed moduli accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ModulusMismatch);
  }
}

TEST(Group, OutOfRangeResidueRejected) {
  EXPECT_THROW(GroupElement(3, 3), Error);
  EXPECT_THROW(GroupElement(-1, 3), Error);
}
