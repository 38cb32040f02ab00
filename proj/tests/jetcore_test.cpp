#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include <jets/jetcore.hpp>

#include "support.hpp"

using namespace jets;
using jets::testing::xyz;

namespace {

MultiIndex idx(const char* letters) { return parse_repeated_index(letters, xyz()); }

TEST(BundleSignature, RejectsEmptyAndDuplicateNames) {
  EXPECT_THROW(BundleSignature({}, {"u"}), Error);
  EXPECT_THROW(BundleSignature({"x"}, {}), Error);
  EXPECT_THROW(BundleSignature({"x", "x"}, {"u"}), Error);
  EXPECT_THROW(BundleSignature({"x"}, {"x"}), Error);
  BundleSignature s({"x", "y"}, {"u", "v"});
  EXPECT_EQ(s.p(), 2u);
  EXPECT_EQ(s.q(), 2u);
  EXPECT_EQ(s.independent_position("y"), 1);
  EXPECT_EQ(s.independent_position("u"), -1);
  EXPECT_EQ(s.dependent_position("v"), 1);
  EXPECT_TRUE(s.single_letter_coordinates());
  EXPECT_FALSE(BundleSignature({"time"}, {"u"}).single_letter_coordinates());
}

TEST(MultiIndex, Order) {
  EXPECT_EQ(MultiIndex({0, 0, 0}).order(), 0u);
  EXPECT_EQ(MultiIndex({1, 2, 0}).order(), 3u);
  EXPECT_EQ(idx("xxyy").order(), 4u);
}

TEST(MultiIndex, Increment) {
  EXPECT_EQ(idx("xyy").increment(0), idx("xxyy"));
  EXPECT_EQ(MultiIndex({0, 0, 0}).increment(1), MultiIndex({0, 1, 0}));
  EXPECT_EQ(MultiIndex({2, 0, 1}).increment(2), MultiIndex({2, 0, 2}));
  EXPECT_THROW(MultiIndex({0, 0}).increment(2), Error);
  EXPECT_THROW(MultiIndex({0, 0}).decrement(0), Error);
}

TEST(MultiIndex, ClassIsFirstNonzeroPosition) {
  EXPECT_EQ(MultiIndex({0, 0, 2}).cls(), 3u);
  EXPECT_EQ(MultiIndex({1, 1, 0}).cls(), 1u);
  EXPECT_EQ(MultiIndex({0, 1, 1}).cls(), 2u);
  EXPECT_THROW(MultiIndex({0, 0, 0}).cls(), Error);
}

TEST(MultiIndex, SecondOrderRankingForThreeCoordinates) {
  std::vector<MultiIndex> got = enumerate_multi_indices(3, 2);
  std::vector<MultiIndex> want{idx("zz"), idx("yz"), idx("yy"), idx("xz"), idx("xy"), idx("xx")};
  EXPECT_EQ(got, want);
}

TEST(MultiIndex, CompareRules) {
  EXPECT_EQ(compare(MultiIndex({0, 1}), MultiIndex({1, 0})), Ordering::greater);
  EXPECT_EQ(compare(MultiIndex({1, 1, 0}), MultiIndex({1, 1, 0})), Ordering::equal);
  EXPECT_EQ(compare(MultiIndex({1, 0}), MultiIndex({0, 2})), Ordering::less);
  // Higher order wins regardless of class.
  EXPECT_EQ(compare(MultiIndex({2, 0}), MultiIndex({0, 1})), Ordering::greater);
  EXPECT_THROW((void)compare(MultiIndex({1}), MultiIndex({1, 0})), Error);
}

TEST(MultiIndex, CompareIsATotalOrder) {
  for (unsigned n = 0; n <= 3; ++n) {
    auto all = enumerate_multi_indices(3, n);
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = 0; b < all.size(); ++b) {
        const Ordering ab = compare(all[a], all[b]);
        const Ordering ba = compare(all[b], all[a]);
        EXPECT_EQ(ab == Ordering::equal, a == b);
        if (ab == Ordering::greater) EXPECT_EQ(ba, Ordering::less);
        EXPECT_EQ(ab == Ordering::greater, a < b);
      }
    }
  }
}

TEST(MultiIndex, Enumerate) {
  EXPECT_EQ(enumerate_multi_indices(2, 0), std::vector<MultiIndex>{MultiIndex({0, 0})});
  EXPECT_EQ(enumerate_multi_indices(2, 3).size(), 4u);
  for (std::size_t p = 1; p <= 4; ++p) {
    for (unsigned n = 0; n <= 4; ++n) {
      auto all = enumerate_multi_indices(p, n);
      EXPECT_EQ(all.size(), binomial(n + p - 1, p - 1));
      std::set<std::vector<unsigned>> distinct;
      for (const auto& J : all) {
        EXPECT_EQ(J.order(), n);
        distinct.insert(J.exponents());
      }
      EXPECT_EQ(distinct.size(), all.size());
    }
  }
}

TEST(MultiIndex, Factorial) {
  EXPECT_EQ(MultiIndex({0, 0, 0}).factorial(), 1u);
  EXPECT_EQ(MultiIndex({2, 1, 0}).factorial(), 2u);
  EXPECT_EQ(MultiIndex({3, 2, 0}).factorial(), 12u);
}

TEST(MultiIndex, Arithmetic) {
  EXPECT_EQ(idx("xy") + idx("yz"), idx("xyyz"));
  EXPECT_TRUE(idx("xyyz").contains(idx("yy")));
  EXPECT_FALSE(idx("xy").contains(idx("yy")));
  EXPECT_EQ(idx("xyyz") - idx("yz"), idx("xy"));
  EXPECT_THROW(idx("xy") - idx("yy"), Error);
}

TEST(JetDim, MatchesEnumeration) {
  EXPECT_EQ(jet_dim(2, 1, 1), 5u);
  EXPECT_EQ(jet_dim(2, 1, 2), 8u);
  EXPECT_EQ(jet_dim(3, 1, 2), 13u);
  for (std::size_t p = 1; p <= 3; ++p) {
    for (std::size_t q = 1; q <= 2; ++q) {
      std::vector<std::string> ind{"x", "y", "z"};
      std::vector<std::string> dep{"u", "v"};
      BundleSignature sig({ind.begin(), ind.begin() + p}, {dep.begin(), dep.begin() + q});
      for (unsigned n = 0; n <= 3; ++n) {
        EXPECT_EQ(jet_dim(p, q, n), p + jet_variables_up_to(sig, n).size());
      }
    }
  }
}

TEST(JetVariable, OrderingAndNames) {
  BundleSignature sig({"x", "y"}, {"u", "v"});
  auto vars = jet_variables_up_to(sig, 1);
  ASSERT_EQ(vars.size(), 6u);
  EXPECT_TRUE(std::is_sorted(vars.begin(), vars.end(), std::greater<>()));
  // Lower dependent index ranks higher among equal multi-indices.
  EXPECT_GT((JetVariable{0, MultiIndex({1, 0})}), (JetVariable{1, MultiIndex({1, 0})}));
  EXPECT_EQ(jet_name(JetVariable{1, MultiIndex({2, 1})}, sig), "v_xxy");
  EXPECT_EQ(jet_name(JetVariable{0, MultiIndex({0, 0})}, sig), "u");
  BundleSignature longer({"time", "space"}, {"rho"});
  EXPECT_EQ(jet_name(JetVariable{0, MultiIndex({1, 2})}, longer), "d(rho,time,space,space)");
}

TEST(RepeatedIndex, RoundTrip) {
  for (const auto& J : enumerate_multi_indices(3, 3)) {
    EXPECT_EQ(parse_repeated_index(repeated_index(J, xyz().independent()), xyz()), J);
  }
  EXPECT_EQ(parse_repeated_index("yx", xyz()), idx("xy"));
  EXPECT_THROW(parse_repeated_index("q", xyz()), Error);
}

}  // namespace
