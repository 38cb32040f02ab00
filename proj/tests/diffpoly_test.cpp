#include <gtest/gtest.h>

#include <jets/diffpoly.hpp>

#include "support.hpp"

using namespace jets;
using namespace jets::testing;

namespace {

/// Total derivative by the product rule over factors, with
/// D_i x_j = delta_ij and D_i u_J = u_{J+e_i}.
DiffPolynomial product_rule_derivative(const DiffPolynomial& f, std::size_t i) {
  DiffPolynomial out;
  for (const auto& [m, c] : f.terms()) {
    const auto& fs = m.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto& [g, e] = fs[k];
      DiffPolynomial dg;
      if (g.is_coordinate()) {
        if (g.position() != i) continue;
        dg = DiffPolynomial(1);
      } else {
        const auto& v = g.jet_variable();
        dg = DiffPolynomial::jet(v.dependent, v.index.increment(i));
      }
      DiffPolynomial rest(Rational(c) * Rational(e));
      for (std::size_t t = 0; t < fs.size(); ++t) {
        const unsigned pw = t == k ? fs[t].second - 1 : fs[t].second;
        if (pw) rest *= DiffPolynomial::generator(fs[t].first).pow(pw);
      }
      out += rest * dg;
    }
  }
  return out;
}

TEST(DiffPolynomial, Arithmetic) {
  auto s = xyz();
  EXPECT_EQ(P(s, "u_x - u") + P(s, "u"), P(s, "u_x"));
  EXPECT_EQ(P(s, "u_y - u^2") * DiffPolynomial(1), P(s, "u_y - u^2"));
  EXPECT_EQ(P(s, "y*u_x") * P(s, "y"), P(s, "y^2*u_x"));
  EXPECT_TRUE((P(s, "u_x") - P(s, "u_x")).is_zero());
  EXPECT_EQ(P(s, "(x + u)^2"), P(s, "x^2 + 2*x*u + u^2"));
  EXPECT_EQ(P(s, "x*u - u*x"), DiffPolynomial());
}

TEST(DiffPolynomial, PartialInCoordinates) {
  auto s = xyz();
  EXPECT_EQ(P(s, "y*u_x").partial_x(1), P(s, "u_x"));
  EXPECT_TRUE(P(s, "u_z + y*u_x").partial_x(0).is_zero());
  EXPECT_EQ(P(s, "x^2*u").partial_x(0), P(s, "2*x*u"));
}

TEST(DiffPolynomial, PartialInJets) {
  auto s = xyz();
  auto jet = [&](const char* letters) { return JetVariable{0, parse_repeated_index(letters, s)}; };
  EXPECT_EQ(P(s, "u_y - u^2").partial_jet(jet("")), P(s, "-2*u"));
  EXPECT_EQ(P(s, "u_z + y*u_x").partial_jet(jet("x")), P(s, "y"));
  EXPECT_TRUE(P(s, "u_x").partial_jet(jet("y")).is_zero());
}

TEST(DiffPolynomial, FormalDerivative) {
  auto s = xyz();
  EXPECT_EQ(P(s, "u_z + y*u_x").formal_derivative(1), P(s, "u_yz + u_x + y*u_xy"));
  EXPECT_EQ(P(s, "u").formal_derivative(0), P(s, "u_x"));
  EXPECT_EQ(P(s, "u_y - u^2").formal_derivative(0), P(s, "u_xy - 2*u*u_x"));
  EXPECT_EQ(P(s, "x").formal_derivative(0), DiffPolynomial(1));
  EXPECT_TRUE(DiffPolynomial(7).formal_derivative(2).is_zero());
}

TEST(DiffPolynomial, FormalDerivativeByIndex) {
  auto s = xyz();
  const auto F = P(s, "u_z + y*u_x");
  EXPECT_EQ(F.formal_derivative(MultiIndex(3)), F);
  EXPECT_EQ(P(s, "u").formal_derivative(parse_repeated_index("xx", s)), P(s, "u_xx"));
  EXPECT_EQ(F.formal_derivative(parse_repeated_index("xy", s)), P(s, "u_xyz + u_xx + y*u_xxy"));
  EXPECT_EQ(F.formal_derivative(parse_repeated_index("xy", s)), F.formal_derivative(1).formal_derivative(0));
}

TEST(DiffPolynomial, OrderAndLinearity) {
  auto s = xyz();
  EXPECT_EQ(P(BundleSignature({"x", "y", "t"}, {"u"}), "u_tt - u_xx - u_yy").order(), 2u);
  EXPECT_EQ(P(s, "u_y - u^2").order(), 1u);
  EXPECT_FALSE(P(s, "3*x + 1").order().has_value());
  EXPECT_EQ(P(s, "u").order(), 0u);
  EXPECT_TRUE(P(s, "u_z + y*u_x").is_linear());
  EXPECT_FALSE(P(s, "u_y - u^2").is_linear());
  EXPECT_TRUE(P(s, "x^3").is_linear());
  EXPECT_FALSE(P(s, "u*u_x").is_linear());
}

TEST(DiffPolynomial, Eval) {
  auto s = xyz();
  auto J = [&](const char* l) { return Generator::jet({0, parse_repeated_index(l, s)}); };
  EXPECT_EQ(P(s, "u_x - u").eval({{J("x"), 2}, {J(""), 2}}), 0);
  EXPECT_EQ(P(s, "u_y - u^2").eval({{J("y"), 4}, {J(""), 2}}), 0);
  EXPECT_EQ(P(s, "y*u_x").eval({{Generator::coordinate(1), 3}, {J("x"), 5}}), 15);
  EXPECT_EQ(P(s, "1/2*x").eval({{Generator::coordinate(0), Rational(1, 3)}}), Rational(1, 6));
  try {
    (void)P(s, "y*u_x").eval({{J("x"), 5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingAssignment);
  }
}

TEST(DiffPolynomial, Substitute) {
  auto s = xyz();
  std::map<Generator, DiffPolynomial> r{{Generator::coordinate(1), P(s, "x + 1")}};
  EXPECT_EQ(P(s, "y*u_x").substitute(r), P(s, "x*u_x + u_x"));
}

TEST(DiffPolynomial, ExactDivision) {
  auto s = xyz();
  EXPECT_EQ(P(s, "x^2*u - y*x*u").divide_exact(P(s, "x")), P(s, "x*u - y*u"));
  EXPECT_EQ(P(s, "x^2 - y^2").divide_exact(P(s, "x - y")), P(s, "x + y"));
  EXPECT_FALSE(P(s, "x^2 + 1").divide_exact(P(s, "x")).has_value());
}

TEST(DiffPolynomial, ProductRuleOracleAgrees) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto sig = random_signature(rng);
    auto f = random_polynomial(rng, sig);
    for (std::size_t i = 0; i < sig.p(); ++i) {
      ASSERT_EQ(f.formal_derivative(i), product_rule_derivative(f, i)) << "trial " << trial;
    }
  }
}

TEST(DiffPolynomial, RingAxioms) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto sig = random_signature(rng);
    auto a = random_polynomial(rng, sig);
    auto b = random_polynomial(rng, sig);
    auto c = random_polynomial(rng, sig);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_TRUE((a - a).is_zero());
    if (!b.is_zero()) ASSERT_EQ((a * b).divide_exact(b), a);
  }
}

TEST(DiffPolynomial, LeibnizAndCommutingDerivatives) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto sig = random_signature(rng);
    auto f = random_polynomial(rng, sig);
    auto g = random_polynomial(rng, sig);
    const auto i = static_cast<std::size_t>(uniform(rng, 0, sig.p() - 1));
    const auto j = static_cast<std::size_t>(uniform(rng, 0, sig.p() - 1));
    ASSERT_EQ((f * g).formal_derivative(i), f.formal_derivative(i) * g + f * g.formal_derivative(i));
    ASSERT_EQ(f.formal_derivative(i).formal_derivative(j), f.formal_derivative(j).formal_derivative(i));
  }
}

TEST(Monomial, OrderIsLexOverGenerators) {
  auto s = xyz();
  // Jets dominate coordinates; higher jets dominate lower ones.
  const auto f = P(s, "x^5 + u + u_x + u_z + x*u_z");
  std::vector<std::string> order;
  for (const auto& [m, c] : f.terms()) order.push_back(format_monomial(m, s));
  EXPECT_EQ(order, (std::vector<std::string>{"x*u_z", "u_z", "u_x", "u", "x^5"}));
}

}  // namespace
