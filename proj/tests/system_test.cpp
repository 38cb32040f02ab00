#include <gtest/gtest.h>

#include <functional>

#include <jets/system.hpp>

#include "support.hpp"

using namespace jets;
using namespace jets::testing;

namespace {

const BundleSignature kWaveSig({"x", "y", "t"}, {"u"});

DiffSystem ex8() { return of(xyz(), {"u_z + y*u_x", "u_y"}, 1); }
DiffSystem wave() { return of(kWaveSig, {"u_tt - u_xx - u_yy"}, 2); }
DiffSystem gradient() { return of(xyz(), {"u_x", "u_y", "u_z"}, 1); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

TEST(MakeSystem, ValidatesOrder) {
  EXPECT_EQ(wave().order(), 2u);
  EXPECT_EQ(ex8().size(), 2u);
  EXPECT_EQ(kind_of([] { (void)of(xy(), {"u_xx"}, 1); }), ErrorKind::OrderViolation);
  EXPECT_EQ(kind_of([] { (void)make_system(xy(), {DiffPolynomial()}, 1); }), ErrorKind::EmptySystem);
  auto foreign = DiffPolynomial::jet(1, MultiIndex({1, 0}));
  EXPECT_EQ(kind_of([&] { (void)make_system(xy(), {foreign}, 1); }), ErrorKind::SignatureMismatch);
}

TEST(MakeSystem, NormalizesAndDeduplicates) {
  auto s = of(xy(), {"2*u_x - 2*u", "u_x - u", "-u_y"}, 1);
  EXPECT_EQ(lines(s), (std::vector<std::string>{"u_x - u = 0", "u_y = 0"}));
  // Rows with a polynomial leading coefficient are divided through when exact.
  auto t = of(xy(), {"x*u_y + x^2*u_x"}, 1);
  EXPECT_EQ(lines(t), (std::vector<std::string>{"u_y + x*u_x = 0"}));
}

TEST(Prolong, ReproducesTheEightEquations) {
  auto got = prolong(ex8(), 1);
  auto want = of(xyz(),
                 {"u_xz + y*u_xx", "u_yz + u_x + y*u_xy", "u_zz + y*u_xz", "u_xy", "u_yy", "u_yz", "u_z + y*u_x", "u_y"},
                 2);
  EXPECT_EQ(got.order(), 2u);
  EXPECT_EQ(lines(got), lines(want));
}

TEST(Prolong, ZeroIsIdentityAndWaveGivesFour) {
  EXPECT_EQ(prolong(ex8(), 0), ex8());
  auto w = prolong(wave(), 1);
  EXPECT_EQ(w.size(), 4u);
  EXPECT_EQ(w.order(), 3u);
  ASSERT_TRUE(w.provenance().has_value());
  EXPECT_EQ(w.provenance()->prolonged_by, 1u);
  EXPECT_EQ(prolong(w, 1).provenance()->prolonged_by, 2u);
}

TEST(Prolong, SizeIsEquationsTimesIndexCount) {
  auto s = prolong(gradient(), 2);
  // Distinct derivatives of u_x, u_y, u_z up to order 3 cover every jet of
  // order 1..3.
  EXPECT_EQ(s.size(), 3u + 6u + 10u);
}

TEST(Projection, SyntacticKeepsLowOrderEquations) {
  auto s6 = of(xyz(), {"u_zz + u_xy + u", "u_x - u", "u_y - u^2"}, 2);
  auto got = syntactic_project(s6, 1);
  EXPECT_EQ(got.order(), 1u);
  EXPECT_EQ(lines(got), (std::vector<std::string>{"u_x - u = 0", "u_y - u^2 = 0"}));
  EXPECT_EQ(syntactic_project(s6, 0), s6);
  EXPECT_EQ(kind_of([] { (void)syntactic_project(of(xy(), {"u_xy"}, 2), 1); }), ErrorKind::EmptyProjection);
}

TEST(Projection, LinearFindsHiddenCondition) {
  auto got = project_linear(prolong(ex8(), 1), 1);
  EXPECT_TRUE(remainders_modulo(Ps(xyz(), {"u_x"}), got.equations()).empty());
  EXPECT_TRUE(equals_generic(got, gradient()));
  EXPECT_TRUE(equals_generic(project_linear(ex8(), 0), ex8()));
  auto single = of(xy(), {"u_x - u"}, 1);
  EXPECT_EQ(lines(project_linear(prolong(single, 1), 1)), lines(single));
  auto uy = of(xy(), {"u_y"}, 1);
  EXPECT_TRUE(equals_generic(syntactic_project(prolong(uy, 1), 1), uy));
}

TEST(AffineRows, ReadCoefficients) {
  auto rows = to_affine_rows(of(xyz(), {"u_z + y*u_x"}, 1));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].coefficients.size(), 2u);
  EXPECT_EQ(rows[0].coefficients.at(JetVariable{0, MultiIndex({0, 0, 1})}), DiffPolynomial(1));
  EXPECT_EQ(rows[0].coefficients.at(JetVariable{0, MultiIndex({1, 0, 0})}), P(xyz(), "y"));
  EXPECT_TRUE(rows[0].constant.is_zero());
  auto r2 = to_affine_rows(of(xy(), {"u_x - u"}, 1));
  EXPECT_EQ(r2[0].coefficients.at(JetVariable{0, MultiIndex({0, 0})}), DiffPolynomial(-1));
  EXPECT_EQ(kind_of([] { (void)to_affine_rows(of(xy(), {"u_y - u^2"}, 1)); }), ErrorKind::NonLinearSystem);
}

TEST(Echelon, GenericRanks) {
  auto cols = jet_variables_up_to(xyz(), 1);
  EXPECT_EQ(echelon_generic(to_affine_rows(of(xyz(), {"u_x", "2*u_x"}, 1)), cols).rank, 1u);
  EXPECT_EQ(echelon_generic(to_affine_rows(of(xyz(), {"u_z + y*u_x", "u_y", "u_x"}, 1)), cols).rank, 3u);
  EXPECT_EQ(echelon_generic({}, cols).rank, 0u);
}

TEST(IntegrabilityConditions, Examples) {
  auto ic = integrability_conditions(ex8());
  EXPECT_EQ(lines(ic, xyz()), (std::vector<std::string>{"u_x = 0"}));
  EXPECT_TRUE(integrability_conditions(gradient()).empty());
  EXPECT_TRUE(integrability_conditions(wave()).empty());
}

TEST(Jacobi, Entries) {
  auto jb = jacobi_matrix(of(xy(), {"u_x"}, 1));
  auto col = [&](const char* l) {
    auto v = JetVariable{0, parse_repeated_index(l, xy())};
    return std::find(jb.columns.begin(), jb.columns.end(), v) - jb.columns.begin();
  };
  // Row 0 is D_x u_x.
  EXPECT_EQ(jb.rows[0].derivative, 0u);
  EXPECT_EQ(jb.entries[0][col("xx")], DiffPolynomial(1));
  EXPECT_TRUE(jb.is_right(col("xx")));
  EXPECT_FALSE(jb.is_upper(2));

  auto j8 = jacobi_matrix(of(xyz(), {"u_z + y*u_x"}, 1));
  auto c8 = std::find(j8.columns.begin(), j8.columns.end(), JetVariable{0, MultiIndex({1, 0, 0})}) - j8.columns.begin();
  EXPECT_EQ(j8.entries[1][c8], DiffPolynomial(1));  // D_y row, column u_x
  EXPECT_EQ(j8.block(true, true).size(), 3u);
  EXPECT_EQ(j8.block(false, false).size(), 1u);
}

TEST(Rank, AndDimension) {
  EXPECT_EQ(rank_of(wave()), 1u);
  EXPECT_EQ(dim_of(wave()), 12u);
  EXPECT_EQ(rank_of(gradient()), 3u);
  EXPECT_EQ(rank_of(of(xyz(), {"u_x", "2*u_x + 0*u"}, 1)), 1u);
}

TEST(EqualsGeneric, Examples) {
  EXPECT_TRUE(equals_generic(of(xy(), {"u_x", "u_y"}, 1), of(xy(), {"u_y", "u_x + u_y"}, 1)));
  EXPECT_FALSE(equals_generic(of(xy(), {"u_x"}, 1), of(xy(), {"u_x", "u_y"}, 1)));
  EXPECT_TRUE(equals_generic(of(xyz(), {"u_z + y*u_x", "u_y", "u_x"}, 1), gradient()));
}

TEST(ChangeCoordinates, Examples) {
  auto ux = of(xy(), {"u_x"}, 1);
  EXPECT_EQ(change_coordinates(ux, identity_matrix(2)), ux);
  EXPECT_EQ(lines(change_coordinates(ux, permutation_matrix({1, 0}))), (std::vector<std::string>{"u_y = 0"}));
  // x' = x, y' = x + y.
  RationalMatrix a{{1, 0}, {1, 1}};
  auto t = change_coordinates(of(xy(), {"u_xy"}, 2), a);
  EXPECT_EQ(lines(t), (std::vector<std::string>{"u_yy + u_xy = 0"}));
  // Coefficients are rewritten through x = A^{-1} x'.
  auto c = change_coordinates(of(xy(), {"y*u_x"}, 1), a);
  EXPECT_EQ(lines(c), lines(of(xy(), {"(y - x)*(u_x + u_y)"}, 1)));
}

TEST(ChangeCoordinates, InverseRestoresSystem) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_linear_system(rng, 3, 2, 2);
    const std::size_t p = s.signature().p();
    RationalMatrix a = identity_matrix(p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        if (i != j) a[i][j] = uniform(rng, -1, 1);
      }
    }
    RationalMatrix ai;
    try {
      ai = inverse(a);
    } catch (const Error&) {
      continue;
    }
    auto back = change_coordinates(change_coordinates(s, a), ai);
    ASSERT_TRUE(equals_generic(back, s));
  }
}

TEST(Matrices, InverseAndSingular) {
  RationalMatrix a{{2, 1}, {1, 1}};
  EXPECT_EQ(multiply(a, inverse(a)), identity_matrix(2));
  EXPECT_EQ(kind_of([] { (void)inverse(RationalMatrix{{1, 2}, {2, 4}}); }), ErrorKind::SingularMatrix);
}

}  // namespace
