#include <gtest/gtest.h>

#include <random>

#include "ast_generator.hpp"
#include "builders.hpp"
#include "germ/cli/dsl.hpp"

namespace germ::cli {
namespace {

DslError parse_error(std::string_view text) {
  try {
    (void)parse(text);
  } catch (const DslError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return DslError(ErrorCode::usage, 0, 0, "");
}

TEST(Parse, FamilyFixture) {
  const MapSpecAst ast = parse(
      "f1 = unity(1,2)*x1 + x1*(x1^2 + x2^3); f2 = unity(1,3)*x2 + x2*(x1^2 + 2*x2^3)");
  EXPECT_EQ(ast.dimension, 2u);
  const MapGerm f = lower(ast);
  EXPECT_EQ(f.degree(), 4);
  EXPECT_LT(max_abs_difference(f, test::fixture_23()), 1e-15);
}

TEST(Parse, OneDimensional) {
  const MapSpecAst ast = parse("f1 = x1^2");
  EXPECT_EQ(ast.dimension, 1u);
  EXPECT_EQ(lower(ast), test::make_germ(2, {{{{2}, 1.0}}}));
}

TEST(Parse, MetadataCommentsAndLayout) {
  const MapSpecAst ast = parse(
      "# comment\n\n@degree 6\n@radius 0.25\nf2 = x2 + 2.5i*x1^2  # trailing\nf1 = -x1 + (x1 +\n  x2)^3\n");
  EXPECT_EQ(ast.degree, 6);
  EXPECT_EQ(ast.radius, 0.25);
  const MapGerm f = lower(ast);
  EXPECT_EQ(f.degree(), 6);
  EXPECT_EQ(f.component(1).coefficient({2, 0}), Complex(0.0, 2.5));
  EXPECT_EQ(f.component(0).coefficient({1, 2}), Complex(3.0));
  EXPECT_EQ(f.component(0).coefficient({1, 0}), Complex(-1.0));
}

TEST(Parse, UnityReducesFraction) {
  const MapGerm f = lower(parse("f1 = unity(2,6)*x1 + unity(-1,4)*x1^2"));
  EXPECT_EQ(f.component(0).coefficient({1}), unity_root(1, 3));
  EXPECT_EQ(f.component(0).coefficient({2}), Complex(0.0, -1.0));
}

TEST(Parse, NonzeroConstant) {
  const DslError e = parse_error("f1 = 1 + x1");
  EXPECT_EQ(e.code(), ErrorCode::nonzero_constant);
  EXPECT_EQ(e.line(), 1);
  EXPECT_EQ(e.column(), 1);
  const DslError g = parse_error("f1 = x1\nf2 = (x1 + 1)^2 - x1^2");
  EXPECT_EQ(g.code(), ErrorCode::nonzero_constant);
  EXPECT_EQ(g.line(), 2);
  // cancels exactly
  EXPECT_NO_THROW((void)parse("f1 = (1 + x1)^2 - 1"));
}

TEST(Parse, DimensionMismatch) {
  const DslError a = parse_error("f1 = x1 + x2");
  EXPECT_EQ(a.code(), ErrorCode::dimension_mismatch);
  EXPECT_EQ(a.line(), 1);
  EXPECT_EQ(a.column(), 11);
  EXPECT_EQ(parse_error("f2 = x1").code(), ErrorCode::dimension_mismatch);
  EXPECT_EQ(parse_error("f1 = x1\nf1 = x1^2").code(), ErrorCode::dimension_mismatch);
  EXPECT_EQ(parse_error("f1 = x9").code(), ErrorCode::dimension_mismatch);
}

TEST(Parse, SyntaxErrors) {
  const DslError a = parse_error("f1 = x1 +* x1");
  EXPECT_EQ(a.code(), ErrorCode::syntax);
  EXPECT_EQ(a.column(), 10);
  EXPECT_EQ(parse_error("f1 = x1^2^3").code(), ErrorCode::syntax);
  EXPECT_EQ(parse_error("f1 = x1^-1").code(), ErrorCode::syntax);
  EXPECT_EQ(parse_error("f1 = (x1").code(), ErrorCode::syntax);
  EXPECT_EQ(parse_error("f1 = y1").code(), ErrorCode::syntax);
  EXPECT_EQ(parse_error("f1 = x1 $").code(), ErrorCode::syntax);
  EXPECT_EQ(parse_error("@degree 0\nf1 = x1").code(), ErrorCode::syntax);
  EXPECT_EQ(parse_error("f1 = unity(1,0)*x1").code(), ErrorCode::syntax);
  const DslError b = parse_error("f1 = x1\n\n  f2 = = x2");
  EXPECT_EQ(b.line(), 3);
  EXPECT_EQ(b.column(), 8);
}

TEST(RoundTrip, RandomAsts) {
  test::AstGenerator gen(42);
  for (int k = 0; k < 1000; ++k) {
    const MapSpecAst a = gen.ast();
    const std::string text = print(a);
    MapSpecAst b;
    ASSERT_NO_THROW(b = parse(text)) << text;
    ASSERT_EQ(a, b) << text;
    ASSERT_EQ(print(b), text);
  }
}

TEST(Lower, SyntacticDegreeBoundsExpansion) {
  test::AstGenerator gen(7);
  for (int k = 0; k < 200; ++k) {
    const MapSpecAst a = gen.ast();
    MapSpecAst exact = a;
    exact.degree.reset();
    const MapGerm f = lower(exact);
    for (std::size_t j = 0; j < a.dimension; ++j) {
      EXPECT_LE(f.component(j).polynomial_degree(), syntactic_degree(a.components[j]));
    }
  }
}

TEST(Lower, HonoursDegreeMetadata) {
  const MapGerm f = lower(parse("@degree 3\nf1 = x1 + x1^5"));
  EXPECT_EQ(f.degree(), 3);
  EXPECT_TRUE(f.component(0).coefficient({5}) == Complex(0.0));
}

}  // namespace
}  // namespace germ::cli
