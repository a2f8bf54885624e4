#include <gtest/gtest.h>

#include <random>

#include "builders.hpp"
#include "germ/dold.hpp"
#include "germ/error.hpp"
#include "germ/normal_form.hpp"
#include "germ/spectrum.hpp"

namespace germ {
namespace {

using test::make_germ;

std::set<SupportEntry> divisibility_set(const std::vector<int>& m, int degree) {
  std::set<SupportEntry> out;
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      if (a + b < 2) continue;
      for (std::size_t j = 0; j < 2; ++j) {
        if (resonance_predicate(m, j, Multidegree{a, b})) out.insert({j, Multidegree{a, b}});
      }
    }
  }
  return out;
}

void expect_conjugacy(const MapGerm& f, const NormalFormResult& r, double tol) {
  const MapGerm lhs = compose(r.transform, r.normalized);
  const MapGerm rhs = compose(f.with_degree(r.degree), r.transform);
  EXPECT_LT(max_abs_difference(lhs, rhs), tol);
  EXPECT_LT(r.conjugacy_defect, tol);
  EXPECT_LT((r.transform.linear_part() - Eigen::MatrixXcd::Identity(f.dimension(), f.dimension())).norm(), 1e-15);
}

TEST(Normalize, NonResonantLine) {
  const MapGerm f = make_germ(3, {{{{1}, 2.0}, {{2}, 1.0}}});
  const NormalFormResult r = normalize(f, 3);
  EXPECT_EQ(r.normalized, make_germ(3, {{{{1}, 2.0}}}));
  EXPECT_TRUE(r.resonant_support.empty());
  expect_conjugacy(f, r, 1e-12);
}

TEST(Normalize, RandomGermWithOrdersTwoThree) {
  std::mt19937_64 rng(2);
  const std::vector<Complex> lambda{-1.0, unity_root(1, 3)};
  const MapGerm f = test::random_germ(test::diagonal({lambda[0], lambda[1]}), 5, rng);
  const NormalFormResult r = normalize(f, 7);
  const auto predicted = resonant_monomials(lambda, 7);
  EXPECT_EQ(predicted, divisibility_set({2, 3}, 7));
  EXPECT_EQ(r.resonant_support, predicted);
  for (std::size_t j = 0; j < 2; ++j) {
    for (const auto& [e, c] : r.normalized.component(j).terms()) {
      if (e.total() >= 2 && !predicted.count({j, e})) EXPECT_LT(std::abs(c), 1e-10) << e.to_string();
    }
  }
  expect_conjugacy(f, r, 1e-9);
}

TEST(Normalize, RandomGermWithOrdersTwoFive) {
  std::mt19937_64 rng(3);
  const std::vector<Complex> lambda{-1.0, unity_root(1, 5)};
  const MapGerm f = test::random_germ(test::diagonal({lambda[0], lambda[1]}), 4, rng, 0.5);
  const NormalFormResult r = normalize(f, 7);
  EXPECT_EQ(r.resonant_support, divisibility_set({2, 5}, 7));
  expect_conjugacy(f, r, 1e-9);
}

TEST(Normalize, AlreadyNormalIsUntouched) {
  const MapGerm f = test::fixture_23().with_degree(7);
  const NormalFormResult r = normalize(f, 7);
  EXPECT_LT(max_abs_difference(r.normalized, f), 1e-14);
  EXPECT_LT(max_abs_difference(r.transform, MapGerm::identity(2, 7)), 1e-14);
}

TEST(Normalize, Rejections) {
  Eigen::MatrixXcd rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  try {
    (void)normalize(MapGerm::linear(rot, 3), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_diagonal);
  }
  // 2^2 is within 1e-8 of 4 + 1e-8
  const MapGerm f = make_germ(3, {{{{1, 0}, 2.0}}, {{{0, 1}, 4.0 + 1e-8}, {{2, 0}, 1.0}}});
  try {
    (void)normalize(f, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::small_divisor);
  }
}

TEST(TangentInverse, ComposesToIdentity) {
  std::mt19937_64 rng(6);
  const MapGerm h = test::random_germ(Eigen::MatrixXcd::Identity(3, 3), 5, rng);
  const MapGerm id = MapGerm::identity(3, 5);
  EXPECT_LT(max_abs_difference(compose(h, tangent_inverse(h)), id), 1e-10);
  EXPECT_LT(max_abs_difference(compose(tangent_inverse(h), h), id), 1e-10);
}

TEST(Skeleton, FixtureBlock) {
  const ResonantSkeleton s = resonant_skeleton(test::fixture_23().with_degree(7), {2, 3});
  EXPECT_LT((s.block - test::block_matrix({{1, 1}, {1, 2}})).norm(), 1e-14);
  EXPECT_TRUE(s.minors_invertible);
  EXPECT_TRUE(s.matches());
  ASSERT_EQ(s.minors.size(), 3u);
}

TEST(Skeleton, SingularBlock) {
  const MapGerm f = test::resonant_family({2, 3}, test::block_matrix({{1, 1}, {1, 1}}), 7);
  const ResonantSkeleton s = resonant_skeleton(f, {2, 3});
  EXPECT_FALSE(s.minors_invertible);
  EXPECT_TRUE(s.matches());
}

TEST(Skeleton, RandomNormalForm) {
  std::mt19937_64 rng(8);
  const MapGerm f = test::random_germ(test::diagonal({-1.0, unity_root(1, 3)}), 5, rng);
  const NormalFormResult r = normalize(f, 7);
  const ResonantSkeleton s = resonant_skeleton(r.normalized, {2, 3});
  EXPECT_TRUE(s.minors_invertible);
  EXPECT_TRUE(s.orders_match);
  EXPECT_TRUE(s.remaining_nonresonant);
}

TEST(Skeleton, ShapeViolationReported) {
  // x2^3 in the first component is not x1 times a block monomial
  const MapGerm f = make_germ(7, {{{{1, 0}, -1.0}, {{0, 3}, 1.0}}, {{{0, 1}, unity_root(1, 3)}}});
  const ResonantSkeleton s = resonant_skeleton(f, {2, 3});
  EXPECT_FALSE(s.matches());
  ASSERT_FALSE(s.violations.empty());
  EXPECT_EQ(s.violations.front().component, 0u);
}

TEST(Normalize, DoldIndicesSurvive) {
  std::mt19937_64 rng(10);
  const MapGerm f = test::random_germ(test::diagonal({-1.0, unity_root(1, 3)}), 3, rng, 0.5);
  const NormalFormResult r = normalize(f, 9);
  for (long long M : {2, 3, 6}) {
    EXPECT_EQ(dold_local(r.normalized, M).value, dold_local(f, M).value) << M;
  }
}

}  // namespace
}  // namespace germ
