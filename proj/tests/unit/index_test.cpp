#include <gtest/gtest.h>

#include <random>

#include "builders.hpp"
#include "germ/error.hpp"
#include "germ/index.hpp"
#include "germ/orbit.hpp"

namespace germ {
namespace {

using test::make_germ;

IndexOptions numerical(double radius) {
  IndexOptions o;
  o.strategy = IndexStrategy::numerical;
  o.radius = radius;
  return o;
}

TEST(Cronin, ProductOfDegrees) {
  const MapGerm g = make_germ(4, {{{{2, 0}, 1.0}}, {{{0, 3}, 1.0}}});
  const IndexReport r = zero_order_cronin(g);
  EXPECT_EQ(r.value, 6);
  EXPECT_EQ(r.method, IndexMethod::cronin);
  EXPECT_EQ(r.lowest_degrees, (std::vector<int>{2, 3}));
}

TEST(Cronin, HomogeneousQuadrics) {
  const MapGerm g = make_germ(3, {{{{2, 0}, 1.0}, {{0, 2}, -1.0}}, {{{1, 1}, 1.0}}});
  EXPECT_EQ(zero_order_cronin(g).value, 4);
  EXPECT_EQ(zero_order_numerical(g, 0.5).value, 4);
}

// G_M: -c_j z_j^{M/m_j} Σ_i a_ji z_i^M, orders (2,3), M = 6.
TEST(Cronin, SubstitutedBlockSystem) {
  const int M = 6;
  const std::vector<int> m{2, 3};
  const double a[2][2] = {{1, 1}, {1, 2}};
  std::vector<std::vector<test::Term>> comps(2);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<int> e{0, 0};
      e[j] += M / m[j];
      e[i] += M;
      comps[j].push_back({e, -static_cast<double>(M / m[j]) * a[j][i]});
    }
  }
  const MapGerm g = make_germ(12, comps);
  const IndexReport r = zero_order_cronin(g);
  EXPECT_EQ(r.value, 72);
  EXPECT_EQ(r.lowest_degrees, (std::vector<int>{9, 8}));
}

TEST(Cronin, RefusesNonIsolatedLowestForms) {
  // lowest forms x*y and x*y share the line x = 0
  const MapGerm g = make_germ(4, {{{{1, 1}, 1.0}, {{0, 3}, 1.0}}, {{{1, 1}, 1.0}, {{3, 0}, 1.0}}});
  const auto verdict = check_isolation(lowest_forms(g));
  EXPECT_FALSE(verdict.isolated);
  try {
    (void)zero_order_cronin(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_isolated);
  }
  // the automatic route still finds the order: x y + y^3, x y + x^3 -> 5
  EXPECT_EQ(zero_order(g).value, zero_order_numerical(g, 0.3).value);
}

TEST(Cronin, ZeroComponentIsDegenerate) {
  const MapGerm g(std::vector<Jet>{test::make_jet(2, 3, {{{1, 0}, 1.0}}), Jet(2, 3)});
  try {
    (void)zero_order_cronin(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate);
  }
}

TEST(Numerical, OneDimensional) {
  EXPECT_EQ(zero_order_numerical(make_germ(3, {{{{3}, 1.0}}}), 0.5).value, 3);
  const IndexReport r = zero_order_numerical(make_germ(3, {{{{1}, 2.0}, {{3}, -1.0}}}), 0.5);
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.method, IndexMethod::numerical_degree);
}

TEST(Numerical, WitnessInvariants) {
  const MapGerm g = make_germ(3, {{{{2, 0}, 1.0}, {{0, 2}, -1.0}}, {{{1, 1}, 1.0}}});
  const IndexReport r = zero_order_numerical(g, 0.5);
  ASSERT_EQ(r.witnesses.size(), static_cast<std::size_t>(r.value));
  for (std::size_t a = 0; a < r.witnesses.size(); ++a) {
    const auto& w = r.witnesses[a];
    EXPECT_LT(w.point.norm(), r.ball_radius * 0.95);
    EXPECT_LT((g.evaluate(w.point) - r.regular_value).norm(), 1e-9 * r.regular_value.norm() + 1e-14);
    EXPECT_TRUE(std::isfinite(w.jacobian_condition));
    for (std::size_t b = a + 1; b < r.witnesses.size(); ++b) {
      EXPECT_GT((w.point - r.witnesses[b].point).norm(), 1e-7 * r.ball_radius);
    }
  }
}

TEST(Numerical, DeterministicGivenSeed) {
  const MapGerm g = identity_minus(iterate(test::fixture_23(), 2));
  const IndexReport a = zero_order_numerical(g, 0.25);
  const IndexReport b = zero_order_numerical(g, 0.25);
  ASSERT_EQ(a.value, b.value);
  for (std::size_t k = 0; k < a.witnesses.size(); ++k) EXPECT_EQ(a.witnesses[k].point, b.witnesses[k].point);
}

TEST(FixedPointIndex, Examples) {
  EXPECT_EQ(fixed_point_index(test::one_dim(0.5, 2, 1.0, 3)).value, 1);
  EXPECT_EQ(fixed_point_index(test::one_dim(unity_root(1, 7), 2, 1.0, 3)).value, 1);
  for (int k = 2; k <= 6; ++k) {
    const MapGerm f = test::one_dim(1.0, k, 1.0, k);
    EXPECT_EQ(fixed_point_index(f).value, k);
    EXPECT_EQ(fixed_point_index(f, numerical(0.5)).value, k);
  }
  EXPECT_EQ(iterate_index(test::fixture_23(), 6).value, 12);
}

TEST(FixedPointIndex, ExactAndNumericalAgreeOnFamily) {
  const MapGerm f = test::fixture_23();
  const std::map<long long, int> want{{1, 1}, {2, 3}, {3, 4}, {6, 12}};
  for (const auto& [k, mu] : want) {
    EXPECT_EQ(iterate_index(f, k).value, mu) << k;
    EXPECT_EQ(iterate_index(f, k, numerical(0.5 / static_cast<double>(k))).value, mu) << k;
  }
  const IndexReport six = iterate_index(f, 6);
  EXPECT_EQ(six.method, IndexMethod::composite_product);
  EXPECT_EQ(six.substitution, (std::vector<int>{3, 2}));
  IndexOptions cronin_only;
  cronin_only.strategy = IndexStrategy::cronin;
  EXPECT_EQ(iterate_index(f, 2, cronin_only).value, 3);
}

TEST(IsSimple, Examples) {
  EXPECT_TRUE(is_simple(test::one_dim(-1.0, 3, 1.0, 3)));
  EXPECT_FALSE(is_simple(test::one_dim(1.0, 2, 1.0, 3)));
  EXPECT_FALSE(is_simple(iterate(test::fixture_23(), 6)));
  EXPECT_TRUE(is_simple(test::fixture_23()));
}

TEST(IndexPositivity, FixturesAndRandomGerms) {
  std::mt19937_64 rng(77);
  std::vector<std::pair<MapGerm, int>> cases;  // germ, expected index (0 = not predicted)
  for (int k = 0; k < 40; ++k) {
    cases.emplace_back(test::random_germ(Eigen::MatrixXcd::Random(2, 2) + 3.0 * Eigen::MatrixXcd::Identity(2, 2), 3, rng), 1);
  }
  for (int k = 0; k < 30; ++k) {
    cases.emplace_back(test::random_germ(Eigen::MatrixXcd::Identity(2, 2), 2, rng), 4);
  }
  for (int k = 0; k < 30; ++k) {
    cases.emplace_back(test::random_germ(test::diagonal({1.0, 0.5}), 2, rng), 2);
  }
  cases.emplace_back(test::fixture_23(), 1);
  cases.emplace_back(iterate(test::fixture_23().with_degree(9), 6), 12);
  for (const auto& [f, want] : cases) {
    const IndexReport r = fixed_point_index(f);
    EXPECT_GE(r.value, 1);
    EXPECT_EQ(r.value == 1, is_simple(f));
    EXPECT_EQ(r.value, want);
  }
}

TEST(IndexPositivity, NumericalPathOnRandomDegenerateGerms) {
  std::mt19937_64 rng(78);
  for (int k = 0; k < 5; ++k) {
    const MapGerm f = test::random_germ(Eigen::MatrixXcd::Identity(2, 2), 2, rng);
    EXPECT_EQ(fixed_point_index(f, numerical(0.05)).value, 4);
  }
}

TEST(ProductRule, Examples) {
  const MapGerm h1 = make_germ(3, {{{{2, 0}, 1.0}}, {{{0, 1}, 1.0}}});
  const MapGerm h2 = make_germ(3, {{{{1, 0}, 1.0}}, {{{0, 3}, 1.0}}});
  const auto r = product_rule_check(h1, h2);
  EXPECT_EQ(r.first, 2);
  EXPECT_EQ(r.second, 3);
  EXPECT_EQ(r.composite, 6);
  EXPECT_TRUE(r.holds);
  const auto id = product_rule_check(h1, MapGerm::identity(2, 3));
  EXPECT_TRUE(id.holds);
  EXPECT_EQ(id.composite, 2);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    const MapGerm a = test::random_germ(Eigen::MatrixXcd::Random(2, 2) + 2.0 * Eigen::MatrixXcd::Identity(2, 2), 2, rng);
    const MapGerm b = test::random_germ(Eigen::MatrixXcd::Random(2, 2) + 2.0 * Eigen::MatrixXcd::Identity(2, 2), 2, rng);
    const auto s = product_rule_check(a, b);
    EXPECT_EQ(s.composite, 1);
    EXPECT_TRUE(s.holds);
  }
}

TEST(Stability, PerturbedFixedPointsCarryTheIndex) {
  // (1+ε)x + x^3 has three simple fixed points near 0
  for (double eps : {1e-4, -3e-5, 1e-6}) {
    const MapGerm f = test::one_dim(1.0 + eps, 3, 1.0, 3);
    EXPECT_EQ(fixed_points(f, 1, 0.5).size(), 3u) << eps;
  }
  std::mt19937_64 rng(19);
  const MapGerm f = test::fixture_23();
  for (int t = 0; t < 3; ++t) {
    const MapGerm g = random_perturbation(f, 1e-4, PerturbationMode::generic, rng);
    EXPECT_EQ(fixed_points(g, 2, 0.3).size(), 3u);
  }
}

TEST(Conjugation, IndexInvariant) {
  std::mt19937_64 rng(31);
  const MapGerm f = test::fixture_23().with_degree(9);
  for (int t = 0; t < 3; ++t) {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Random(2, 2) + 2.0 * Eigen::MatrixXcd::Identity(2, 2);
    const MapGerm g = conjugate_linear(f, v);
    EXPECT_EQ(iterate_index(g, 2).value, 3);
    EXPECT_EQ(iterate_index(g, 3).value, 4);
    EXPECT_EQ(iterate_index(g, 6).value, 12);
  }
}

TEST(OneDimensionalLaw, IterateIndexIsOneModM) {
  for (int M : {2, 3, 4, 6}) {
    for (int k : {2, 3}) {
      const MapGerm f = test::one_dim(unity_root(1, M), k, 1.0, k);
      const int mu = iterate_index(f, M).value;
      EXPECT_EQ(mu % M, 1) << M << " " << k;
      EXPECT_GE(mu, M + 1);
    }
  }
}

TEST(ResonantSubstitution, Exponents) {
  EXPECT_EQ(resonant_substitution(test::fixture_23(), 6), (std::vector<int>{3, 2}));
  EXPECT_EQ(resonant_substitution(test::fixture_23(), 2), (std::vector<int>{1, 2}));
  Eigen::MatrixXcd jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW((void)resonant_substitution(MapGerm::linear(jordan, 2), 2), Error);
}

}  // namespace
}  // namespace germ
