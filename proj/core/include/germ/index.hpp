#pragma once

// Zero orders π_g(0) and fixed-point indices μ_f(0) = π_{id-f}(0) of
// holomorphic germs.
//
// Three routes are available:
//   cronin             product of the lowest homogeneous degrees, valid when
//                      the lowest forms vanish jointly only at the origin;
//   composite_product  Cronin applied to g∘H for a monomial substitution
//                      H(z) = (z_k^{e_k}), divided by π_H = Π e_k;
//   numerical_degree   count of solutions of g(x) = q in a ball for a small
//                      random regular value q, found by multi-start Newton
//                      and confirmed with a second independent q.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "germ/jet.hpp"
#include "germ/newton.hpp"

namespace germ {

enum class IndexMethod { cronin, composite_product, numerical_degree };

std::string_view to_string(IndexMethod method);

struct Witness {
  Eigen::VectorXcd point;
  double jacobian_condition;
};

struct IndexReport {
  int value = 0;
  IndexMethod method = IndexMethod::cronin;
  std::vector<Witness> witnesses;        // numerical_degree only
  Eigen::VectorXcd regular_value;        // numerical_degree only
  double ball_radius = 0.0;              // numerical_degree only
  std::vector<int> lowest_degrees;       // of the system Cronin was applied to
  std::vector<int> substitution;         // composite_product exponents
  int truncation_degree = 0;
};

struct CroninOptions {
  // Skip the isolation test; for callers that certify isolation themselves.
  bool assume_isolated = false;
  int random_lines = 64;
  int projective_starts = 24;
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
};

struct IsolationVerdict {
  bool isolated = true;
  std::string reason;
};

// The lowest-form system has no common zero besides the origin. Runs the
// random-line restriction test and then searches each affine chart of
// projective space for a common zero with Levenberg-Marquardt.
IsolationVerdict check_isolation(const std::vector<LowestForm>& forms, const CroninOptions& options = {});

IndexReport zero_order_cronin(const MapGerm& g, const CroninOptions& options = {});

// `g` must be exact through g.degree(); the substituted system is truncated
// at the same degree.
IndexReport zero_order_composite(const MapGerm& g, const std::vector<int>& exponents,
                                 const CroninOptions& options = {});

struct NumericalBudget {
  int starts_per_order = 200;
  int min_starts = 400;
  int rays = 16;
  int max_iterations = 60;
  // |q| = regular_value_scale · ρ^{lowest_degree}. The germ overloads raise
  // lowest_degree to the largest lowest-form or pure-axis degree of g.
  double regular_value_scale = 1e-3;
  int lowest_degree = 1;
  int order_hint = 1;
  // Leakage retries: |q| shrinks by shrink_factor each time.
  int max_shrinks = 4;
  double shrink_factor = 1e-2;
  std::uint64_t seed = 0xbb67ae8584caa73bULL;
};

IndexReport zero_order_numerical(const PointMap& g, std::size_t dimension, double radius,
                                 const NumericalBudget& budget = {});
IndexReport zero_order_numerical(const MapGerm& g, double radius, const NumericalBudget& budget = {});

enum class IndexStrategy { automatic, cronin, composite, numerical };

struct IndexOptions {
  IndexStrategy strategy = IndexStrategy::automatic;
  // Working radius of the numerical path.
  double radius = 0.5;
  NumericalBudget budget;
  CroninOptions cronin;
  // Upper bound for the jet truncation degree raised while looking for
  // nonvanishing lowest forms.
  int max_degree = 48;
};

// π_g(0): Cronin when certified, numerical otherwise (unless forced).
IndexReport zero_order(const MapGerm& g, const IndexOptions& options = {});

// μ_{f^power}(0). `f` is treated as the polynomial its jet stores.
IndexReport iterate_index(const MapGerm& f, long long power, const IndexOptions& options = {});

inline IndexReport fixed_point_index(const MapGerm& f, const IndexOptions& options = {}) {
  return iterate_index(f, 1, options);
}

// Monomial substitution exponents that separate the resonant block of
// x - f^power(x) for a diagonal linear part: power/m_j for eigenvalues of
// order m_j dividing power, power for other roots of unity, 1 otherwise.
std::vector<int> resonant_substitution(const MapGerm& f, long long power);

// No eigenvalue of Df(0) equals 1 (within the unity tolerance).
bool is_simple(const MapGerm& f);

struct ProductRuleResult {
  int first = 0;
  int second = 0;
  int composite = 0;
  bool holds = false;
};

ProductRuleResult product_rule_check(const MapGerm& h1, const MapGerm& h2,
                                     const IndexOptions& options = {});

}  // namespace germ
