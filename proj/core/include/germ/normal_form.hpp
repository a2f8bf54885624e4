#pragma once

// Polynomial normal forms for germs with diagonal linear part: a tangent-to-
// identity change of coordinates H removing every non-resonant monomial up
// to a given degree, and the block structure of the resonant remainder.

#include <set>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "germ/jet.hpp"

namespace germ {

inline constexpr double kSmallDivisorTolerance = 1e-6;

// (component j, exponent I); j is zero-based.
using SupportEntry = std::pair<std::size_t, Multidegree>;

struct NormalFormResult {
  MapGerm transform;   // H, linear part the identity
  MapGerm normalized;  // g = H⁻¹∘f∘H
  int degree = 0;
  std::set<SupportEntry> resonant_support;  // monomials of g with degree >= 2
  // max |H∘g - f∘H| over coefficients through `degree`.
  double conjugacy_defect = 0.0;
};

// Throws non_diagonal for a non-diagonal linear part and small_divisor when
// some |λ^I - λ_j| falls below kSmallDivisorTolerance without vanishing.
NormalFormResult normalize(const MapGerm& f, int degree);

// Every (j, I) with 2 <= |I| <= degree and λ_j = λ^I within the unity
// tolerance.
std::set<SupportEntry> resonant_monomials(std::span<const Complex> eigenvalues, int degree);

// Formal inverse of a map with identity linear part, through its degree.
MapGerm tangent_inverse(const MapGerm& h);

struct ShapeViolation {
  std::size_t component;
  Multidegree exponents;
  Complex coefficient;
};

struct PrincipalMinor {
  std::vector<std::size_t> rows;
  Complex determinant;
};

struct ResonantSkeleton {
  std::vector<int> orders;
  // b(j, i): coefficient of x_j x_i^{m_i} in component j, for j, i < s.
  Eigen::MatrixXcd block;
  std::vector<PrincipalMinor> minors;
  // Unity orders of λ_1..λ_s match `orders`, which are distinct primes.
  bool orders_match = false;
  // μ_r^{m_1⋯m_s} ≠ 1 for the remaining eigenvalues.
  bool remaining_nonresonant = false;
  bool minors_invertible = false;
  // Monomials outside the block form: for j < s, anything other than
  // x_j · (monomial in x_1^{m_1}, …, x_s^{m_s} of sub-total >= 1) below
  // degree (m_1⋯m_s)^2; for j >= s, any term of degree < 2 besides μ_j x_j.
  std::vector<ShapeViolation> violations;

  bool matches() const { return orders_match && remaining_nonresonant && violations.empty(); }
};

// `orders` lists m_1..m_s for the first s coordinates.
ResonantSkeleton resonant_skeleton(const MapGerm& g, const std::vector<int>& orders);

}  // namespace germ
