#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "germ/jet.hpp"

namespace germ {

inline constexpr double kUnityTolerance = 1e-9;
inline constexpr int kDefaultMaxUnityOrder = 720;

// Least m <= max_order with |λ^m - 1| <= tolerance, i.e. the order of λ as a
// primitive root of unity.
std::optional<int> classify_unity(Complex lambda, int max_order = kDefaultMaxUnityOrder,
                                  double tolerance = kUnityTolerance);

// e^{2πi p/q}, computed from the reduced fraction so exact inputs stay exact
// on the real and imaginary axes.
Complex unity_root(long long p, long long q);

struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::vector<std::optional<int>> unity_orders;
  bool diagonal = false;         // linear part is exactly diagonal
  bool diagonalizable = false;
  Eigen::MatrixXcd eigenvectors; // columns; identity when diagonal

  std::vector<long long> distinct_orders() const;
};

Spectrum spectrum_of(const Eigen::MatrixXcd& linear, int max_order = kDefaultMaxUnityOrder);
Spectrum spectrum_of(const MapGerm& f, int max_order = kDefaultMaxUnityOrder);

// Periods of periodic points of the linear map: 1 together with the lcm of
// every nonempty set of unity orders, restricted to values <= cap.
std::set<long long> linear_period_set(const Spectrum& s, long long cap);

// Some unity orders among the eigenvalues have lcm exactly `period`.
bool condition_1_0(const Spectrum& s, long long period);

// λ_j = λ_1^{i_1} ⋯ λ_s^{i_s} for primitive m_k-th roots λ_k with pairwise
// distinct prime orders, decided by m_j | (i_j - 1) and m_k | i_k (k ≠ j).
// `j` is zero-based.
bool resonance_predicate(std::span<const int> orders, std::size_t j, const Multidegree& exps);

// |λ_j - λ^I| < tolerance, straight from the eigenvalues.
bool eigen_relation_holds(std::span<const Complex> lambda, std::size_t j,
                          const Multidegree& exps, double tolerance = kUnityTolerance);

// Every eigenvalue is 1 or has λ^m ≠ 1.
bool shub_sullivan_applicable(const Spectrum& s, long long m);

// lcm of the unity orders dividing m. f^{reduced} and f^m have the same index
// at an isolated fixed point, since every eigenvalue η of Df^{reduced}(0)
// is 1 or satisfies η^{m/reduced} ≠ 1.
long long reduced_power(const Spectrum& s, long long m);

}  // namespace germ
