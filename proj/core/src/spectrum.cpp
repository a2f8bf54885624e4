#include "germ/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "germ/error.hpp"

namespace germ {

namespace {

// |λ^m - 1| evaluated in polar form.
double unity_defect(Complex lambda, long long m) {
  const double r = std::pow(std::abs(lambda), static_cast<double>(m));
  const double angle = static_cast<double>(m) * std::arg(lambda);
  return std::abs(std::polar(r, angle) - Complex(1.0));
}

}  // namespace

std::optional<int> classify_unity(Complex lambda, int max_order, double tolerance) {
  if (max_order < 1) throw Error(ErrorCode::structural, "max_order must be positive");
  if (std::abs(std::abs(lambda) - 1.0) > tolerance) return std::nullopt;
  for (int m = 1; m <= max_order; ++m) {
    if (unity_defect(lambda, m) <= tolerance) return m;
  }
  return std::nullopt;
}

Complex unity_root(long long p, long long q) {
  if (q < 1) throw Error(ErrorCode::structural, "unity root denominator must be positive");
  p %= q;
  if (p < 0) p += q;
  const long long g = std::gcd(p, q);
  p /= g;
  q /= g;
  // Land exactly on the axes for quarter turns.
  if (p == 0) return {1.0, 0.0};
  if (4 * p == q) return {0.0, 1.0};
  if (2 * p == q) return {-1.0, 0.0};
  if (4 * p == 3 * q) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<long long> Spectrum::distinct_orders() const {
  std::set<long long> orders;
  for (const auto& o : unity_orders) {
    if (o) orders.insert(*o);
  }
  return {orders.begin(), orders.end()};
}

Spectrum spectrum_of(const Eigen::MatrixXcd& linear, int max_order) {
  const Eigen::Index n = linear.rows();
  Spectrum s;
  const Eigen::MatrixXcd off = linear - Eigen::MatrixXcd(linear.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    s.diagonal = true;
    s.diagonalizable = true;
    s.eigenvectors = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) s.eigenvalues.push_back(linear(k, k));
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(linear);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::structural, "eigen decomposition failed");
    }
    s.eigenvectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < n; ++k) s.eigenvalues.push_back(solver.eigenvalues()[k]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.eigenvectors);
    const auto& sv = svd.singularValues();
    s.diagonalizable = sv[n - 1] > 1e-8 * sv[0];
  }
  for (const Complex& lambda : s.eigenvalues) s.unity_orders.push_back(classify_unity(lambda, max_order));
  return s;
}

Spectrum spectrum_of(const MapGerm& f, int max_order) {
  return spectrum_of(f.linear_part(), max_order);
}

std::set<long long> linear_period_set(const Spectrum& s, long long cap) {
  std::set<long long> periods{1};
  for (long long order : s.distinct_orders()) {
    std::set<long long> next = periods;
    for (long long p : periods) {
      const long long l = std::lcm(p, order);
      if (l <= cap) next.insert(l);
    }
    periods = std::move(next);
  }
  if (cap < 1) periods.clear();
  return periods;
}

bool condition_1_0(const Spectrum& s, long long period) {
  // lcm closure of the nonempty subsets; {1} is only reachable through an
  // eigenvalue equal to 1.
  std::set<long long> reachable;
  for (long long order : s.distinct_orders()) {
    if (period % order != 0) continue;
    std::set<long long> next = reachable;
    next.insert(order);
    for (long long p : reachable) next.insert(std::lcm(p, order));
    reachable = std::move(next);
  }
  return reachable.count(period) > 0;
}

bool resonance_predicate(std::span<const int> orders, std::size_t j, const Multidegree& exps) {
  if (j >= orders.size() || exps.size() < orders.size()) {
    throw Error(ErrorCode::structural, "resonance_predicate: index out of range");
  }
  for (std::size_t k = 0; k < orders.size(); ++k) {
    const int shifted = exps[k] - (k == j ? 1 : 0);
    if (shifted % orders[k] != 0) return false;
  }
  return true;
}

bool eigen_relation_holds(std::span<const Complex> lambda, std::size_t j, const Multidegree& exps,
                          double tolerance) {
  Complex product = 1.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    for (int e = 0; e < exps[k]; ++e) product *= lambda[k];
  }
  return std::abs(lambda[j] - product) < tolerance;
}

bool shub_sullivan_applicable(const Spectrum& s, long long m) {
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
    if (std::abs(s.eigenvalues[k] - Complex(1.0)) <= kUnityTolerance) continue;
    if (unity_defect(s.eigenvalues[k], m) <= kUnityTolerance) return false;
  }
  return true;
}

long long reduced_power(const Spectrum& s, long long m) {
  long long reduced = 1;
  for (long long order : s.distinct_orders()) {
    if (m % order == 0) reduced = std::lcm(reduced, order);
  }
  return reduced;
}

}  // namespace germ
