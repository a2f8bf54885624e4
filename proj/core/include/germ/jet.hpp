#pragma once

// Truncated multivariate power series ("jets") with complex coefficients and
// n-tuples of jets fixing the origin ("map germs").
//
// A jet of dimension n and truncation degree d stores the coefficients of all
// monomials of total degree <= d; everything above d is discarded after every
// operation. Coefficients whose magnitude falls to kDropTolerance or below are
// removed, so exact inputs (integers, roots of unity) stay sparse under
// repeated composition.

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace germ {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDimension = 8;
inline constexpr double kDropTolerance = 1e-12;

class Multidegree {
 public:
  Multidegree() = default;
  explicit Multidegree(std::size_t dimension);
  Multidegree(std::initializer_list<int> exponents);
  explicit Multidegree(std::span<const int> exponents);

  static Multidegree unit(std::size_t dimension, std::size_t slot);

  std::size_t size() const { return size_; }
  int operator[](std::size_t slot) const { return exponents_[slot]; }
  void set(std::size_t slot, int value);
  int total() const;
  bool is_zero() const { return total() == 0; }

  std::vector<int> to_vector() const;
  std::string to_string() const;

  Multidegree operator+(const Multidegree& other) const;

  // Lexicographic on exponents; dimension breaks ties.
  friend auto operator<=>(const Multidegree&, const Multidegree&) = default;
  friend bool operator==(const Multidegree&, const Multidegree&) = default;

 private:
  std::array<std::uint8_t, kMaxDimension> exponents_{};
  std::uint8_t size_ = 0;
};

class Jet {
 public:
  using Terms = std::map<Multidegree, Complex>;

  Jet(std::size_t dimension, int degree);

  static Jet constant(std::size_t dimension, int degree, Complex value);
  static Jet variable(std::size_t dimension, int degree, std::size_t slot);
  static Jet monomial(std::size_t dimension, int degree, const Multidegree& exps,
                      Complex coeff);

  std::size_t dimension() const { return dimension_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex coefficient(const Multidegree& exps) const;
  Complex constant_term() const;

  // Accumulates into an existing coefficient; drops the result if it
  // vanishes. Terms above the truncation degree are ignored.
  Jet& add_term(const Multidegree& exps, Complex coeff);

  // Changes the truncation degree. Raising it treats the stored terms as an
  // exact polynomial.
  Jet with_degree(int degree) const;
  Jet homogeneous_part(int total) const;
  std::optional<int> lowest_degree() const;
  // Largest total degree present, -1 for the zero jet.
  int polynomial_degree() const;

  Complex evaluate(std::span<const Complex> point) const;
  Jet derivative(std::size_t slot) const;
  Jet pow(int exponent) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(Complex scalar);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(Jet lhs, Complex scalar) { return lhs *= scalar; }
  friend Jet operator*(Complex scalar, Jet rhs) { return rhs *= scalar; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  Jet operator-() const;

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  void check_compatible(const Jet& other, const char* op) const;

  std::size_t dimension_;
  int degree_;
  Terms terms_;
};

// Largest coefficient magnitude of lhs - rhs over all monomials.
double max_abs_difference(const Jet& lhs, const Jet& rhs);

// n jets of common dimension n and truncation degree, each without constant
// term, so the map fixes the origin.
class MapGerm {
 public:
  explicit MapGerm(std::vector<Jet> components);

  static MapGerm identity(std::size_t dimension, int degree);
  static MapGerm linear(const Eigen::MatrixXcd& matrix, int degree);

  std::size_t dimension() const { return components_.size(); }
  int degree() const { return components_.front().degree(); }
  const Jet& component(std::size_t j) const { return components_[j]; }
  const std::vector<Jet>& components() const { return components_; }

  MapGerm with_degree(int degree) const;
  int polynomial_degree() const;

  // Df(0).
  Eigen::MatrixXcd linear_part() const;

  Eigen::VectorXcd evaluate(const Eigen::VectorXcd& point) const;
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& point) const;

  friend MapGerm operator+(const MapGerm& lhs, const MapGerm& rhs);
  friend MapGerm operator-(const MapGerm& lhs, const MapGerm& rhs);
  friend bool operator==(const MapGerm&, const MapGerm&) = default;

 private:
  std::vector<Jet> components_;
};

double max_abs_difference(const MapGerm& lhs, const MapGerm& rhs);

// g(f(x)) truncated at the common degree.
Jet compose(const Jet& g, const MapGerm& f);
MapGerm compose(const MapGerm& g, const MapGerm& f);

// k-fold composition f∘…∘f, k >= 1.
MapGerm iterate(const MapGerm& f, long long k);

// x ↦ x - f(x).
MapGerm identity_minus(const MapGerm& f);

// V^{-1} ∘ f ∘ V for an invertible linear V.
MapGerm conjugate_linear(const MapGerm& f, const Eigen::MatrixXcd& change);

// g∘H with H(z) = (z_1^{e_1}, …, z_n^{e_n}), truncated at `degree`. Because
// every e_k >= 1, the result is exact through `degree` whenever g is exact
// through `degree`.
MapGerm substitute_powers(const MapGerm& g, std::span<const int> exponents,
                          int degree);

struct LowestForm {
  int degree;
  Jet form;
};

// Minimal total degree and homogeneous part of that degree for every
// component. Throws degenerate for an identically zero component.
std::vector<LowestForm> lowest_forms(const MapGerm& g);

// Flattened evaluation form of a germ treated as a polynomial map, used in
// tight Newton loops.
class PolynomialMap {
 public:
  explicit PolynomialMap(const MapGerm& germ);

  std::size_t dimension() const { return dimension_; }
  int degree() const { return degree_; }

  void evaluate(const Eigen::VectorXcd& x, Eigen::VectorXcd& value) const;
  void evaluate(const Eigen::VectorXcd& x, Eigen::VectorXcd& value,
                Eigen::MatrixXcd& jacobian) const;

  // value = f^k(x), jacobian = D(f^k)(x) by the chain rule.
  void iterate(const Eigen::VectorXcd& x, long long k, Eigen::VectorXcd& value,
               Eigen::MatrixXcd& jacobian) const;
  Eigen::VectorXcd iterate(const Eigen::VectorXcd& x, long long k) const;

 private:
  struct Term {
    std::size_t component;
    std::array<std::uint8_t, kMaxDimension> exponents;
    Complex coeff;
  };

  void fill_powers(const Eigen::VectorXcd& x, std::vector<Complex>& powers) const;

  std::size_t dimension_;
  int degree_;
  std::vector<Term> terms_;
};

}  // namespace germ
