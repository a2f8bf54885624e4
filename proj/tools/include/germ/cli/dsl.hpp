#pragma once

// Text format for polynomial map germs (.germ files).
//
//   # the (2,3) family member
//   @degree 4
//   f1 = unity(1,2)*x1 + x1*(x1^2 + x2^3)
//   f2 = unity(1,3)*x2 + x2*(x1^2 + 2*x2^3)
//
// Statements are separated by newlines or ';'. See docs/dsl.md.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "germ/error.hpp"
#include "germ/jet.hpp"

namespace germ::cli {

struct Expr {
  enum class Kind { real, imaginary, variable, unity, add, sub, mul, neg, pow };

  Kind kind = Kind::real;
  double number = 0.0;      // real / imaginary literal
  int index = 0;            // variable: 1-based
  long long p = 0, q = 1;   // unity(p, q)
  int exponent = 0;         // pow
  std::vector<Expr> children;

  static Expr real_literal(double v);
  static Expr imaginary_literal(double v);
  static Expr variable(int index);
  static Expr unity(long long p, long long q);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr negate(Expr operand);
  static Expr power(Expr base, int exponent);

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct MapSpecAst {
  std::size_t dimension = 0;
  std::vector<Expr> components;  // f1 … fn
  std::optional<int> degree;
  std::optional<double> radius;

  friend bool operator==(const MapSpecAst&, const MapSpecAst&) = default;
};

// Error with the 1-based source position of the offending token.
class DslError : public Error {
 public:
  DslError(ErrorCode code, int line, int column, const std::string& message);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Throws DslError with code syntax, dimension_mismatch or nonzero_constant.
MapSpecAst parse(std::string_view text);

// Canonical text; parse(print(ast)) == ast.
std::string print(const MapSpecAst& ast);
std::string print(const Expr& expr);

// Upper bound on the polynomial degree of an expression.
int syntactic_degree(const Expr& expr);

// Expands the components into a germ truncated at the @degree metadata, or
// at the syntactic degree when absent.
MapGerm lower(const MapSpecAst& ast);

}  // namespace germ::cli
