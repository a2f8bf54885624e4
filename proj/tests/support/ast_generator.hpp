#pragma once

#include <cmath>
#include <random>

#include "germ/cli/dsl.hpp"

namespace germ::test {

// Random valid map specifications: every component is a variable times a
// random expression, so the constant term vanishes.
class AstGenerator {
 public:
  explicit AstGenerator(std::uint64_t seed) : rng_(seed) {}

  cli::MapSpecAst ast() {
    cli::MapSpecAst a;
    a.dimension = 1 + pick(4);
    for (std::size_t j = 0; j < a.dimension; ++j) {
      a.components.push_back(cli::Expr::binary(cli::Expr::Kind::mul,
                                               cli::Expr::variable(static_cast<int>(1 + pick(a.dimension))),
                                               expr(a.dimension, 3)));
    }
    if (pick(2)) a.degree = static_cast<int>(1 + pick(20));
    if (pick(2)) a.radius = number() + 1e-3;
    return a;
  }

 private:
  using Expr = cli::Expr;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  double number() {
    switch (pick(3)) {
      case 0: return static_cast<double>(pick(100));
      case 1: return std::uniform_real_distribution<double>(0.0, 10.0)(rng_);
      default: return std::pow(10.0, std::uniform_real_distribution<double>(-20.0, 20.0)(rng_));
    }
  }

  Expr expr(std::size_t n, int depth) {
    const std::size_t kind = depth == 0 ? pick(4) : pick(9);
    switch (kind) {
      case 0: return Expr::real_literal(number());
      case 1: return Expr::imaginary_literal(number());
      case 2: return Expr::variable(static_cast<int>(1 + pick(n)));
      case 3: return Expr::unity(static_cast<long long>(pick(13)) - 6, static_cast<long long>(1 + pick(12)));
      case 4: return Expr::binary(Expr::Kind::add, expr(n, depth - 1), expr(n, depth - 1));
      case 5: return Expr::binary(Expr::Kind::sub, expr(n, depth - 1), expr(n, depth - 1));
      case 6: return Expr::binary(Expr::Kind::mul, expr(n, depth - 1), expr(n, depth - 1));
      case 7: return Expr::negate(expr(n, depth - 1));
      default: return Expr::power(expr(n, depth - 1), static_cast<int>(pick(4)));
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace germ::test
