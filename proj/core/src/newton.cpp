#include "germ/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace germ {

PointMap as_point_map(const MapGerm& g) {
  return [poly = PolynomialMap(g)](const Eigen::VectorXcd& x, Eigen::VectorXcd& value,
                                   Eigen::MatrixXcd& jacobian) { poly.evaluate(x, value, jacobian); };
}

PointMap fixed_point_residual(const MapGerm& f, long long power) {
  return [poly = PolynomialMap(f), power](const Eigen::VectorXcd& x, Eigen::VectorXcd& value,
                                          Eigen::MatrixXcd& jacobian) {
    Eigen::VectorXcd image;
    Eigen::MatrixXcd d_image;
    poly.iterate(x, power, image, d_image);
    value = x - image;
    jacobian = Eigen::MatrixXcd::Identity(x.size(), x.size()) - d_image;
  };
}

std::optional<Eigen::VectorXcd> newton_solve(const PointMap& g, const Eigen::VectorXcd& target,
                                             Eigen::VectorXcd x, const NewtonSettings& settings) {
  Eigen::VectorXcd value;
  Eigen::MatrixXcd jac;
  g(x, value, jac);
  Eigen::VectorXcd residual = value - target;
  double norm = residual.norm();

  for (int it = 0; it < settings.max_iterations; ++it) {
    if (!std::isfinite(norm)) return std::nullopt;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
    const Eigen::VectorXcd step = lu.solve(residual);
    if (!step.allFinite()) return std::nullopt;

    // Backtrack on the residual norm; keep the full step when nothing
    // improves so Newton can still cross a ridge.
    double t = 1.0;
    Eigen::VectorXcd trial = x - step;
    Eigen::VectorXcd trial_value;
    Eigen::MatrixXcd trial_jac;
    g(trial, trial_value, trial_jac);
    double trial_norm = (trial_value - target).norm();
    for (int halving = 0; halving < settings.max_halvings && !(trial_norm < norm); ++halving) {
      t *= 0.5;
      Eigen::VectorXcd candidate = x - t * step;
      Eigen::VectorXcd cv;
      Eigen::MatrixXcd cj;
      g(candidate, cv, cj);
      const double cn = (cv - target).norm();
      if (cn < trial_norm) {
        trial = std::move(candidate);
        trial_value = std::move(cv);
        trial_jac = std::move(cj);
        trial_norm = cn;
      }
    }

    const double moved = (trial - x).norm();
    x = std::move(trial);
    jac = std::move(trial_jac);
    residual = trial_value - target;
    norm = trial_norm;
    if (!x.allFinite() || x.norm() > settings.escape_radius) return std::nullopt;
    if (norm <= settings.residual_tolerance + settings.relative_tolerance * x.norm() &&
        moved <= 1e-10 * x.norm() + std::numeric_limits<double>::min()) {
      break;
    }
  }
  if (!(norm <= settings.residual_tolerance + settings.relative_tolerance * x.norm())) return std::nullopt;
  return x;
}

Eigen::VectorXcd random_direction(std::size_t dimension, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dimension));
  do {
    for (auto& c : v) c = Complex(normal(rng), normal(rng));
  } while (v.norm() == 0.0);
  return v / v.norm();
}

std::vector<Eigen::VectorXcd> sample_starts(std::size_t dimension, double radius, const StartPlan& plan,
                                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXcd> starts;
  const double real_dim = 2.0 * static_cast<double>(dimension);
  for (int i = 0; i < plan.random_starts; ++i) {
    if (i % 3 == 2) {
      // Independent log-uniform scale per coordinate, for zeros whose
      // coordinates live on very different scales.
      Eigen::VectorXcd x(static_cast<Eigen::Index>(dimension));
      for (auto& c : x) {
        c = std::polar(radius * std::pow(10.0, -6.0 * unit(rng)), 2.0 * std::numbers::pi * unit(rng));
      }
      if (x.norm() > radius) x *= radius / x.norm();
      starts.push_back(std::move(x));
      continue;
    }
    const Eigen::VectorXcd dir = random_direction(dimension, rng);
    const double r = (i % 3 == 0) ? radius * std::pow(unit(rng), 1.0 / real_dim)
                                  : radius * std::pow(10.0, -4.0 * unit(rng));
    starts.push_back(r * dir);
  }
  for (int k = 0; k < plan.rays; ++k) {
    const Eigen::VectorXcd dir = random_direction(dimension, rng);
    for (double scale : {0.5, 0.1, 0.02, 0.004}) starts.push_back(scale * radius * dir);
  }
  return starts;
}

std::vector<Eigen::VectorXcd> deduplicate(std::vector<Eigen::VectorXcd> points, double separation) {
  auto lex_less = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
      if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
    }
    return false;
  };
  std::sort(points.begin(), points.end(), lex_less);
  std::vector<Eigen::VectorXcd> unique;
  for (auto& p : points) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Eigen::VectorXcd& q) {
      return (p - q).norm() <= separation;
    });
    if (!seen) unique.push_back(std::move(p));
  }
  return unique;
}

double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double smallest = sv[sv.size() - 1];
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smallest;
}

std::vector<Eigen::VectorXcd> find_roots(const PointMap& g, const Eigen::VectorXcd& target,
                                         std::size_t dimension, double radius, const RootSearch& search,
                                         std::mt19937_64& rng) {
  std::vector<Eigen::VectorXcd> found;
  auto run = [&](const Eigen::VectorXcd& start) {
    if (auto root = newton_solve(g, target, start, search.settings)) {
      if (root->norm() <= search.keep_radius) found.push_back(std::move(*root));
    }
  };
  for (const auto& start : sample_starts(dimension, radius, search.plan, rng)) run(start);
  std::vector<Eigen::VectorXcd> roots = deduplicate(std::move(found), search.separation);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; round < search.phase_rounds && roots.size() <= search.max_roots; ++round) {
    const std::size_t before = roots.size();
    found = roots;
    for (std::size_t r = 0; r < before; ++r) {
      for (int k = 0; k < search.phase_restarts; ++k) {
        Eigen::VectorXcd start = roots[r];
        for (auto& c : start) {
          c = std::polar(std::abs(c) * (0.8 + 0.4 * unit(rng)), 2.0 * std::numbers::pi * unit(rng));
        }
        run(start);
      }
    }
    roots = deduplicate(std::move(found), search.separation);
    if (roots.size() == before) break;
  }
  return roots;
}

}  // namespace germ
