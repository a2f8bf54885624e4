#pragma once

// Multi-start Newton for square holomorphic systems g(x) = target inside a
// ball, shared by the zero-order counter and the periodic-orbit finder.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "germ/jet.hpp"

namespace germ {

// Writes g(x) and Dg(x).
using PointMap =
    std::function<void(const Eigen::VectorXcd& x, Eigen::VectorXcd& value, Eigen::MatrixXcd& jacobian)>;

PointMap as_point_map(const MapGerm& g);
// x ↦ x - f^power(x), evaluated by iterating the polynomial f.
PointMap fixed_point_residual(const MapGerm& f, long long power);

struct NewtonSettings {
  int max_iterations = 80;
  // Iterates leaving this radius are abandoned.
  double escape_radius = 1.0;
  // Accept when |g(x) - target| <= residual_tolerance + relative_tolerance·|x|.
  // The relative part absorbs rounding in long iterated evaluations.
  double residual_tolerance = 1e-12;
  double relative_tolerance = 0.0;
  // Halvings of a step that does not decrease the residual.
  int max_halvings = 8;
};

std::optional<Eigen::VectorXcd> newton_solve(const PointMap& g, const Eigen::VectorXcd& target,
                                             Eigen::VectorXcd x, const NewtonSettings& settings);

struct StartPlan {
  int random_starts = 400;
  int rays = 16;
};

// Uniform-in-ball points, log-uniform radii down to 1e-4 ρ, points with
// log-uniform scale per coordinate, and points on fixed rays at geometric
// radii.
std::vector<Eigen::VectorXcd> sample_starts(std::size_t dimension, double radius, const StartPlan& plan,
                                            std::mt19937_64& rng);

Eigen::VectorXcd random_direction(std::size_t dimension, std::mt19937_64& rng);

// Sorts lexicographically by (re, im) of each coordinate, then merges points
// closer than `separation`. Output order is deterministic.
std::vector<Eigen::VectorXcd> deduplicate(std::vector<Eigen::VectorXcd> points, double separation);

double condition_number(const Eigen::MatrixXcd& m);

struct RootSearch {
  StartPlan plan;
  NewtonSettings settings;
  // Roots closer than this are merged.
  double separation = 0.0;
  // Roots with |x| above this are discarded.
  double keep_radius = 1.0;
  // Restarts per found root with its coordinate moduli kept and phases
  // resampled; preimages tend to come in such families.
  int phase_restarts = 24;
  int phase_rounds = 4;
  std::size_t max_roots = 512;
};

// All solutions of g(x) = target reachable from the start plan in the ball
// of radius `radius`, deduplicated and sorted lexicographically.
std::vector<Eigen::VectorXcd> find_roots(const PointMap& g, const Eigen::VectorXcd& target,
                                         std::size_t dimension, double radius, const RootSearch& search,
                                         std::mt19937_64& rng);

}  // namespace germ
