#pragma once

// Periodic-orbit censuses of polynomial self-maps inside a ball, and the
// random perturbation experiments that split a degenerate fixed point into
// simple periodic orbits.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "germ/jet.hpp"

namespace germ {

struct OrbitRecord {
  Eigen::VectorXcd point;
  long long period = 1;
  std::vector<Eigen::VectorXcd> orbit;
  // Eigenvalues of D(f^period) at the point.
  std::vector<Complex> multipliers;
  bool simple = true;
  bool hyperbolic = true;
};

struct CensusRow {
  long long divisor = 1;
  // Fixed points of f^divisor found by a search of their own.
  long long direct = 0;
  // Σ over m | divisor of the point counts of exact period m.
  long long from_periods = 0;
};

struct OrbitCensus {
  double radius = 0.0;
  long long period = 1;
  // One record per fixed point of f^period, sorted lexicographically.
  std::vector<OrbitRecord> records;
  // Number of points of exact period m, for every m | period.
  std::map<long long, long long> counts;
  std::vector<CensusRow> table;
  bool consistent = false;
  bool all_simple = false;
  // Each point of period m is fixed by f^d exactly when m | d, and its
  // orbit points share the period.
  bool period_rules_hold = false;
};

struct FinderOptions {
  int random_starts = 1500;
  int rays = 16;
  int max_iterations = 80;
  double boundary_fraction = 0.05;
  double dedup_fraction = 1e-7;
  double orbit_fraction = 1e-8;
  int boundary_samples = 256;
  double boundary_margin = 1e-10;
  // Points closer than this fraction of ρ with a near-singular Jacobian are
  // one degenerate fixed point.
  double cluster_fraction = 1e-3;
  std::uint64_t seed = 0x3c6ef372fe94f82bULL;
};

// Fixed points of f^power in the open ball of radius ρ. Throws region when a
// fixed point lies within the boundary band or the sampled boundary
// residual falls below the margin.
std::vector<Eigen::VectorXcd> fixed_points(const MapGerm& f, long long power, double radius,
                                           const FinderOptions& options = {});

// Least divisor L of `period` with |f^L(p) - p| <= tolerance, divisors
// tested in ascending order.
long long minimal_period(const MapGerm& f, const Eigen::VectorXcd& point, long long period,
                         double tolerance = 1e-10);

// Throws incomplete_census when the per-divisor searches and the period
// classification disagree even after a search with four times the budget.
OrbitCensus find_periodic(const MapGerm& f, double radius, long long period,
                          const FinderOptions& options = {});

enum class PerturbationMode {
  // Complex Gaussian shift of every linear coefficient (size ε) and every
  // quadratic coefficient (size ε²).
  generic,
  // Shift only the diagonal entries whose eigenvalue is not a root of
  // unity; requires a diagonal linear part.
  preserve_unity,
};

MapGerm random_perturbation(const MapGerm& f, double epsilon, PerturbationMode mode, std::mt19937_64& rng);

struct PerturbationOptions {
  double epsilon = 1e-3;
  int trials = 5;
  PerturbationMode mode = PerturbationMode::generic;
  double radius = 0.3;
  int max_resamples = 20;
  std::uint64_t seed = 0x510e527fade682d1ULL;
  FinderOptions finder;
};

struct PerturbationTrial {
  MapGerm map;
  OrbitCensus census;
  long long count = 0;  // points of exact period M
  int resamples = 0;
};

struct PerturbationResult {
  long long period = 1;
  std::vector<PerturbationTrial> trials;
  long long modal = 0;
  bool stable = false;
};

// Throws heuristic_failure when no perturbation with only simple fixed
// points of f^M is found within the resample budget.
PerturbationResult perturb_and_count(const MapGerm& f, long long period, const PerturbationOptions& options = {});

}  // namespace germ
