#include "germ/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "germ/divisors.hpp"
#include "germ/error.hpp"
#include "germ/newton.hpp"
#include "germ/spectrum.hpp"

namespace germ {

namespace {

Complex complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  return {normal(rng), normal(rng)};
}

std::vector<Complex> eigenvalues_of(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  std::vector<Complex> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

bool has_unit_eigenvalue(const std::vector<Complex>& values) {
  return std::any_of(values.begin(), values.end(),
                     [](Complex l) { return std::abs(l - Complex(1.0)) <= kUnityTolerance; });
}

std::vector<Eigen::VectorXcd> search_fixed(const PolynomialMap& poly, const MapGerm& f, long long power,
                                           double radius, const FinderOptions& options, int start_factor) {
  const PointMap g = fixed_point_residual(f, power);
  RootSearch search;
  search.plan.random_starts = options.random_starts * start_factor;
  search.plan.rays = options.rays;
  search.settings.max_iterations = options.max_iterations;
  search.settings.escape_radius = 2.0 * radius;
  search.settings.residual_tolerance = 1e-12 * radius;
  search.separation = options.dedup_fraction * radius;
  const double band = options.boundary_fraction * radius;
  search.keep_radius = radius + band;

  std::mt19937_64 rng(options.seed ^ static_cast<std::uint64_t>(power * 0x9e3779b97f4a7c15ULL));
  std::vector<Eigen::VectorXcd> roots = find_roots(g, Eigen::VectorXcd::Zero(f.dimension()),
                                                   f.dimension(), radius, search, rng);

  for (const auto& x : roots) {
    if (x.norm() > radius - band) {
      std::ostringstream msg;
      msg << "fixed point of f^" << power << " at distance " << x.norm() << " lies within the boundary band of the radius "
          << radius << " ball";
      throw Error(ErrorCode::region, msg.str());
    }
  }
  for (int s = 0; s < options.boundary_samples; ++s) {
    const Eigen::VectorXcd x = radius * random_direction(f.dimension(), rng);
    if ((x - poly.iterate(x, power)).norm() <= options.boundary_margin) {
      throw Error(ErrorCode::region, "f^" + std::to_string(power) + " nearly fixes a boundary point");
    }
  }

  // Newton converges slowly to a multiple fixed point and leaves a cloud of
  // nearby approximations that pass the residual test (near a high-order
  // fixed point x - f^M(x) even rounds to zero); collapse each cloud to its
  // point of least residual.
  const double cluster = options.cluster_fraction * radius;
  std::vector<Eigen::VectorXcd> kept;
  std::vector<double> kept_residual;
  std::vector<bool> degenerate_kept;
  for (auto& x : roots) {
    Eigen::VectorXcd value;
    Eigen::MatrixXcd jac;
    g(x, value, jac);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
    const auto& sv = svd.singularValues();
    const double step = jac.fullPivLu().solve(value).norm();
    const bool degenerate =
        sv[sv.size() - 1] < 1e-8 || sv[sv.size() - 1] < 1e-8 * sv[0] || !(step <= 1e-6 * x.norm());
    const double residual = value.norm();
    bool merged = false;
    if (degenerate) {
      for (std::size_t k = 0; k < kept.size(); ++k) {
        if (degenerate_kept[k] && (kept[k] - x).norm() <= cluster) {
          if (residual < kept_residual[k]) {
            kept[k] = x;
            kept_residual[k] = residual;
          }
          merged = true;
          break;
        }
      }
    }
    if (!merged) {
      kept.push_back(std::move(x));
      kept_residual.push_back(residual);
      degenerate_kept.push_back(degenerate);
    }
  }
  // The origin is always fixed; a cloud around it stands for the origin.
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (degenerate_kept[k] && kept[k].norm() <= cluster) kept[k].setZero();
  }
  return deduplicate(std::move(kept), search.separation);
}

struct Completed {
  std::vector<OrbitRecord> records;
  long long raw_count = 0;
};

Completed classify(const MapGerm& f, const PolynomialMap& poly, long long period, double radius,
                   const FinderOptions& options, int start_factor) {
  std::vector<Eigen::VectorXcd> points = search_fixed(poly, f, period, radius, options, start_factor);
  Completed out;
  out.raw_count = static_cast<long long>(points.size());
  const double tolerance = std::max(options.orbit_fraction * radius, 1e-14);
  const double band = options.boundary_fraction * radius;

  // Orbit completion: every point on the orbit of a fixed point of f^M that
  // stays in the ball is itself a fixed point of f^M.
  std::vector<Eigen::VectorXcd> all = points;
  for (const auto& p : points) {
    const long long l = minimal_period(f, p, period, tolerance);
    Eigen::VectorXcd x = p;
    for (long long k = 1; k < l; ++k) {
      x = poly.iterate(x, 1);
      if (x.norm() < radius - band) {
        all.push_back(x);
      } else if (x.norm() <= radius + band) {
        throw Error(ErrorCode::region, "periodic orbit crosses the boundary band");
      }
    }
  }
  all = deduplicate(std::move(all), options.dedup_fraction * radius);

  for (const auto& p : all) {
    OrbitRecord rec;
    rec.point = p;
    rec.period = minimal_period(f, p, period, tolerance);
    Eigen::VectorXcd x = p;
    for (long long k = 0; k < rec.period; ++k) {
      rec.orbit.push_back(x);
      x = poly.iterate(x, 1);
    }
    Eigen::VectorXcd image;
    Eigen::MatrixXcd jac;
    poly.iterate(p, rec.period, image, jac);
    rec.multipliers = eigenvalues_of(jac);
    std::vector<Complex> full_power;
    for (Complex m : rec.multipliers) full_power.push_back(std::pow(m, static_cast<double>(period / rec.period)));
    rec.simple = !has_unit_eigenvalue(full_power);
    rec.hyperbolic = std::none_of(rec.multipliers.begin(), rec.multipliers.end(),
                                  [](Complex m) { return std::abs(std::abs(m) - 1.0) <= kUnityTolerance; });
    out.records.push_back(std::move(rec));
  }
  return out;
}

bool check_period_rules(const MapGerm& f, const PolynomialMap& poly, const std::vector<OrbitRecord>& records,
                        long long period, double tolerance) {
  const auto divs = divisors(period);
  for (const auto& rec : records) {
    for (long long d : divs) {
      const bool fixed = (poly.iterate(rec.point, d) - rec.point).norm() <= tolerance;
      if (fixed != (d % rec.period == 0)) return false;
    }
    for (const auto& x : rec.orbit) {
      if (minimal_period(f, x, period, tolerance) != rec.period) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Eigen::VectorXcd> fixed_points(const MapGerm& f, long long power, double radius,
                                           const FinderOptions& options) {
  if (power < 1) throw Error(ErrorCode::structural, "power must be positive");
  if (!(radius > 0.0)) throw Error(ErrorCode::region, "radius must be positive");
  return search_fixed(PolynomialMap(f), f, power, radius, options, 1);
}

long long minimal_period(const MapGerm& f, const Eigen::VectorXcd& point, long long period, double tolerance) {
  if (period < 1) throw Error(ErrorCode::structural, "period must be positive");
  const PolynomialMap poly(f);
  for (long long d : divisors(period)) {
    if ((poly.iterate(point, d) - point).norm() <= tolerance) return d;
  }
  return period;
}

OrbitCensus find_periodic(const MapGerm& f, double radius, long long period, const FinderOptions& options) {
  if (period < 1) throw Error(ErrorCode::structural, "period must be positive");
  if (!(radius > 0.0)) throw Error(ErrorCode::region, "radius must be positive");
  const PolynomialMap poly(f);
  const auto divs = divisors(period);
  const double tolerance = std::max(options.orbit_fraction * radius, 1e-14);

  OrbitCensus census;
  census.radius = radius;
  census.period = period;
  for (int factor : {1, 4}) {
    Completed completed = classify(f, poly, period, radius, options, factor);
    census.records = std::move(completed.records);
    census.counts.clear();
    for (long long d : divs) census.counts[d] = 0;
    for (const auto& rec : census.records) ++census.counts[rec.period];

    census.table.clear();
    census.consistent = true;
    for (long long d : divs) {
      CensusRow row;
      row.divisor = d;
      row.direct = d == period ? completed.raw_count
                               : static_cast<long long>(search_fixed(poly, f, d, radius, options, factor).size());
      for (const auto& [m, c] : census.counts) {
        if (d % m == 0) row.from_periods += c;
      }
      census.consistent = census.consistent && row.direct == row.from_periods;
      census.table.push_back(row);
    }
    if (census.consistent) break;
  }
  if (!census.consistent) {
    std::ostringstream msg;
    msg << "census inconsistent for period " << period << ":";
    for (const auto& row : census.table) msg << " L(f^" << row.divisor << ")=" << row.direct << " vs " << row.from_periods;
    throw Error(ErrorCode::incomplete_census, msg.str());
  }
  census.all_simple = std::all_of(census.records.begin(), census.records.end(),
                                  [](const OrbitRecord& r) { return r.simple; });
  census.period_rules_hold = check_period_rules(f, poly, census.records, period, tolerance);
  return census;
}

MapGerm random_perturbation(const MapGerm& f, double epsilon, PerturbationMode mode, std::mt19937_64& rng) {
  const std::size_t n = f.dimension();
  std::vector<Jet> components = f.with_degree(std::max(2, f.degree())).components();
  if (mode == PerturbationMode::generic) {
    for (auto& c : components) {
      for (std::size_t k = 0; k < n; ++k) c.add_term(Multidegree::unit(n, k), epsilon * complex_gaussian(rng));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
          c.add_term(Multidegree::unit(n, a) + Multidegree::unit(n, b), epsilon * epsilon * complex_gaussian(rng));
        }
      }
    }
    return MapGerm(std::move(components));
  }
  const Spectrum s = spectrum_of(f);
  if (!s.diagonal) throw Error(ErrorCode::non_diagonal, "unity-preserving perturbation needs a diagonal linear part");
  for (std::size_t j = 0; j < n; ++j) {
    if (!s.unity_orders[j]) components[j].add_term(Multidegree::unit(n, j), epsilon * complex_gaussian(rng));
  }
  return MapGerm(std::move(components));
}

PerturbationResult perturb_and_count(const MapGerm& f, long long period, const PerturbationOptions& options) {
  if (options.trials < 1) throw Error(ErrorCode::usage, "at least one trial is required");
  std::mt19937_64 rng(options.seed);
  PerturbationResult result;
  result.period = period;
  for (int t = 0; t < options.trials; ++t) {
    bool done = false;
    std::string last_reason = "no attempt";
    for (int attempt = 0; attempt <= options.max_resamples && !done; ++attempt) {
      MapGerm g = random_perturbation(f, options.epsilon, options.mode, rng);
      FinderOptions finder = options.finder;
      finder.seed = rng();
      try {
        OrbitCensus census = find_periodic(g, options.radius, period, finder);
        if (!census.all_simple) {
          last_reason = "a fixed point of the perturbed iterate is not simple";
          continue;
        }
        const long long count = census.counts[period];
        result.trials.push_back(PerturbationTrial{std::move(g), std::move(census), count, attempt});
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::region && e.code() != ErrorCode::incomplete_census) throw;
        last_reason = e.what();
      }
    }
    if (!done) {
      throw Error(ErrorCode::heuristic_failure, "trial " + std::to_string(t + 1) + ": no usable perturbation in " +
                                                    std::to_string(options.max_resamples + 1) +
                                                    " samples (" + last_reason + ")");
    }
  }
  std::map<long long, int> tally;
  for (const auto& trial : result.trials) ++tally[trial.count];
  int best = 0;
  for (const auto& [count, times] : tally) {
    if (times > best) {
      best = times;
      result.modal = count;
    }
  }
  result.stable = tally.size() == 1;
  return result;
}

}  // namespace germ
