#include "germ/dold.hpp"

#include <algorithm>
#include <cmath>

#include "germ/error.hpp"
#include "germ/newton.hpp"
#include "germ/spectrum.hpp"

namespace germ {

namespace {

struct IterateCache {
  const MapGerm& f;
  const DoldOptions& options;
  Spectrum spectrum;
  std::map<long long, IndexReport> reports;

  IterateCache(const MapGerm& map, const DoldOptions& opts) : f(map), options(opts), spectrum(spectrum_of(map)) {}

  long long power_for(long long d) const {
    if (!options.use_shub_sullivan) return d;
    return reduced_power(spectrum, d);
  }

  const IndexReport& get(long long power) {
    auto it = reports.find(power);
    if (it != reports.end()) return it->second;
    IndexOptions opts = options.index;
    opts.radius = options.radius / static_cast<double>(power);
    return reports.emplace(power, iterate_index(f, power, opts)).first->second;
  }
};

[[noreturn]] void rethrow_for_divisor(const Error& e, long long divisor) {
  throw Error(e.code(), "divisor " + std::to_string(divisor) + ": " + e.what());
}

long long signed_sum(const std::vector<DivisorIndex>& terms) {
  long long total = 0;
  for (const auto& t : terms) total += t.sign * t.index;
  return total;
}

// Zero order of y ↦ (p + y) - f^power(p + y) near y = 0.
long long index_at(const MapGerm& f, long long power, const Eigen::VectorXcd& p, double radius,
                   const DoldOptions& options) {
  if (p.norm() <= 1e-12) {
    IndexOptions opts = options.index;
    opts.radius = radius;
    return iterate_index(f, power, opts).value;
  }
  const PointMap base = fixed_point_residual(f, power);
  const PointMap shifted = [base, p](const Eigen::VectorXcd& y, Eigen::VectorXcd& value, Eigen::MatrixXcd& jac) {
    base(p + y, value, jac);
  };
  NumericalBudget budget = options.index.budget;
  budget.lowest_degree = std::max(budget.lowest_degree, 2);
  return zero_order_numerical(shifted, static_cast<std::size_t>(p.size()), radius, budget).value;
}

}  // namespace

DoldReport dold_local(const MapGerm& f, long long period, const DoldOptions& options) {
  if (period < 1) throw Error(ErrorCode::structural, "period must be positive");
  DoldReport report;
  report.period = period;
  report.mode = DoldMode::local;
  report.plan = dold_plan(period);
  IterateCache cache(f, options);
  for (const auto& w : report.plan.weights) {
    DivisorIndex term;
    term.divisor = w.divisor;
    term.sign = w.sign;
    term.computed_power = cache.power_for(w.divisor);
    try {
      const IndexReport& r = cache.get(term.computed_power);
      term.index = r.value;
      term.method = std::string(to_string(r.method));
    } catch (const Error& e) {
      rethrow_for_divisor(e, w.divisor);
    }
    report.terms.push_back(std::move(term));
  }
  report.value = signed_sum(report.terms);
  report.fault = report.value < 0;
  return report;
}

DoldReport dold_global(const MapGerm& f, double radius, long long period, const DoldOptions& options) {
  if (period < 1) throw Error(ErrorCode::structural, "period must be positive");
  DoldReport report;
  report.period = period;
  report.mode = DoldMode::global;
  report.plan = dold_plan(period);
  const PolynomialMap poly(f);
  for (const auto& w : report.plan.weights) {
    DivisorIndex term;
    term.divisor = w.divisor;
    term.sign = w.sign;
    term.computed_power = w.divisor;
    term.method = "census";
    try {
      const auto points = fixed_points(f, w.divisor, radius, options.finder);
      for (std::size_t k = 0; k < points.size(); ++k) {
        Eigen::VectorXcd image;
        Eigen::MatrixXcd jac;
        poly.iterate(points[k], w.divisor, image, jac);
        const Eigen::MatrixXcd residual_jac = Eigen::MatrixXcd::Identity(jac.rows(), jac.cols()) - jac;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(residual_jac);
        const auto& sv = svd.singularValues();
        if (sv[sv.size() - 1] > kUnityTolerance * std::max(1.0, sv[0])) {
          term.index += 1;
          continue;
        }
        double local = 0.1 * radius;
        for (std::size_t j = 0; j < points.size(); ++j) {
          if (j != k) local = std::min(local, 0.5 * (points[j] - points[k]).norm());
        }
        local = std::min(local, radius - points[k].norm());
        term.index += index_at(f, w.divisor, points[k], local, options);
        term.method = "index_summation";
      }
    } catch (const Error& e) {
      rethrow_for_divisor(e, w.divisor);
    }
    report.terms.push_back(std::move(term));
  }
  report.value = signed_sum(report.terms);
  return report;
}

std::optional<long long> shub_sullivan_reduce(const MapGerm& f, long long m, const IndexOptions& options) {
  if (m < 1) throw Error(ErrorCode::structural, "power must be positive");
  if (!shub_sullivan_applicable(spectrum_of(f), m)) return std::nullopt;
  return fixed_point_index(f, options).value;
}

ConsistencyReport consistency_check(const MapGerm& f, long long period, const DoldOptions& options) {
  ConsistencyReport report;
  report.period = period;
  const Spectrum s = spectrum_of(f);
  const auto linear = linear_period_set(s, period);
  for (long long m : divisors(period)) {
    const DoldReport d = dold_local(f, m, options);
    report.dold[m] = d.value;
    if (m == period) report.iterate_index = d.terms.front().index;
    if (linear.count(m)) {
      report.linear_periods.push_back(m);
      report.sum_over_linear_periods += d.value;
    } else if (d.value != 0) {
      report.nonzero_outside.push_back(m);
    }
  }
  report.holds = report.nonzero_outside.empty() && report.iterate_index == report.sum_over_linear_periods;
  return report;
}

TheoremVerdict theorem_1_verdict(const MapGerm& f, long long period, const DoldOptions& options) {
  TheoremVerdict verdict;
  verdict.period = period;
  verdict.predicted = linear_period_set(spectrum_of(f), period).count(period) > 0;
  verdict.computed = dold_local(f, period, options).value;
  verdict.agree = verdict.predicted == (verdict.computed > 0);
  return verdict;
}

}  // namespace germ
