#include "germ/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "germ/error.hpp"
#include "germ/spectrum.hpp"

namespace germ {

std::string_view to_string(IndexMethod method) {
  switch (method) {
    case IndexMethod::cronin: return "cronin";
    case IndexMethod::composite_product: return "composite_product";
    case IndexMethod::numerical_degree: return "numerical_degree";
  }
  return "unknown";
}

namespace {

// Homogeneous lowest forms with their gradients, normalized by the largest
// coefficient so residuals are comparable across components.
struct FormSystem {
  std::size_t n = 0;
  std::vector<Jet> forms;
  std::vector<std::vector<Jet>> gradients;
  std::vector<int> degrees;
  std::vector<double> scale;

  explicit FormSystem(const std::vector<LowestForm>& lowest) {
    n = lowest.size();
    for (const auto& lf : lowest) {
      double biggest = 0.0;
      for (const auto& [e, c] : lf.form.terms()) biggest = std::max(biggest, std::abs(c));
      forms.push_back(lf.form);
      degrees.push_back(lf.degree);
      scale.push_back(biggest);
      std::vector<Jet> grad;
      for (std::size_t k = 0; k < n; ++k) grad.push_back(lf.form.derivative(k));
      gradients.push_back(std::move(grad));
    }
  }

  void evaluate(const Eigen::VectorXcd& v, Eigen::VectorXcd& r, Eigen::MatrixXcd& jac) const {
    const auto n_idx = static_cast<Eigen::Index>(n);
    r.resize(n_idx);
    jac.resize(n_idx, n_idx);
    const std::span<const Complex> point(v.data(), n);
    for (std::size_t j = 0; j < n; ++j) {
      r[j] = forms[j].evaluate(point) / scale[j];
      for (std::size_t k = 0; k < n; ++k) jac(j, k) = gradients[j][k].evaluate(point) / scale[j];
    }
  }

  // max_j |P_j(v)| / (scale_j |v|^{deg_j}); invariant under v ↦ tv.
  double relative_residual(const Eigen::VectorXcd& v) const {
    const double norm = v.norm();
    const std::span<const Complex> point(v.data(), n);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(forms[j].evaluate(point)) / (scale[j] * std::pow(norm, degrees[j])));
    }
    return worst;
  }
};

constexpr double kCommonZeroTolerance = 1e-8;

// Levenberg-Marquardt on the chart v_chart = 1. Returns the smallest
// relative residual reached.
double chart_search(const FormSystem& sys, std::size_t chart, Eigen::VectorXcd v) {
  const auto n = static_cast<Eigen::Index>(sys.n);
  Eigen::VectorXcd r;
  Eigen::MatrixXcd full;
  auto reduced = [&](const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd out(n, n - 1);
    for (Eigen::Index k = 0, c = 0; k < n; ++k) {
      if (static_cast<std::size_t>(k) == chart) continue;
      out.col(c++) = m.col(k);
    }
    return out;
  };
  sys.evaluate(v, r, full);
  double cost = r.squaredNorm();
  double damping = 1e-3;
  double best = sys.relative_residual(v);
  for (int it = 0; it < 300 && best > kCommonZeroTolerance; ++it) {
    const Eigen::MatrixXcd jac = reduced(full);
    const Eigen::MatrixXcd normal = jac.adjoint() * jac;
    Eigen::MatrixXcd lhs = normal;
    const double diag_scale = std::max(normal.diagonal().real().maxCoeff(), 1e-300);
    lhs.diagonal().array() += damping * diag_scale;
    const Eigen::VectorXcd step = lhs.ldlt().solve(-(jac.adjoint() * r));
    if (!step.allFinite()) break;
    Eigen::VectorXcd trial = v;
    for (Eigen::Index k = 0, c = 0; k < n; ++k) {
      if (static_cast<std::size_t>(k) == chart) continue;
      trial[k] += step[c++];
    }
    Eigen::VectorXcd tr;
    Eigen::MatrixXcd tj;
    sys.evaluate(trial, tr, tj);
    const double trial_cost = tr.squaredNorm();
    if (trial_cost < cost) {
      v = std::move(trial);
      r = std::move(tr);
      full = std::move(tj);
      cost = trial_cost;
      damping = std::max(damping * 0.3, 1e-12);
      best = std::min(best, sys.relative_residual(v));
    } else {
      damping *= 10.0;
      if (damping > 1e12) break;
    }
  }
  return best;
}

int checked_product(const std::vector<int>& factors) {
  long long product = 1;
  for (int f : factors) {
    product *= f;
    if (product > std::numeric_limits<int>::max()) throw Error(ErrorCode::structural, "zero order overflows int");
  }
  return static_cast<int>(product);
}

std::vector<int> degrees_of(const std::vector<LowestForm>& forms) {
  std::vector<int> out;
  for (const auto& lf : forms) out.push_back(lf.degree);
  return out;
}

bool has_zero_component(const MapGerm& g) {
  return std::any_of(g.components().begin(), g.components().end(), [](const Jet& j) { return j.is_zero(); });
}

// Degree that sets the regular-value scale: the largest lowest degree, raised
// to the smallest pure power x_k^d present for any coordinate, since
// preimages along a slow axis scale like |q|^{1/d}.
int scale_degree(const MapGerm& g) {
  int degree = 1;
  for (const Jet& c : g.components()) {
    if (auto low = c.lowest_degree()) degree = std::max(degree, *low);
  }
  for (std::size_t k = 0; k < g.dimension(); ++k) {
    int axis = std::numeric_limits<int>::max();
    for (const Jet& c : g.components()) {
      for (const auto& [e, coeff] : c.terms()) {
        if (e[k] == e.total() && e.total() > 0) axis = std::min(axis, e.total());
      }
    }
    if (axis != std::numeric_limits<int>::max()) degree = std::max(degree, axis);
  }
  return degree;
}

int next_degree(int d, int cap) { return std::min(cap, d + d / 2 + 1); }

struct RootSet {
  std::vector<Eigen::VectorXcd> roots;
  bool leaked = false;
};

RootSet solve_inside(const PointMap& g, std::size_t dimension, double radius, const Eigen::VectorXcd& q,
                     const StartPlan& plan, int max_iterations, std::mt19937_64& rng) {
  RootSearch search;
  search.plan = plan;
  search.settings.max_iterations = max_iterations;
  search.settings.escape_radius = 4.0 * radius;
  search.settings.residual_tolerance = 1e-6 * q.norm();
  search.settings.max_halvings = 2;
  search.separation = 1e-7 * radius;
  search.keep_radius = radius;
  const double boundary = 0.05 * radius;

  RootSet out;
  out.roots = find_roots(g, q, dimension, radius, search, rng);
  out.leaked = std::any_of(out.roots.begin(), out.roots.end(),
                           [&](const Eigen::VectorXcd& x) { return x.norm() > radius - boundary; });
  return out;
}

}  // namespace

IsolationVerdict check_isolation(const std::vector<LowestForm>& forms, const CroninOptions& options) {
  const std::size_t n = forms.size();
  if (n == 0) return {false, "empty system"};
  const FormSystem sys(forms);
  std::mt19937_64 rng(options.seed);

  for (int line = 0; line < options.random_lines; ++line) {
    const Eigen::VectorXcd v = random_direction(n, rng);
    if (sys.relative_residual(v) <= 1e-10) return {false, "lowest forms vanish along a random line"};
  }
  if (n == 1) return {};

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t chart = 0; chart < n; ++chart) {
    for (int s = 0; s < options.projective_starts; ++s) {
      Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) {
        v[k] = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
      }
      v[chart] = 1.0;
      const double residual = chart_search(sys, chart, v);
      if (residual <= kCommonZeroTolerance) {
        return {false, "lowest forms share a nonzero common zero"};
      }
    }
  }
  return {};
}

IndexReport zero_order_cronin(const MapGerm& g, const CroninOptions& options) {
  const auto forms = lowest_forms(g);
  if (!options.assume_isolated) {
    const auto verdict = check_isolation(forms, options);
    if (!verdict.isolated) throw Error(ErrorCode::not_isolated, verdict.reason);
  }
  IndexReport report;
  report.method = IndexMethod::cronin;
  report.lowest_degrees = degrees_of(forms);
  report.value = checked_product(report.lowest_degrees);
  report.truncation_degree = g.degree();
  return report;
}

IndexReport zero_order_composite(const MapGerm& g, const std::vector<int>& exponents,
                                 const CroninOptions& options) {
  if (exponents.size() != g.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "substitution exponents do not match the dimension");
  }
  if (std::any_of(exponents.begin(), exponents.end(), [](int e) { return e < 1; })) {
    throw Error(ErrorCode::structural, "substitution exponents must be positive");
  }
  const MapGerm substituted = substitute_powers(g, exponents, g.degree());
  IndexReport inner = zero_order_cronin(substituted, options);
  const int denominator = checked_product(exponents);
  if (inner.value % denominator != 0) {
    throw Error(ErrorCode::instability, "substituted zero order " + std::to_string(inner.value) +
                                            " is not divisible by " + std::to_string(denominator));
  }
  inner.method = IndexMethod::composite_product;
  inner.value /= denominator;
  inner.substitution = exponents;
  return inner;
}

IndexReport zero_order_numerical(const PointMap& g, std::size_t dimension, double radius,
                                 const NumericalBudget& budget) {
  if (!(radius > 0.0)) throw Error(ErrorCode::region, "working radius must be positive");
  std::mt19937_64 rng(budget.seed);
  double magnitude = budget.regular_value_scale * std::pow(radius, std::max(1, budget.lowest_degree));
  StartPlan plan;
  plan.random_starts = std::max(budget.min_starts, budget.starts_per_order * std::max(1, budget.order_hint));
  plan.rays = budget.rays;

  for (int shrink = 0;; ++shrink) {
    const Eigen::VectorXcd q1 = magnitude * random_direction(dimension, rng);
    const Eigen::VectorXcd q2 = magnitude * random_direction(dimension, rng);
    RootSet first = solve_inside(g, dimension, radius, q1, plan, budget.max_iterations, rng);
    RootSet second = solve_inside(g, dimension, radius, q2, plan, budget.max_iterations, rng);
    if (first.roots.size() != second.roots.size() && !first.leaked && !second.leaked) {
      StartPlan wider = plan;
      wider.random_starts *= 4;
      first = solve_inside(g, dimension, radius, q1, wider, budget.max_iterations, rng);
      second = solve_inside(g, dimension, radius, q2, wider, budget.max_iterations, rng);
    }
    if (first.leaked || second.leaked) {
      if (shrink >= budget.max_shrinks) {
        throw Error(ErrorCode::leakage, "solutions keep reaching the boundary of the working ball");
      }
      magnitude *= budget.shrink_factor;
      continue;
    }
    // Under anisotropic growth some preimages of q can sit outside the ball
    // without coming near its boundary; they return as |q| shrinks. Every
    // root found is genuine, so errors only ever undercount: zero roots,
    // disagreeing counts or more roots at a tenth of |q| mean q is too large.
    bool settled = first.roots.size() == second.roots.size() && !first.roots.empty();
    if (settled) {
      const Eigen::VectorXcd q3 = 0.1 * magnitude * random_direction(dimension, rng);
      const RootSet third = solve_inside(g, dimension, radius, q3, plan, budget.max_iterations, rng);
      settled = !third.leaked && third.roots.size() <= first.roots.size();
    }
    if (!settled) {
      if (shrink >= budget.max_shrinks) {
        throw Error(ErrorCode::instability, "root counts differ between regular values: " +
                                                std::to_string(first.roots.size()) + " vs " +
                                                std::to_string(second.roots.size()));
      }
      magnitude *= budget.shrink_factor;
      continue;
    }
    IndexReport report;
    report.method = IndexMethod::numerical_degree;
    report.value = static_cast<int>(first.roots.size());
    report.regular_value = q1;
    report.ball_radius = radius;
    for (const auto& x : first.roots) {
      Eigen::VectorXcd value;
      Eigen::MatrixXcd jac;
      g(x, value, jac);
      report.witnesses.push_back({x, condition_number(jac)});
    }
    return report;
  }
}

IndexReport zero_order_numerical(const MapGerm& g, double radius, const NumericalBudget& budget) {
  NumericalBudget tuned = budget;
  tuned.lowest_degree = std::max(budget.lowest_degree, scale_degree(g));
  return zero_order_numerical(as_point_map(g), g.dimension(), radius, tuned);
}

IndexReport zero_order(const MapGerm& g, const IndexOptions& options) {
  switch (options.strategy) {
    case IndexStrategy::cronin: return zero_order_cronin(g, options.cronin);
    case IndexStrategy::numerical: return zero_order_numerical(g, options.radius, options.budget);
    case IndexStrategy::composite:
      throw Error(ErrorCode::usage, "the composite strategy applies to fixed-point indices of iterates");
    case IndexStrategy::automatic: break;
  }
  NumericalBudget budget = options.budget;
  try {
    const auto forms = lowest_forms(g);
    const auto degrees = degrees_of(forms);
    budget.order_hint = std::max(budget.order_hint, std::min(64, checked_product(degrees)));
    return zero_order_cronin(g, options.cronin);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_isolated && e.code() != ErrorCode::degenerate) throw;
  }
  IndexReport report = zero_order_numerical(g, options.radius, budget);
  report.truncation_degree = g.degree();
  return report;
}

std::vector<int> resonant_substitution(const MapGerm& f, long long power) {
  if (power < 1) throw Error(ErrorCode::structural, "power must be positive");
  const Spectrum s = spectrum_of(f);
  if (!s.diagonal) throw Error(ErrorCode::non_diagonal, "substitution needs a diagonal linear part");
  std::vector<int> exponents;
  for (const auto& order : s.unity_orders) {
    long long e = 1;
    if (order) e = (power % *order == 0) ? power / *order : power;
    if (e > 255) throw Error(ErrorCode::structural, "substitution exponent exceeds 255");
    exponents.push_back(static_cast<int>(e));
  }
  return exponents;
}

bool is_simple(const MapGerm& f) {
  const Spectrum s = spectrum_of(f);
  return std::none_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                      [](Complex l) { return std::abs(l - Complex(1.0)) <= kUnityTolerance; });
}

IndexReport iterate_index(const MapGerm& f, long long power, const IndexOptions& options) {
  if (power < 1) throw Error(ErrorCode::structural, "power must be positive");
  const int cap = std::max(options.max_degree, f.degree());

  auto residual_jet = [&](const MapGerm& map, int degree) {
    return identity_minus(iterate(map.with_degree(degree), power));
  };

  int degree = std::max(f.degree(), 2);
  MapGerm g = residual_jet(f, degree);
  while (has_zero_component(g) && degree < cap) {
    degree = next_degree(degree, cap);
    g = residual_jet(f, degree);
  }
  if (has_zero_component(g)) {
    throw Error(ErrorCode::not_isolated, "x - f^" + std::to_string(power) +
                                             "(x) has a component vanishing through degree " +
                                             std::to_string(degree));
  }
  const auto forms = lowest_forms(g);
  const auto degrees = degrees_of(forms);

  const bool try_cronin =
      options.strategy == IndexStrategy::automatic || options.strategy == IndexStrategy::cronin;
  const bool try_composite =
      options.strategy == IndexStrategy::automatic || options.strategy == IndexStrategy::composite;

  if (try_cronin) {
    try {
      return zero_order_cronin(g, options.cronin);
    } catch (const Error& e) {
      if (options.strategy == IndexStrategy::cronin || e.code() != ErrorCode::not_isolated) throw;
    }
  }

  if (try_composite) {
    try {
      const Spectrum s = spectrum_of(f);
      if (!s.diagonalizable) throw Error(ErrorCode::non_diagonal, "linear part is not diagonalizable");
      const MapGerm diagonal = s.diagonal ? f : conjugate_linear(f, s.eigenvectors);
      const auto exponents = resonant_substitution(diagonal, power);
      if (std::all_of(exponents.begin(), exponents.end(), [](int e) { return e == 1; })) {
        throw Error(ErrorCode::not_isolated, "no resonant block to separate");
      }
      const int widest = *std::max_element(exponents.begin(), exponents.end());
      int sub_degree = std::min(cap, std::max(degree, widest + static_cast<int>(std::min<long long>(power, cap))));
      MapGerm gd = residual_jet(diagonal, sub_degree);
      while (has_zero_component(substitute_powers(gd, exponents, sub_degree)) && sub_degree < cap) {
        sub_degree = next_degree(sub_degree, cap);
        gd = residual_jet(diagonal, sub_degree);
      }
      IndexReport report = zero_order_composite(gd, exponents, options.cronin);
      report.truncation_degree = sub_degree;
      return report;
    } catch (const Error& e) {
      if (options.strategy == IndexStrategy::composite) throw;
      if (e.code() != ErrorCode::not_isolated && e.code() != ErrorCode::non_diagonal &&
          e.code() != ErrorCode::degenerate) {
        throw;
      }
    }
  }

  NumericalBudget budget = options.budget;
  budget.lowest_degree = std::max(budget.lowest_degree, scale_degree(g));
  budget.order_hint = std::max(budget.order_hint, std::min(64, checked_product(degrees)));
  IndexReport report = zero_order_numerical(fixed_point_residual(f, power), f.dimension(), options.radius, budget);
  report.lowest_degrees = degrees;
  report.truncation_degree = degree;
  return report;
}

ProductRuleResult product_rule_check(const MapGerm& h1, const MapGerm& h2, const IndexOptions& options) {
  if (h1.dimension() != h2.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "product rule needs maps of equal dimension");
  }
  const int exact = std::max(1, h1.polynomial_degree()) * std::max(1, h2.polynomial_degree());
  const int degree = std::max({exact, h1.degree(), h2.degree()});
  const MapGerm composite = compose(h1.with_degree(degree), h2.with_degree(degree));
  ProductRuleResult result;
  result.first = zero_order(h1, options).value;
  result.second = zero_order(h2, options).value;
  result.composite = zero_order(composite, options).value;
  result.holds = result.composite == result.first * result.second;
  return result;
}

}  // namespace germ
