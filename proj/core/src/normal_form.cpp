#include "germ/normal_form.hpp"

#include <cmath>
#include <sstream>

#include "germ/divisors.hpp"
#include "germ/error.hpp"
#include "germ/spectrum.hpp"

namespace germ {

namespace {

Complex eigen_power(std::span<const Complex> lambda, const Multidegree& exps) {
  Complex product = 1.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    for (int e = 0; e < exps[k]; ++e) product *= lambda[k];
  }
  return product;
}

void enumerate_degree(std::size_t n, int total, std::size_t slot, Multidegree& current,
                      std::vector<Multidegree>& out) {
  if (slot + 1 == n) {
    current.set(slot, total);
    out.push_back(current);
    return;
  }
  for (int e = total; e >= 0; --e) {
    current.set(slot, e);
    enumerate_degree(n, total - e, slot + 1, current, out);
  }
}

bool is_prime(long long m) {
  const auto f = factorize(m);
  return f.size() == 1 && f.front().second == 1;
}

}  // namespace

MapGerm tangent_inverse(const MapGerm& h) {
  const std::size_t n = h.dimension();
  const int d = h.degree();
  const MapGerm id = MapGerm::identity(n, d);
  if (max_abs_difference(MapGerm::linear(h.linear_part(), d), id) > kDropTolerance) {
    throw Error(ErrorCode::structural, "tangent_inverse needs an identity linear part");
  }
  // K = id - (h - id)∘K gains one exact degree per pass.
  const MapGerm nonlinear = h - id;
  MapGerm k = id;
  for (int pass = 1; pass < d; ++pass) k = id - compose(nonlinear, k);
  return k;
}

std::set<SupportEntry> resonant_monomials(std::span<const Complex> eigenvalues, int degree) {
  const std::size_t n = eigenvalues.size();
  std::set<SupportEntry> out;
  for (int total = 2; total <= degree; ++total) {
    std::vector<Multidegree> exps;
    Multidegree current(n);
    enumerate_degree(n, total, 0, current, exps);
    for (const auto& e : exps) {
      const Complex power = eigen_power(eigenvalues, e);
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(power - eigenvalues[j]) < kUnityTolerance) out.insert({j, e});
      }
    }
  }
  return out;
}

NormalFormResult normalize(const MapGerm& f, int degree) {
  if (degree < 1) throw Error(ErrorCode::structural, "normal form degree must be positive");
  const std::size_t n = f.dimension();
  const Eigen::MatrixXcd linear = f.linear_part();
  const Eigen::MatrixXcd off = linear - Eigen::MatrixXcd(linear.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > kDropTolerance) {
    throw Error(ErrorCode::non_diagonal, "normal form needs a diagonal linear part; conjugate by the eigenvectors first");
  }
  std::vector<Complex> lambda(n);
  for (std::size_t j = 0; j < n; ++j) lambda[j] = linear(j, j);

  const MapGerm source = f.with_degree(degree);
  MapGerm g = source;
  MapGerm h = MapGerm::identity(n, degree);
  for (int k = 2; k <= degree; ++k) {
    std::vector<Jet> step;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      Jet comp = Jet::variable(n, degree, j);
      for (const auto& [e, c] : g.component(j).terms()) {
        if (e.total() != k) continue;
        const Complex divisor = eigen_power(lambda, e) - lambda[j];
        if (std::abs(divisor) < kUnityTolerance) continue;
        if (std::abs(divisor) < kSmallDivisorTolerance) {
          std::ostringstream msg;
          msg << "small divisor " << std::abs(divisor) << " at component " << j + 1 << ", exponent " << e.to_string();
          throw Error(ErrorCode::small_divisor, msg.str());
        }
        comp.add_term(e, c / divisor);
        any = true;
      }
      step.push_back(std::move(comp));
    }
    if (!any) continue;
    const MapGerm hk(std::move(step));
    g = compose(tangent_inverse(hk), compose(g, hk));
    h = compose(h, hk);
  }

  NormalFormResult result{h, g, degree, {}, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [e, c] : g.component(j).terms()) {
      if (e.total() >= 2) result.resonant_support.insert({j, e});
    }
  }
  result.conjugacy_defect = max_abs_difference(compose(h, g), compose(source, h));
  return result;
}

ResonantSkeleton resonant_skeleton(const MapGerm& g, const std::vector<int>& orders) {
  const std::size_t n = g.dimension();
  const std::size_t s = orders.size();
  if (s == 0 || s > n) throw Error(ErrorCode::structural, "resonant skeleton needs 1 <= s <= n orders");
  ResonantSkeleton out;
  out.orders = orders;

  const Spectrum spec = spectrum_of(g);
  std::set<int> distinct(orders.begin(), orders.end());
  out.orders_match = distinct.size() == s;
  for (std::size_t j = 0; j < s; ++j) {
    out.orders_match = out.orders_match && orders[j] >= 2 && is_prime(orders[j]) && spec.unity_orders[j] &&
                       *spec.unity_orders[j] == orders[j];
  }
  long long product = 1;
  for (int m : orders) product *= m;
  out.remaining_nonresonant = true;
  for (std::size_t r = s; r < n; ++r) {
    const double radius = std::pow(std::abs(spec.eigenvalues[r]), static_cast<double>(product));
    const double angle = static_cast<double>(product) * std::arg(spec.eigenvalues[r]);
    if (std::abs(std::polar(radius, angle) - Complex(1.0)) <= kUnityTolerance) out.remaining_nonresonant = false;
  }

  const auto s_idx = static_cast<Eigen::Index>(s);
  out.block = Eigen::MatrixXcd::Zero(s_idx, s_idx);
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t i = 0; i < s; ++i) {
      Multidegree e = Multidegree::unit(n, j);
      e.set(i, e[i] + orders[i]);
      out.block(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = g.component(j).coefficient(e);
    }
  }
  const double scale = std::max(1.0, out.block.cwiseAbs().maxCoeff());
  out.minors_invertible = true;
  for (unsigned mask = 1; mask < (1u << s); ++mask) {
    PrincipalMinor minor;
    for (std::size_t k = 0; k < s; ++k) {
      if (mask & (1u << k)) minor.rows.push_back(k);
    }
    const auto size = static_cast<Eigen::Index>(minor.rows.size());
    Eigen::MatrixXcd sub(size, size);
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = 0; b < size; ++b) {
        sub(a, b) = out.block(static_cast<Eigen::Index>(minor.rows[a]), static_cast<Eigen::Index>(minor.rows[b]));
      }
    }
    minor.determinant = sub.determinant();
    if (std::abs(minor.determinant) <= 1e-10 * std::pow(scale, static_cast<double>(size))) out.minors_invertible = false;
    out.minors.push_back(std::move(minor));
  }

  const long long cutoff = product * product;
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [e, c] : g.component(j).terms()) {
      if (e.total() == 1) {
        if (e[j] != 1) out.violations.push_back({j, e, c});
        continue;
      }
      if (j >= s || e.total() > cutoff) continue;
      bool fits = e[j] >= 1;
      int sub_total = 0;
      for (std::size_t k = 0; k < n && fits; ++k) {
        const int rest = e[k] - (k == j ? 1 : 0);
        if (k >= s) {
          fits = rest == 0;
        } else {
          fits = rest % orders[k] == 0;
          sub_total += rest / orders[k];
        }
      }
      if (!fits || sub_total < 1) out.violations.push_back({j, e, c});
    }
  }
  return out;
}

}  // namespace germ
