#include "germ/jet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "germ/error.hpp"

namespace germ {

namespace {

bool negligible(Complex c) { return std::abs(c) <= kDropTolerance; }

void check_dimension(std::size_t dimension) {
  if (dimension == 0 || dimension > kMaxDimension) {
    throw Error(ErrorCode::structural,
                "dimension " + std::to_string(dimension) + " outside 1.." +
                    std::to_string(kMaxDimension));
  }
}

// Mixed-radix key of a multidegree whose entries are all <= degree. Adding
// keys of two multidegrees with total <= degree never carries.
std::size_t pack(const Multidegree& m, std::size_t radix) {
  std::size_t key = 0;
  for (std::size_t k = m.size(); k-- > 0;) key = key * radix + m[k];
  return key;
}

Multidegree unpack(std::size_t key, std::size_t dimension, std::size_t radix) {
  Multidegree m(dimension);
  for (std::size_t k = 0; k < dimension; ++k) {
    m.set(k, static_cast<int>(key % radix));
    key /= radix;
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Multidegree

Multidegree::Multidegree(std::size_t dimension) {
  check_dimension(dimension);
  size_ = static_cast<std::uint8_t>(dimension);
}

Multidegree::Multidegree(std::initializer_list<int> exponents)
    : Multidegree(std::span<const int>(exponents.begin(), exponents.size())) {}

Multidegree::Multidegree(std::span<const int> exponents)
    : Multidegree(exponents.size()) {
  for (std::size_t k = 0; k < exponents.size(); ++k) set(k, exponents[k]);
}

Multidegree Multidegree::unit(std::size_t dimension, std::size_t slot) {
  Multidegree m(dimension);
  m.set(slot, 1);
  return m;
}

void Multidegree::set(std::size_t slot, int value) {
  if (slot >= size_) throw Error(ErrorCode::structural, "multidegree slot out of range");
  if (value < 0 || value > 255) {
    throw Error(ErrorCode::structural, "exponent " + std::to_string(value) + " out of range");
  }
  exponents_[slot] = static_cast<std::uint8_t>(value);
}

int Multidegree::total() const {
  int sum = 0;
  for (std::size_t k = 0; k < size_; ++k) sum += exponents_[k];
  return sum;
}

std::vector<int> Multidegree::to_vector() const {
  return {exponents_.begin(), exponents_.begin() + size_};
}

std::string Multidegree::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t k = 0; k < size_; ++k) out << (k ? "," : "") << int(exponents_[k]);
  out << ')';
  return out.str();
}

Multidegree Multidegree::operator+(const Multidegree& other) const {
  if (size_ != other.size_) throw Error(ErrorCode::structural, "multidegree dimension mismatch");
  Multidegree sum(size_);
  for (std::size_t k = 0; k < size_; ++k) sum.set(k, exponents_[k] + other.exponents_[k]);
  return sum;
}

// ---------------------------------------------------------------------------
// Jet

Jet::Jet(std::size_t dimension, int degree) : dimension_(dimension), degree_(degree) {
  check_dimension(dimension);
  if (degree < 0) throw Error(ErrorCode::structural, "negative truncation degree");
}

Jet Jet::constant(std::size_t dimension, int degree, Complex value) {
  Jet jet(dimension, degree);
  jet.add_term(Multidegree(dimension), value);
  return jet;
}

Jet Jet::variable(std::size_t dimension, int degree, std::size_t slot) {
  Jet jet(dimension, degree);
  jet.add_term(Multidegree::unit(dimension, slot), 1.0);
  return jet;
}

Jet Jet::monomial(std::size_t dimension, int degree, const Multidegree& exps, Complex coeff) {
  Jet jet(dimension, degree);
  jet.add_term(exps, coeff);
  return jet;
}

Complex Jet::coefficient(const Multidegree& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Complex{} : it->second;
}

Complex Jet::constant_term() const { return coefficient(Multidegree(dimension_)); }

Jet& Jet::add_term(const Multidegree& exps, Complex coeff) {
  if (exps.size() != dimension_) throw Error(ErrorCode::structural, "term dimension mismatch");
  if (exps.total() > degree_) return *this;
  auto [it, inserted] = terms_.try_emplace(exps, coeff);
  if (!inserted) it->second += coeff;
  if (negligible(it->second)) terms_.erase(it);
  return *this;
}

Jet Jet::with_degree(int degree) const {
  Jet out(dimension_, degree);
  for (const auto& [exps, c] : terms_) {
    if (exps.total() <= degree) out.terms_.emplace(exps, c);
  }
  return out;
}

Jet Jet::homogeneous_part(int total) const {
  Jet out(dimension_, degree_);
  for (const auto& [exps, c] : terms_) {
    if (exps.total() == total) out.terms_.emplace(exps, c);
  }
  return out;
}

std::optional<int> Jet::lowest_degree() const {
  std::optional<int> lowest;
  for (const auto& [exps, c] : terms_) {
    const int t = exps.total();
    if (!lowest || t < *lowest) lowest = t;
  }
  return lowest;
}

int Jet::polynomial_degree() const {
  int highest = -1;
  for (const auto& [exps, c] : terms_) highest = std::max(highest, exps.total());
  return highest;
}

Complex Jet::evaluate(std::span<const Complex> point) const {
  if (point.size() != dimension_) throw Error(ErrorCode::structural, "evaluation point dimension mismatch");
  Complex sum{};
  for (const auto& [exps, c] : terms_) {
    Complex term = c;
    for (std::size_t k = 0; k < dimension_; ++k) {
      for (int e = 0; e < exps[k]; ++e) term *= point[k];
    }
    sum += term;
  }
  return sum;
}

Jet Jet::derivative(std::size_t slot) const {
  Jet out(dimension_, degree_);
  for (const auto& [exps, c] : terms_) {
    if (exps[slot] == 0) continue;
    Multidegree lowered = exps;
    lowered.set(slot, exps[slot] - 1);
    out.add_term(lowered, c * double(exps[slot]));
  }
  return out;
}

Jet Jet::pow(int exponent) const {
  if (exponent < 0) throw Error(ErrorCode::structural, "negative jet power");
  Jet result = constant(dimension_, degree_, 1.0);
  Jet base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

void Jet::check_compatible(const Jet& other, const char* op) const {
  if (dimension_ != other.dimension_ || degree_ != other.degree_) {
    throw Error(ErrorCode::structural,
                std::string("jet ") + op + ": dimension/degree mismatch (" +
                    std::to_string(dimension_) + "," + std::to_string(degree_) + ") vs (" +
                    std::to_string(other.dimension_) + "," + std::to_string(other.degree_) + ")");
  }
}

Jet& Jet::operator+=(const Jet& other) {
  check_compatible(other, "add");
  for (const auto& [exps, c] : other.terms_) add_term(exps, c);
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_compatible(other, "subtract");
  for (const auto& [exps, c] : other.terms_) add_term(exps, -c);
  return *this;
}

Jet& Jet::operator*=(Complex scalar) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= scalar;
    it = negligible(it->second) ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Jet Jet::operator-() const { return *this * Complex(-1.0); }

Jet operator*(const Jet& lhs, const Jet& rhs) {
  lhs.check_compatible(rhs, "multiply");
  const std::size_t n = lhs.dimension_;
  const int d = lhs.degree_;
  Jet out(n, d);
  if (lhs.terms_.empty() || rhs.terms_.empty()) return out;

  struct Packed {
    std::size_t key;
    int total;
    Complex coeff;
  };
  const std::size_t radix = static_cast<std::size_t>(d) + 1;
  auto flatten = [&](const Jet& jet) {
    std::vector<Packed> packed;
    packed.reserve(jet.terms_.size());
    for (const auto& [exps, c] : jet.terms_) packed.push_back({pack(exps, radix), exps.total(), c});
    return packed;
  };
  const auto a = flatten(lhs);
  const auto b = flatten(rhs);

  std::size_t capacity = 1;
  bool dense = true;
  for (std::size_t k = 0; k < n && dense; ++k) {
    capacity *= radix;
    dense = capacity <= (std::size_t{1} << 22);
  }

  if (dense) {
    std::vector<Complex> acc(capacity);
    std::vector<std::size_t> touched;
    for (const auto& x : a) {
      for (const auto& y : b) {
        if (x.total + y.total > d) continue;
        const std::size_t key = x.key + y.key;
        if (acc[key] == Complex{}) touched.push_back(key);
        acc[key] += x.coeff * y.coeff;
      }
    }
    for (std::size_t key : touched) {
      if (!negligible(acc[key])) out.terms_.emplace(unpack(key, n, radix), acc[key]);
    }
  } else {
    std::unordered_map<std::size_t, Complex> acc;
    for (const auto& x : a) {
      for (const auto& y : b) {
        if (x.total + y.total > d) continue;
        acc[x.key + y.key] += x.coeff * y.coeff;
      }
    }
    for (const auto& [key, c] : acc) {
      if (!negligible(c)) out.terms_.emplace(unpack(key, n, radix), c);
    }
  }
  return out;
}

double max_abs_difference(const Jet& lhs, const Jet& rhs) {
  double worst = 0.0;
  for (const auto& [exps, c] : lhs.terms()) worst = std::max(worst, std::abs(c - rhs.coefficient(exps)));
  for (const auto& [exps, c] : rhs.terms()) {
    if (!lhs.terms().count(exps)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// MapGerm

MapGerm::MapGerm(std::vector<Jet> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::structural, "map germ needs at least one component");
  const std::size_t n = components_.size();
  const int d = components_.front().degree();
  for (std::size_t j = 0; j < n; ++j) {
    const Jet& c = components_[j];
    if (c.dimension() != n) {
      throw Error(ErrorCode::structural, "component " + std::to_string(j + 1) + " has dimension " +
                                             std::to_string(c.dimension()) + ", expected " +
                                             std::to_string(n));
    }
    if (c.degree() != d) throw Error(ErrorCode::structural, "components disagree on truncation degree");
    if (c.constant_term() != Complex{}) {
      throw Error(ErrorCode::nonzero_constant,
                  "component " + std::to_string(j + 1) + " has a nonzero constant term");
    }
  }
}

MapGerm MapGerm::identity(std::size_t dimension, int degree) {
  std::vector<Jet> comps;
  for (std::size_t j = 0; j < dimension; ++j) comps.push_back(Jet::variable(dimension, degree, j));
  return MapGerm(std::move(comps));
}

MapGerm MapGerm::linear(const Eigen::MatrixXcd& matrix, int degree) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  if (matrix.cols() != matrix.rows()) throw Error(ErrorCode::structural, "linear map must be square");
  std::vector<Jet> comps;
  for (std::size_t j = 0; j < n; ++j) {
    Jet c(n, degree);
    for (std::size_t k = 0; k < n; ++k) c.add_term(Multidegree::unit(n, k), matrix(j, k));
    comps.push_back(std::move(c));
  }
  return MapGerm(std::move(comps));
}

MapGerm MapGerm::with_degree(int degree) const {
  std::vector<Jet> comps;
  for (const Jet& c : components_) comps.push_back(c.with_degree(degree));
  return MapGerm(std::move(comps));
}

int MapGerm::polynomial_degree() const {
  int d = -1;
  for (const Jet& c : components_) d = std::max(d, c.polynomial_degree());
  return d;
}

Eigen::MatrixXcd MapGerm::linear_part() const {
  const std::size_t n = dimension();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) a(j, k) = components_[j].coefficient(Multidegree::unit(n, k));
  }
  return a;
}

Eigen::VectorXcd MapGerm::evaluate(const Eigen::VectorXcd& point) const {
  Eigen::VectorXcd value;
  PolynomialMap(*this).evaluate(point, value);
  return value;
}

Eigen::MatrixXcd MapGerm::jacobian(const Eigen::VectorXcd& point) const {
  Eigen::VectorXcd value;
  Eigen::MatrixXcd jac;
  PolynomialMap(*this).evaluate(point, value, jac);
  return jac;
}

MapGerm operator+(const MapGerm& lhs, const MapGerm& rhs) {
  if (lhs.dimension() != rhs.dimension()) throw Error(ErrorCode::structural, "germ dimension mismatch");
  std::vector<Jet> comps;
  for (std::size_t j = 0; j < lhs.dimension(); ++j) comps.push_back(lhs.component(j) + rhs.component(j));
  return MapGerm(std::move(comps));
}

MapGerm operator-(const MapGerm& lhs, const MapGerm& rhs) {
  if (lhs.dimension() != rhs.dimension()) throw Error(ErrorCode::structural, "germ dimension mismatch");
  std::vector<Jet> comps;
  for (std::size_t j = 0; j < lhs.dimension(); ++j) comps.push_back(lhs.component(j) - rhs.component(j));
  return MapGerm(std::move(comps));
}

double max_abs_difference(const MapGerm& lhs, const MapGerm& rhs) {
  if (lhs.dimension() != rhs.dimension()) throw Error(ErrorCode::structural, "germ dimension mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < lhs.dimension(); ++j) {
    worst = std::max(worst, max_abs_difference(lhs.component(j), rhs.component(j)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Composition

namespace {

// Memoized products f^I = f_1^{i_1} ⋯ f_n^{i_n}, built one factor at a time
// from the product with one fewer power of the last nonzero slot.
class MonomialCache {
 public:
  explicit MonomialCache(const MapGerm& f) : f_(f) {}

  const Jet& get(const Multidegree& exps) {
    if (auto it = cache_.find(exps); it != cache_.end()) return it->second;
    const std::size_t n = f_.dimension();
    Jet value = Jet::constant(n, f_.degree(), 1.0);
    if (!exps.is_zero()) {
      std::size_t last = n;
      while (exps[last - 1] == 0) --last;
      Multidegree lower = exps;
      lower.set(last - 1, exps[last - 1] - 1);
      value = get(lower) * f_.component(last - 1);
    }
    return cache_.emplace(exps, std::move(value)).first->second;
  }

 private:
  const MapGerm& f_;
  std::map<Multidegree, Jet> cache_;
};

void check_composable(std::size_t g_dim, int g_deg, const MapGerm& f) {
  if (g_dim != f.dimension() || g_deg != f.degree()) {
    throw Error(ErrorCode::structural, "compose: dimension/degree mismatch");
  }
}

Jet compose_with(const Jet& g, const MapGerm& f, MonomialCache& cache) {
  Jet out(f.dimension(), f.degree());
  for (const auto& [exps, c] : g.terms()) {
    // f fixes the origin, so f^I starts at degree |I|.
    if (exps.total() > f.degree()) continue;
    out += cache.get(exps) * c;
  }
  return out;
}

}  // namespace

Jet compose(const Jet& g, const MapGerm& f) {
  check_composable(g.dimension(), g.degree(), f);
  MonomialCache cache(f);
  return compose_with(g, f, cache);
}

MapGerm compose(const MapGerm& g, const MapGerm& f) {
  check_composable(g.dimension(), g.degree(), f);
  MonomialCache cache(f);
  std::vector<Jet> comps;
  for (const Jet& gj : g.components()) comps.push_back(compose_with(gj, f, cache));
  return MapGerm(std::move(comps));
}

MapGerm iterate(const MapGerm& f, long long k) {
  if (k < 1) throw Error(ErrorCode::structural, "iterate needs k >= 1");
  // Iterates of one germ commute, so binary powering is order-free.
  std::optional<MapGerm> result;
  MapGerm base = f;
  while (k > 0) {
    if (k & 1) result = result ? compose(*result, base) : base;
    k >>= 1;
    if (k) base = compose(base, base);
  }
  return *result;
}

MapGerm identity_minus(const MapGerm& f) {
  return MapGerm::identity(f.dimension(), f.degree()) - f;
}

MapGerm conjugate_linear(const MapGerm& f, const Eigen::MatrixXcd& change) {
  const Eigen::MatrixXcd inverse = change.inverse();
  const MapGerm v = MapGerm::linear(change, f.degree());
  const MapGerm v_inv = MapGerm::linear(inverse, f.degree());
  return compose(v_inv, compose(f, v));
}

MapGerm substitute_powers(const MapGerm& g, std::span<const int> exponents, int degree) {
  const std::size_t n = g.dimension();
  if (exponents.size() != n) throw Error(ErrorCode::structural, "substitution arity mismatch");
  for (int e : exponents) {
    if (e < 1) throw Error(ErrorCode::structural, "substitution exponents must be positive");
  }
  std::vector<Jet> comps;
  for (const Jet& gj : g.components()) {
    Jet out(n, degree);
    for (const auto& [exps, c] : gj.terms()) {
      int total = 0;
      for (std::size_t k = 0; k < n; ++k) total += exps[k] * exponents[k];
      if (total > degree) continue;
      Multidegree z(n);
      for (std::size_t k = 0; k < n; ++k) z.set(k, exps[k] * exponents[k]);
      out.add_term(z, c);
    }
    comps.push_back(std::move(out));
  }
  return MapGerm(std::move(comps));
}

std::vector<LowestForm> lowest_forms(const MapGerm& g) {
  std::vector<LowestForm> forms;
  for (std::size_t j = 0; j < g.dimension(); ++j) {
    const auto low = g.component(j).lowest_degree();
    if (!low) {
      throw Error(ErrorCode::degenerate, "component " + std::to_string(j + 1) +
                                             " vanishes through degree " +
                                             std::to_string(g.degree()));
    }
    forms.push_back({*low, g.component(j).homogeneous_part(*low)});
  }
  return forms;
}

// ---------------------------------------------------------------------------
// PolynomialMap

PolynomialMap::PolynomialMap(const MapGerm& germ)
    : dimension_(germ.dimension()), degree_(std::max(germ.polynomial_degree(), 1)) {
  for (std::size_t j = 0; j < dimension_; ++j) {
    for (const auto& [exps, c] : germ.component(j).terms()) {
      Term t{j, {}, c};
      for (std::size_t k = 0; k < dimension_; ++k) t.exponents[k] = static_cast<std::uint8_t>(exps[k]);
      terms_.push_back(t);
    }
  }
}

void PolynomialMap::fill_powers(const Eigen::VectorXcd& x, std::vector<Complex>& powers) const {
  const std::size_t stride = static_cast<std::size_t>(degree_) + 1;
  powers.assign(dimension_ * stride, Complex{});
  for (std::size_t k = 0; k < dimension_; ++k) {
    Complex p = 1.0;
    for (std::size_t e = 0; e < stride; ++e) {
      powers[k * stride + e] = p;
      p *= x[static_cast<Eigen::Index>(k)];
    }
  }
}

void PolynomialMap::evaluate(const Eigen::VectorXcd& x, Eigen::VectorXcd& value) const {
  const std::size_t stride = static_cast<std::size_t>(degree_) + 1;
  std::vector<Complex> powers;
  fill_powers(x, powers);
  value = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension_));
  for (const Term& t : terms_) {
    Complex m = t.coeff;
    for (std::size_t k = 0; k < dimension_; ++k) m *= powers[k * stride + t.exponents[k]];
    value[static_cast<Eigen::Index>(t.component)] += m;
  }
}

void PolynomialMap::evaluate(const Eigen::VectorXcd& x, Eigen::VectorXcd& value,
                             Eigen::MatrixXcd& jacobian) const {
  const std::size_t stride = static_cast<std::size_t>(degree_) + 1;
  const auto n = static_cast<Eigen::Index>(dimension_);
  std::vector<Complex> powers;
  fill_powers(x, powers);
  value = Eigen::VectorXcd::Zero(n);
  jacobian = Eigen::MatrixXcd::Zero(n, n);
  for (const Term& t : terms_) {
    const auto row = static_cast<Eigen::Index>(t.component);
    Complex m = t.coeff;
    for (std::size_t k = 0; k < dimension_; ++k) m *= powers[k * stride + t.exponents[k]];
    value[row] += m;
    for (std::size_t k = 0; k < dimension_; ++k) {
      const int e = t.exponents[k];
      if (e == 0) continue;
      Complex dm = t.coeff * double(e);
      for (std::size_t l = 0; l < dimension_; ++l) {
        dm *= powers[l * stride + (l == k ? e - 1 : t.exponents[l])];
      }
      jacobian(row, static_cast<Eigen::Index>(k)) += dm;
    }
  }
}

void PolynomialMap::iterate(const Eigen::VectorXcd& x, long long k, Eigen::VectorXcd& value,
                            Eigen::MatrixXcd& jacobian) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  value = x;
  jacobian = Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXcd next;
  Eigen::MatrixXcd step;
  for (long long i = 0; i < k; ++i) {
    evaluate(value, next, step);
    value = next;
    jacobian = step * jacobian;
  }
}

Eigen::VectorXcd PolynomialMap::iterate(const Eigen::VectorXcd& x, long long k) const {
  Eigen::VectorXcd value = x;
  Eigen::VectorXcd next;
  for (long long i = 0; i < k; ++i) {
    evaluate(value, next);
    value = next;
  }
  return value;
}

}  // namespace germ
