#include "germ/divisors.hpp"

#include <algorithm>
#include <numeric>

#include "germ/error.hpp"

namespace germ {

namespace {

constexpr long long kSieveLimit = 1'000'000;

const std::vector<long long>& prime_table() {
  static const std::vector<long long> primes = [] {
    std::vector<bool> composite(kSieveLimit + 1, false);
    std::vector<long long> out;
    for (long long p = 2; p <= kSieveLimit; ++p) {
      if (composite[p]) continue;
      out.push_back(p);
      for (long long q = p * p; q <= kSieveLimit; q += p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

void require_positive(long long n, const char* what) {
  if (n < 1) throw Error(ErrorCode::structural, std::string(what) + " must be positive");
}

int valuation(long long n, long long p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

long long ipow(long long base, int exp) {
  long long r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace

std::vector<std::pair<long long, int>> factorize(long long n) {
  require_positive(n, "factorize argument");
  std::vector<std::pair<long long, int>> out;
  for (long long p : prime_table()) {
    if (p * p > n) break;
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) {
    // Beyond the table's square, the remainder could still be composite;
    // desk-scale periods never get here.
    if (n > kSieveLimit * kSieveLimit) {
      throw Error(ErrorCode::structural, "factorize: argument exceeds table range");
    }
    out.emplace_back(n, 1);
  }
  return out;
}

std::vector<long long> prime_factors(long long n) {
  std::vector<long long> primes;
  for (const auto& [p, e] : factorize(n)) primes.push_back(p);
  return primes;
}

std::vector<long long> divisors(long long n) {
  std::vector<long long> out{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = out.size();
    long long pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int moebius(long long n) {
  int sign = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

long long lcm_of(std::span<const long long> values) {
  long long acc = 1;
  for (long long v : values) {
    require_positive(v, "lcm operand");
    acc = std::lcm(acc, v);
  }
  return acc;
}

DoldPlan dold_plan(long long period) {
  require_positive(period, "period");
  DoldPlan plan;
  plan.period = period;
  plan.primes = prime_factors(period);
  const std::size_t k = plan.primes.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    DoldWeight w{{}, period, 1};
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) {
        w.removed_primes.push_back(plan.primes[i]);
        w.divisor /= plan.primes[i];
        w.sign = -w.sign;
      }
    }
    plan.weights.push_back(std::move(w));
  }
  std::stable_sort(plan.weights.begin(), plan.weights.end(),
                   [](const DoldWeight& a, const DoldWeight& b) {
                     if (a.removed_primes.size() != b.removed_primes.size()) {
                       return a.removed_primes.size() < b.removed_primes.size();
                     }
                     return a.divisor < b.divisor;
                   });
  return plan;
}

CensusInversion census_invert(const std::map<long long, long long>& fixed_counts,
                              long long period) {
  CensusInversion out;
  for (long long m : divisors(period)) {
    long long total = 0;
    for (const DoldWeight& w : dold_plan(m).weights) {
      auto it = fixed_counts.find(w.divisor);
      if (it == fixed_counts.end()) {
        throw Error(ErrorCode::structural,
                    "census table lacks divisor " + std::to_string(w.divisor));
      }
      total += w.sign * it->second;
    }
    out.periods[m] = total;
    if (total < 0) out.negative.push_back(m);
  }
  return out;
}

Number1Certificate number1_construct(std::span<const long long> orders) {
  if (orders.empty()) throw Error(ErrorCode::hypothesis, "need at least one order");
  Number1Certificate cert;
  cert.orders.assign(orders.begin(), orders.end());
  cert.lcm = lcm_of(orders);

  for (std::size_t j = 0; j < orders.size(); ++j) {
    std::vector<long long> others;
    for (std::size_t k = 0; k < orders.size(); ++k) {
      if (k != j) others.push_back(orders[k]);
    }
    if (lcm_of(others) >= cert.lcm) {
      throw Error(ErrorCode::hypothesis,
                  "m_" + std::to_string(j + 1) + " = " + std::to_string(orders[j]) +
                      " does not raise the lcm of the remaining orders (" +
                      std::to_string(lcm_of(others)) + ")");
    }
    bool found = false;
    for (long long p : prime_factors(orders[j])) {
      const int r = valuation(orders[j], p);
      const long long pr = ipow(p, r);
      const bool exclusive = std::none_of(others.begin(), others.end(),
                                          [pr](long long m) { return m % pr == 0; });
      if (exclusive) {
        cert.primes.push_back(p);
        cert.exponents.push_back(r);
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::hypothesis,
                  "no exclusive prime power in m_" + std::to_string(j + 1));
    }
  }

  cert.reduced = cert.lcm;
  cert.fully_reduced = cert.lcm;
  for (std::size_t j = 0; j < cert.primes.size(); ++j) {
    cert.reduced /= cert.primes[j];
    cert.fully_reduced /= ipow(cert.primes[j], cert.exponents[j]);
  }
  for (std::size_t j = 0; j < orders.size(); ++j) {
    // M*/m_j = n'_j / n_j  ⇔  n'_j = M* n_j / m_j.
    cert.cofactors.push_back(cert.reduced * cert.primes[j] / orders[j]);
  }

  if (auto problem = check_certificate(cert); !problem.empty()) {
    throw Error(ErrorCode::hypothesis, "certificate check failed: " + problem);
  }
  return cert;
}

std::string check_certificate(const Number1Certificate& c) {
  const std::size_t s = c.orders.size();
  if (c.primes.size() != s || c.exponents.size() != s || c.cofactors.size() != s) {
    return "field lengths disagree";
  }
  if (c.lcm != lcm_of(c.orders)) return "M is not the lcm of the orders";
  for (std::size_t j = 0; j < s; ++j) {
    if (prime_factors(c.primes[j]) != std::vector<long long>{c.primes[j]}) {
      return "n_" + std::to_string(j + 1) + " is not prime";
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (c.primes[k] == c.primes[j]) return "primes are not distinct";
    }
    if (c.exponents[j] < 1) return "r_" + std::to_string(j + 1) + " < 1";
    const long long pr = ipow(c.primes[j], c.exponents[j]);
    if (c.orders[j] % pr != 0) return "n_j^r_j does not divide m_j";
    if (c.orders[j] % (pr * c.primes[j]) == 0) return "n_j^(r_j+1) divides m_j";
    for (std::size_t k = 0; k < s; ++k) {
      if (k != j && c.orders[k] % pr == 0) return "n_j^r_j divides another order";
    }
  }
  long long prod = 1;
  long long prod_pow = 1;
  for (std::size_t j = 0; j < s; ++j) {
    prod *= c.primes[j];
    prod_pow *= ipow(c.primes[j], c.exponents[j]);
  }
  if (c.reduced * prod != c.lcm) return "M != M* Π n_j";
  if (c.fully_reduced * prod_pow != c.lcm) return "M != M** Π n_j^r_j";
  for (std::size_t j = 0; j < s; ++j) {
    if (c.cofactors[j] < 1) return "n'_j not positive";
    // Cross-multiplied M*/m_j = n'_j/n_j.
    if (c.reduced * c.primes[j] != c.cofactors[j] * c.orders[j]) return "M*/m_j != n'_j/n_j";
    if (std::gcd(c.primes[j], c.cofactors[j]) != 1) return "gcd(n_j, n'_j) != 1";
  }
  return {};
}

long long period_under_power(long long period, long long power) {
  require_positive(period, "period");
  require_positive(power, "power");
  return period / std::gcd(period, power);
}

}  // namespace germ
