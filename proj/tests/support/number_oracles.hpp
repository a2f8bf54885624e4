#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germ/divisors.hpp"

namespace germ::test {

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Smallest prime n with a power n^r exactly dividing m_j and dividing no
// other m_k, found by scanning every prime up to m_j.
inline std::optional<std::pair<long long, int>> brute_prime_power(const std::vector<long long>& m, std::size_t j) {
  for (long long n = 2; n <= m[j]; ++n) {
    if (!is_prime(n) || m[j] % n != 0) continue;
    int r = 0;
    long long pw = 1;
    while (m[j] % (pw * n) == 0) {
      pw *= n;
      ++r;
    }
    bool unique = true;
    for (std::size_t k = 0; k < m.size(); ++k) unique = unique && (k == j || m[k] % pw != 0);
    if (unique) return std::pair<long long, int>{n, r};
  }
  return std::nullopt;
}

// Empty when every divisibility, product and cofactor identity holds.
inline std::string certificate_violation(const Number1Certificate& c) {
  long long prod = 1, prod_pow = 1;
  for (std::size_t j = 0; j < c.orders.size(); ++j) {
    long long pw = 1;
    for (int k = 0; k < c.exponents[j]; ++k) pw *= c.primes[j];
    if (c.orders[j] % pw != 0) return "power does not divide m_" + std::to_string(j + 1);
    if (c.orders[j] % (pw * c.primes[j]) == 0) return "power not exact for m_" + std::to_string(j + 1);
    for (std::size_t k = 0; k < c.orders.size(); ++k) {
      if (k != j && c.orders[k] % pw == 0) return "power of m_" + std::to_string(j + 1) + " divides another order";
    }
    prod *= c.primes[j];
    prod_pow *= pw;
    if (c.reduced * c.primes[j] != c.cofactors[j] * c.orders[j]) return "cofactor ratio wrong";
    if (std::gcd(c.primes[j], c.cofactors[j]) != 1) return "cofactor not coprime";
  }
  if (c.lcm != c.reduced * prod) return "M != M* prod n_j";
  if (c.lcm != c.fully_reduced * prod_pow) return "M != M** prod n_j^r_j";
  return {};
}

}  // namespace germ::test
