#pragma once

// Divisor-lattice combinatorics: prime sets, the signed subset sums that
// define Dold indices, Möbius inversion of fixed-point censuses, and the
// prime-power construction used to split an lcm into per-order primes.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace germ {

// Trial division against a sieved prime table (primes below 10^6).
std::vector<std::pair<long long, int>> factorize(long long n);
// P(n): distinct primes dividing n, ascending.
std::vector<long long> prime_factors(long long n);
// All positive divisors, ascending.
std::vector<long long> divisors(long long n);
int moebius(long long n);
long long lcm_of(std::span<const long long> values);

struct DoldWeight {
  std::vector<long long> removed_primes;  // τ
  long long divisor;                      // M:τ
  int sign;                               // (-1)^{#τ}
};

struct DoldPlan {
  long long period = 1;
  std::vector<long long> primes;
  // One entry per subset τ ⊆ P(M): by |τ|, then by ascending divisor.
  std::vector<DoldWeight> weights;
};

DoldPlan dold_plan(long long period);

struct CensusInversion {
  // Number of points of each exact period m | M.
  std::map<long long, long long> periods;
  // Divisors whose recovered count is negative; such tables cannot come
  // from an actual self-map.
  std::vector<long long> negative;

  bool flagged() const { return !negative.empty(); }
};

// Solves L(M') = Σ_{m | M'} P_m for all M' | M. `fixed_counts` must hold an
// entry for every divisor of `period`.
CensusInversion census_invert(const std::map<long long, long long>& fixed_counts,
                              long long period);

struct Number1Certificate {
  std::vector<long long> orders;          // m_1 … m_s
  long long lcm = 1;                      // M
  long long reduced = 1;                  // M* = M / Π n_j
  long long fully_reduced = 1;            // M** = M / Π n_j^{r_j}
  std::vector<long long> primes;          // n_j
  std::vector<int> exponents;             // r_j
  std::vector<long long> cofactors;       // n_j'
};

// Picks, for each m_j, a prime power n_j^{r_j} exactly dividing m_j and not
// dividing any other m_k (smallest such prime), then derives M*, M**, n_j'.
// Throws hypothesis when some m_j adds nothing to the lcm of the others.
Number1Certificate number1_construct(std::span<const long long> orders);

// Empty string when every invariant holds, otherwise a description of the
// first violation.
std::string check_certificate(const Number1Certificate& cert);

// Exact period of a point of f-period `period` under f^power.
long long period_under_power(long long period, long long power);

}  // namespace germ
