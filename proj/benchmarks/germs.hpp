#pragma once

#include <random>
#include <vector>

#include "germ/jet.hpp"
#include "germ/spectrum.hpp"

namespace bench {

// λ_j x_j + x_j (x_1^{m_1} + (j+1) x_2^{m_2}) with λ_j of order m_j.
inline germ::MapGerm resonant_pair(int m1, int m2, int degree) {
  const int orders[2] = {m1, m2};
  std::vector<germ::Jet> jets;
  for (std::size_t j = 0; j < 2; ++j) {
    germ::Jet c(2, degree);
    c.add_term(germ::Multidegree::unit(2, j), germ::unity_root(1, orders[j]));
    for (std::size_t i = 0; i < 2; ++i) {
      germ::Multidegree e = germ::Multidegree::unit(2, j);
      e.set(i, e[i] + orders[i]);
      c.add_term(e, (i == 1 && j == 1) ? 2.0 : 1.0);
    }
    jets.push_back(c);
  }
  return germ::MapGerm(std::move(jets));
}

// Dense germ: identity-ish linear part, every monomial up to `degree`.
inline germ::MapGerm dense(std::size_t n, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<germ::Jet> jets;
  for (std::size_t j = 0; j < n; ++j) {
    germ::Jet c(n, degree);
    c.add_term(germ::Multidegree::unit(n, j), 0.9);
    std::vector<int> e(n, 0);
    // odometer over exponent vectors with total <= degree
    while (true) {
      std::size_t k = 0;
      while (k < n) {
        ++e[k];
        int total = 0;
        for (int v : e) total += v;
        if (total <= degree) break;
        e[k] = 0;
        ++k;
      }
      if (k == n) break;
      int total = 0;
      for (int v : e) total += v;
      if (total >= 2) c.add_term(germ::Multidegree(std::span<const int>(e)), {g(rng), g(rng)});
    }
    jets.push_back(c);
  }
  return germ::MapGerm(std::move(jets));
}

}  // namespace bench
