#pragma once

// Dold indices P_M = Σ_τ (-1)^{#τ} μ_{f^{M:τ}} at the origin (local) or of
// fixed-point counts in a ball (global), and the identities relating them to
// the linear part.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "germ/divisors.hpp"
#include "germ/index.hpp"
#include "germ/jet.hpp"
#include "germ/orbit.hpp"

namespace germ {

enum class DoldMode { local, global };

struct DivisorIndex {
  long long divisor = 1;
  int sign = 1;
  long long index = 0;
  // local: how μ_{f^divisor} was obtained; global: "census" or
  // "index_summation" when some fixed point needed its own index.
  std::string method;
  // Power actually iterated; smaller than `divisor` when the Shub-Sullivan
  // reduction applied.
  long long computed_power = 1;
};

struct DoldReport {
  long long period = 1;
  DoldMode mode = DoldMode::local;
  DoldPlan plan;
  std::vector<DivisorIndex> terms;  // in plan order
  long long value = 0;
  // Local Dold indices are nonnegative; a negative value marks a numerical
  // fault upstream.
  bool fault = false;
};

struct DoldOptions {
  IndexOptions index;
  // Working radius ρ; the index of f^d is computed in the ball of radius ρ/d.
  double radius = 0.5;
  bool use_shub_sullivan = true;
  FinderOptions finder;
};

DoldReport dold_local(const MapGerm& f, long long period, const DoldOptions& options = {});

// `radius` is the region. Fixed points whose Jacobian of x - f^d(x) is
// singular contribute their own local index instead of 1.
DoldReport dold_global(const MapGerm& f, double radius, long long period, const DoldOptions& options = {});

// μ_{f^m}(0) = μ_f(0) when every eigenvalue is 1 or has λ^m ≠ 1.
std::optional<long long> shub_sullivan_reduce(const MapGerm& f, long long m, const IndexOptions& options = {});

struct ConsistencyReport {
  long long period = 1;
  long long iterate_index = 0;            // μ_{f^M}(0)
  std::map<long long, long long> dold;    // P_m for m | M
  std::vector<long long> linear_periods;  // m | M in the linear period set
  long long sum_over_linear_periods = 0;
  std::vector<long long> nonzero_outside; // m ∉ linear period set with P_m ≠ 0
  bool holds = false;
};

ConsistencyReport consistency_check(const MapGerm& f, long long period, const DoldOptions& options = {});

struct TheoremVerdict {
  long long period = 1;
  bool predicted = false;  // M lies in the linear period set
  long long computed = 0;  // P_M(f, 0)
  bool agree = false;      // predicted ⇔ P_M > 0
};

TheoremVerdict theorem_1_verdict(const MapGerm& f, long long period, const DoldOptions& options = {});

}  // namespace germ
