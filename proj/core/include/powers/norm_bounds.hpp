#pragma once

#include <optional>
#include <string>
#include <vector>

#include "powers/algebra.hpp"

namespace powers {

/// Budgets for the norm estimators. Budgets are caps: iterative methods
/// stop at the largest depth that fits, they never truncate results.
struct BoundConfig {
  int radius = 12;             // ball truncation radius for power iteration
  int max_iterations = 200;    // power-iteration steps
  int moment_depth = 10;       // largest trace-moment exponent
  int power_depth = 3;         // largest k in the l1((a*a)^{2^k}) bound
  std::uint64_t seed = 1;      // start-vector noise
  double tolerance = 1e-9;     // slack for float-reported lower bounds
  std::size_t support_cap = kDefaultSupportCap;
};

/// Certified bracket for the reduced-C* norm of lambda(a), with the
/// method that produced each side and the budgets actually used.
struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_method = "zero";
  std::string upper_method = "zero";
  int radius = 0;
  int iterations = 0;
  int moment_depth = 0;
  int power_depth = 0;
  /// Methods skipped because a requested budget could not be honored.
  std::vector<std::string> degraded;
};

/// Rayleigh-quotient lower bound from power iteration on b = a* a with
/// the iterate truncated to ball(radius) between steps. Each reported
/// quotient <(a*a) xi, xi>/<xi, xi> is evaluated against the exact
/// convolution operator, so truncation costs convergence speed, never
/// soundness. The float result is shaved by the configured tolerance.
double lower_bound_power(const AlgebraElement& a, const BoundConfig& cfg);

/// trace((a*a)^m)^(1/2m), rounded down; nondecreasing in m and a valid
/// lower bound for every m because the canonical trace is faithful.
/// Exact mode only.
Rational lower_bound_moments(const AlgebraElement& a, int depth,
                             std::size_t support_cap = kDefaultSupportCap);

/// l1((a*a)^(2^k))^(1/2^(k+1)), rounded up; nonincreasing in k. No
/// truncation is permitted, so deep k may exhaust the support cap.
Rational upper_bound_l1_power(const AlgebraElement& a, int k,
                              std::size_t support_cap = kDefaultSupportCap);

/// Free-group upper bound: sum over word lengths d of (d+1) * l2(a_d)
/// where a_d is the length-d stratum of a.
Rational upper_bound_haagerup(const AlgebraElement& a);

/// Weighted Schur-test upper bound on free groups with geometric weights
/// beta^|u|: the weighted row/column sups of the convolution kernel are
/// exact finite maxima over ball(degree(a)). beta is tuned in floats and
/// the final bound is verified in exact rational arithmetic. Returns
/// nullopt when ball(degree) exceeds the enumeration budget.
std::optional<Rational> upper_bound_schur(const AlgebraElement& a,
                                          std::size_t ball_budget = 200'000);

/// Norm bounds for elements in verified free position. When the support
/// words (one-sided) or inverse-closed support pairs (two-sided,
/// self-adjoint) form a free basis of the subgroup they generate, the
/// element has the same norm as the matching weighted sum of free Haar
/// unitaries, whose spectral edge has a one-parameter family of closed
/// upper bounds (any parameter value is valid) and, for uniform weights,
/// an exact algebraic value usable as a lower bound.
struct FreeEdgeBounds {
  std::optional<Rational> upper;
  std::optional<Rational> lower;
};
FreeEdgeBounds free_edge_bounds(const AlgebraElement& a);

struct CertifiedUpper {
  Rational value;
  std::string method;
  std::vector<std::string> degraded;
};
/// Minimum over all applicable certified upper-bound methods, in exact
/// arithmetic. Never fails: l1 is always available.
CertifiedUpper certified_upper_bound(const AlgebraElement& a, const BoundConfig& cfg);

/// Combined two-sided estimate: max of lower bounds, min of upper bounds.
/// Zero input returns the exact zero bracket without iteration.
NormEstimate estimate(const AlgebraElement& a, const BoundConfig& cfg);

}  // namespace powers
