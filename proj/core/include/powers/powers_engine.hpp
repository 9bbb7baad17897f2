#pragma once

#include <optional>
#include <string>
#include <vector>

#include "powers/norm_bounds.hpp"

namespace powers {

/// How candidate conjugators are generated.
enum class PoolStrategy { geometric, random_words, exhaustive };

std::string to_string(PoolStrategy s);
PoolStrategy pool_strategy_from_string(const std::string& s);

/// Everything the averaging searches leave open: candidate generation,
/// sizes, iteration budgets, the target epsilon, and the norm budgets
/// used for certification.
struct SearchConfig {
  PoolStrategy strategy = PoolStrategy::geometric;
  int max_conjugators = 16;       // also caps averaging steps in dixmier_average
  int max_candidate_length = 3;
  int fw_iterations = 40;
  Rational epsilon = Rational(19, 20);
  std::uint64_t seed = 1;
  BoundConfig bounds;
  /// Geometric seeds; empty means backend defaults (generators and
  /// length-2 words).
  std::vector<Word> seeds;
};

/// A finite, exactly re-checkable witness that averaging the targets'
/// conjugates under the given weights drives every certified norm upper
/// bound below epsilon.
struct Certificate {
  GroupDescriptor descriptor;
  std::vector<Word> targets;
  std::vector<Word> conjugators;
  std::vector<Rational> weights;              // convex, sums to 1 exactly
  std::vector<Rational> target_upper_bounds;  // one certified bound per target
  Rational epsilon;
  BoundConfig bounds;
};

struct ConjugateAverage {
  std::vector<AlgebraElement> per_target;  // A_j = sum_k c_k delta_{s_k t_j s_k^-1}
  AlgebraElement combined;                 // sum_j A_j
};

/// Exact-mode conjugate averages. Throws WeightError unless the weights
/// are a convex combination matching the conjugator count.
ConjugateAverage conjugate_average(const std::vector<Word>& targets,
                                   const std::vector<Word>& conjugators,
                                   const std::vector<Rational>& weights);

/// Classic powers schedule (g, g^2, ..., g^n). Throws IdentityGenerator
/// for g = e.
std::vector<Word> geometric_conjugators(const Word& g, int n);

struct SimplexResult {
  std::vector<Rational> weights;
  NormEstimate estimate;
};

/// Frank-Wolfe over the weight simplex for one target and a fixed
/// conjugator list: linearize via an approximate top singular pair, move
/// toward the minimizing vertex with step 2/(iter+2), snap the best visited
/// weights to rationals (denominator <= 10^6, renormalized) and return a
/// certified estimate. The value bounds the restricted minimum only, never
/// the infimum over the whole group.
SimplexResult minimize_simplex(const Word& target, const std::vector<Word>& conjugators,
                               const SearchConfig& cfg);

struct SearchOutcome {
  std::optional<Certificate> certificate;
  /// Best max-over-targets certified upper bound seen (also set on success).
  double best_value = 0.0;
};

/// Searches conjugator pools for a joint certificate: one conjugator
/// family and one weight vector serving every target, with the objective
/// max_j (certified upper bound of A_j). Deterministic for a fixed seed.
SearchOutcome search_certificate(const std::vector<Word>& targets, const SearchConfig& cfg);

/// Recomputes every certified bound of the certificate from scratch with
/// the certificate's own budgets; true iff all recomputed bounds are
/// below its epsilon. Throws MalformedCertificate on structural defects.
bool verify_certificate(const Certificate& cert);

struct DixmierStep {
  Word conjugator;        // identity for the initial distance record
  NormEstimate distance;  // certified bracket of ||a_i - tau0(a) e||
};

struct DixmierReport {
  bool success = false;
  Rational trace_value;        // tau0(a), preserved along the sequence
  std::vector<DixmierStep> steps;
  AlgebraElement final_element;
};

/// Greedy Dixmier averaging restricted to group unitaries: repeatedly
/// replaces a by (a + s a s^-1)/2 for the pool conjugator that minimizes
/// the certified distance to tau0(a) e, stopping below cfg.epsilon. The
/// identity stays in the pool, so the certified distance sequence never
/// increases.
DixmierReport dixmier_average(const AlgebraElement& a, const SearchConfig& cfg);

}  // namespace powers
