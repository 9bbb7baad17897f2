#include "powers/powers_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <unordered_map>

#include "powers/errors.hpp"

namespace powers {

std::string to_string(PoolStrategy s) {
  switch (s) {
    case PoolStrategy::geometric: return "geometric";
    case PoolStrategy::random_words: return "random-words";
    case PoolStrategy::exhaustive: return "exhaustive";
  }
  return "geometric";
}

PoolStrategy pool_strategy_from_string(const std::string& s) {
  if (s == "geometric") return PoolStrategy::geometric;
  if (s == "random-words" || s == "random") return PoolStrategy::random_words;
  if (s == "exhaustive") return PoolStrategy::exhaustive;
  throw ParseError("unknown pool strategy: '" + s + "'");
}

namespace {

void check_weights(const std::vector<Rational>& weights, std::size_t conjugators) {
  if (weights.size() != conjugators) throw WeightError("weight count does not match conjugator count");
  Rational sum(0);
  for (const Rational& w : weights) {
    if (w < 0) throw WeightError("negative weight");
    sum += w;
  }
  if (sum != 1) throw WeightError("weights sum to " + format_rational(sum) + ", expected 1");
}

std::vector<Rational> uniform_weights(std::size_t n) {
  return std::vector<Rational>(n, Rational(1) / Rational(static_cast<long>(n)));
}

}  // namespace

ConjugateAverage conjugate_average(const std::vector<Word>& targets, const std::vector<Word>& conjugators,
                                   const std::vector<Rational>& weights) {
  if (targets.empty()) throw Error("no targets");
  if (conjugators.empty()) throw Error("no conjugators");
  check_weights(weights, conjugators.size());
  const GroupDescriptor& desc = targets.front().descriptor();

  ConjugateAverage out{{}, AlgebraElement::zero(desc, ScalarMode::exact)};
  for (const Word& t : targets) {
    if (t.descriptor() != desc) throw GroupMismatch("targets from different groups");
    AlgebraElement avg = AlgebraElement::zero(desc, ScalarMode::exact);
    for (std::size_t k = 0; k < conjugators.size(); ++k) {
      avg.accumulate(conjugate(conjugators[k], t), Scalar::exact(weights[k]));
    }
    out.combined = add(out.combined, avg);
    out.per_target.push_back(std::move(avg));
  }
  return out;
}

std::vector<Word> geometric_conjugators(const Word& g, int n) {
  if (g.is_identity()) throw IdentityGenerator("geometric schedule seeded with the identity");
  if (n < 1) throw Error("conjugator count must be >= 1");
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(n));
  Word cur = g;
  for (int k = 0; k < n; ++k) {
    out.push_back(cur);
    if (k + 1 < n) cur = mul(cur, g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joint Frank-Wolfe over the weight simplex

namespace {

std::vector<Rational> snap_weights(const std::vector<double>& w) {
  std::vector<Rational> snapped;
  snapped.reserve(w.size());
  Rational sum(0);
  for (double v : w) {
    Rational r = snap_to_rational(std::max(v, 0.0), 1'000'000);
    if (r < 0) r = Rational(0);
    snapped.push_back(r);
    sum += r;
  }
  if (sum == 0) return uniform_weights(w.size());
  for (Rational& r : snapped) r /= sum;
  return snapped;
}

// Sparse float vector keyed by words.
using FloatVec = std::unordered_map<Word, std::complex<double>, WordHash>;

FloatVec apply_element(const AlgebraElement& a, const FloatVec& x) {
  FloatVec out;
  out.reserve(x.size() * (a.support_size() + 1));
  for (const auto& [w, c] : a.terms()) {
    std::complex<double> cw = c.approx();
    for (const auto& [v, xv] : x) out[mul(w, v)] += cw * xv;
  }
  return out;
}

// <a, b> = sum_w a(w) conj(b(w))
std::complex<double> dot(const FloatVec& a, const FloatVec& b) {
  const FloatVec* small = &a;
  const FloatVec* large = &b;
  bool flipped = false;
  if (small->size() > large->size()) {
    std::swap(small, large);
    flipped = true;
  }
  std::complex<double> s = 0.0;
  for (const auto& [w, v] : *small) {
    auto it = large->find(w);
    if (it == large->end()) continue;
    s += flipped ? it->second * std::conj(v) : v * std::conj(it->second);
  }
  return s;
}

double norm(const FloatVec& a) {
  double s = 0.0;
  for (const auto& [w, v] : a) s += std::norm(v);
  return std::sqrt(s);
}

void truncate_to(FloatVec& x, std::int64_t radius) {
  for (auto it = x.begin(); it != x.end();) {
    if (it->first.length() > radius) {
      it = x.erase(it);
    } else {
      ++it;
    }
  }
}

// Approximate top singular pair (xi, eta) of lambda(a): power iteration
// on a* a truncated to a ball between steps, then eta = a xi normalized.
struct SingularPair {
  FloatVec xi, eta;
};

SingularPair approx_singular_pair(const AlgebraElement& a, int radius, int iterations, std::uint64_t seed) {
  SingularPair p;
  const GroupDescriptor& desc = a.descriptor();
  std::mt19937_64 rng(seed);
  p.xi[Word::identity(desc)] = 1.0;
  for (const auto& [w, c] : a.terms()) {
    p.xi[inv(w)] += 0.05 + 0.05 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  AlgebraElement astar = adjoint(a);
  for (int it = 0; it < iterations; ++it) {
    FloatVec y = apply_element(astar, apply_element(a, p.xi));
    truncate_to(y, radius);
    double ny = norm(y);
    if (ny == 0.0) break;
    for (auto& [w, v] : y) v *= 1.0 / ny;
    p.xi = std::move(y);
  }
  p.eta = apply_element(a, p.xi);
  double ne = norm(p.eta);
  if (ne > 0) {
    for (auto& [w, v] : p.eta) v *= 1.0 / ne;
  }
  return p;
}

// In-loop certification grade: formula and l1-family bounds only. The
// quadratic convolution refinements are reserved for final estimates.
BoundConfig cheap_bounds(const BoundConfig& b) {
  BoundConfig c = b;
  c.power_depth = 0;
  return c;
}

struct JointResult {
  std::vector<Rational> weights;
  Rational value{0};                  // max over targets of the certified upper bound
  std::vector<Rational> per_target;   // bounds at the returned weights
};

Rational joint_upper(const std::vector<Word>& targets, const std::vector<Word>& conjugators,
                     const std::vector<Rational>& weights, const BoundConfig& bounds,
                     std::vector<Rational>* per_target, bool* all_free_edge = nullptr) {
  ConjugateAverage avg = conjugate_average(targets, conjugators, weights);
  Rational worst(0);
  if (per_target) per_target->clear();
  if (all_free_edge) *all_free_edge = true;
  for (const AlgebraElement& aj : avg.per_target) {
    CertifiedUpper u = certified_upper_bound(aj, bounds);
    if (per_target) per_target->push_back(u.value);
    if (all_free_edge) *all_free_edge = *all_free_edge && u.method == "free-edge";
    worst = std::max(worst, u.value);
  }
  return worst;
}

// Shared weights across all targets; objective max_j ||A_j||. Starts at
// the uniform vertex-center and only ever returns certified improvements.
JointResult joint_minimize(const std::vector<Word>& targets, const std::vector<Word>& conjugators,
                           const SearchConfig& cfg) {
  std::size_t n = conjugators.size();
  BoundConfig bounds = cheap_bounds(cfg.bounds);

  JointResult best;
  best.weights = uniform_weights(n);
  bool all_free_edge = false;
  best.value = joint_upper(targets, conjugators, best.weights, bounds, &best.per_target, &all_free_edge);
  if (n == 1 || cfg.fw_iterations <= 0) return best;
  // Over a verified free family the objective is permutation-symmetric
  // and convex, so the uniform point is already the simplex minimum.
  if (all_free_edge) return best;

  // A target whose conjugates all coincide keeps norm exactly 1 under
  // every convex weight, so it pins the max objective; no refinement
  // can help.
  std::vector<std::vector<Word>> conj_words(targets.size());
  bool refinable = true;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    conj_words[j].reserve(n);
    std::set<Word, WordLess> distinct;
    for (const Word& s : conjugators) {
      Word c = conjugate(s, targets[j]);
      distinct.insert(c);
      conj_words[j].push_back(std::move(c));
    }
    if (distinct.size() <= 1) refinable = false;
  }
  if (!refinable) return best;

  int fw_radius = std::min<int>(cfg.bounds.radius, 6);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < cfg.fw_iterations; ++it) {
    // Subgradient of the max: linearize at the currently-worst target.
    std::vector<Rational> snapped = snap_weights(w);
    std::vector<Rational> per;
    Rational value = joint_upper(targets, conjugators, snapped, bounds, &per);
    if (value < best.value) {
      best.value = value;
      best.weights = snapped;
      best.per_target = per;
    }
    std::size_t worst_j = 0;
    for (std::size_t j = 1; j < per.size(); ++j) {
      if (per[j] > per[worst_j]) worst_j = j;
    }

    AlgebraElement avg = AlgebraElement::zero(targets.front().descriptor(), ScalarMode::floating);
    for (std::size_t k = 0; k < n; ++k) avg.accumulate(conj_words[worst_j][k], Scalar::floating(w[k]));
    if (avg.is_zero()) break;
    SingularPair pair = approx_singular_pair(avg, fw_radius, 30, cfg.seed + static_cast<std::uint64_t>(it));

    // Linearized gradient coordinate: Re <delta_{s_k t s_k^-1} xi, eta>.
    std::size_t best_k = 0;
    double best_g = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      FloatVec shifted;
      shifted.reserve(pair.xi.size());
      for (const auto& [v, xv] : pair.xi) shifted[mul(conj_words[worst_j][k], v)] += xv;
      double g = dot(shifted, pair.eta).real();
      if (g < best_g - 1e-15) {
        best_g = g;
        best_k = k;  // ties keep the lowest index
      }
    }
    double step = 2.0 / (static_cast<double>(it) + 2.0);
    for (std::size_t k = 0; k < n; ++k) w[k] *= (1.0 - step);
    w[best_k] += step;
  }

  // Certify the final iterate as well.
  std::vector<Rational> snapped = snap_weights(w);
  std::vector<Rational> per;
  Rational value = joint_upper(targets, conjugators, snapped, bounds, &per);
  if (value < best.value) {
    best.value = value;
    best.weights = std::move(snapped);
    best.per_target = std::move(per);
  }
  return best;
}

}  // namespace

SimplexResult minimize_simplex(const Word& target, const std::vector<Word>& conjugators,
                               const SearchConfig& cfg) {
  if (target.is_identity()) throw IdentityTarget("simplex minimization over conjugates of the identity");
  if (conjugators.empty()) throw Error("no conjugators");
  JointResult best = joint_minimize({target}, conjugators, cfg);
  AlgebraElement avg = conjugate_average({target}, conjugators, best.weights).per_target.front();
  return SimplexResult{std::move(best.weights), estimate(avg, cfg.bounds)};
}

// ---------------------------------------------------------------------------
// Certificate search

namespace {

std::vector<Word> default_seeds(const GroupDescriptor& desc) {
  // Generators first, then length-2 words: short seeds keep conjugate
  // supports small.
  std::vector<Word> out;
  for (const Word& w : ball(desc, 2)) {
    if (!w.is_identity()) out.push_back(w);
  }
  return out;
}

std::vector<std::vector<Word>> build_pools(const GroupDescriptor& desc, const SearchConfig& cfg) {
  std::vector<std::vector<Word>> pools;
  switch (cfg.strategy) {
    case PoolStrategy::geometric: {
      std::vector<Word> seeds = cfg.seeds.empty() ? default_seeds(desc) : cfg.seeds;
      for (const Word& g : seeds) {
        if (g.is_identity()) continue;
        pools.push_back(geometric_conjugators(g, cfg.max_conjugators));
      }
      break;
    }
    case PoolStrategy::random_words: {
      std::mt19937_64 rng(cfg.seed);
      std::set<Word, WordLess> seen;
      std::vector<Word> pool;
      int gens = desc.generator_count();
      int guard = 0;
      while (static_cast<int>(pool.size()) < cfg.max_conjugators && guard++ < 10000) {
        std::uint64_t len = 1 + rng() % static_cast<std::uint64_t>(std::max(1, cfg.max_candidate_length));
        std::vector<int> letters;
        for (std::uint64_t i = 0; i < len; ++i) {
          int idx = static_cast<int>(rng() % static_cast<std::uint64_t>(gens)) + 1;
          letters.push_back(rng() % 2 == 0 ? idx : -idx);
        }
        Word w = reduce(desc, letters);
        if (w.is_identity() || seen.count(w) != 0) continue;
        seen.insert(w);
        pool.push_back(w);
      }
      pools.push_back(std::move(pool));
      break;
    }
    case PoolStrategy::exhaustive: {
      std::vector<Word> pool;
      for (const Word& w : ball(desc, cfg.max_candidate_length)) {
        if (!w.is_identity()) pool.push_back(w);
      }
      pools.push_back(std::move(pool));
      break;
    }
  }
  return pools;
}

}  // namespace

SearchOutcome search_certificate(const std::vector<Word>& targets, const SearchConfig& cfg) {
  if (targets.empty()) throw Error("no targets");
  for (const Word& t : targets) {
    if (t.is_identity()) throw IdentityTarget("averaging conditions exclude the identity target");
  }
  const GroupDescriptor& desc = targets.front().descriptor();
  for (const Word& t : targets) {
    if (t.descriptor() != desc) throw GroupMismatch("targets from different groups");
  }
  if (cfg.epsilon <= 0) throw Error("epsilon must be positive");

  SearchOutcome outcome;
  bool have_best = false;
  Rational best(0);

  for (const std::vector<Word>& pool : build_pools(desc, cfg)) {
    for (int n = 1; n <= static_cast<int>(pool.size()) && n <= cfg.max_conjugators; ++n) {
      std::vector<Word> conjugators(pool.begin(), pool.begin() + n);
      JointResult result = joint_minimize(targets, conjugators, cfg);
      if (!have_best || result.value < best) {
        best = result.value;
        have_best = true;
      }
      if (result.value < cfg.epsilon) {
        outcome.certificate = Certificate{desc,
                                          targets,
                                          conjugators,
                                          result.weights,
                                          result.per_target,
                                          cfg.epsilon,
                                          cfg.bounds};
        outcome.best_value = to_double_up(result.value);
        return outcome;
      }
    }
  }
  outcome.best_value = have_best ? to_double_up(best) : std::numeric_limits<double>::infinity();
  return outcome;
}

bool verify_certificate(const Certificate& cert) {
  if (cert.targets.empty()) throw MalformedCertificate("certificate has no targets");
  if (cert.conjugators.empty()) throw MalformedCertificate("certificate has no conjugators");
  for (const Word& t : cert.targets) {
    if (t.descriptor() != cert.descriptor) throw MalformedCertificate("target descriptor mismatch");
    if (t.is_identity()) throw MalformedCertificate("identity target");
  }
  for (const Word& s : cert.conjugators) {
    if (s.descriptor() != cert.descriptor) throw MalformedCertificate("conjugator descriptor mismatch");
  }
  if (cert.epsilon <= 0) throw MalformedCertificate("epsilon must be positive");
  try {
    check_weights(cert.weights, cert.conjugators.size());
  } catch (const WeightError& e) {
    throw MalformedCertificate(e.what());
  }
  if (cert.target_upper_bounds.size() != cert.targets.size())
    throw MalformedCertificate("per-target bound count mismatch");

  // Re-derive every bound from scratch; stored bounds are advisory.
  std::vector<Rational> recomputed;
  joint_upper(cert.targets, cert.conjugators, cert.weights, cheap_bounds(cert.bounds), &recomputed);
  for (const Rational& u : recomputed) {
    if (!(u < cert.epsilon)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dixmier averaging

DixmierReport dixmier_average(const AlgebraElement& a, const SearchConfig& cfg) {
  if (a.mode() != ScalarMode::exact) throw ModeMismatch("dixmier_average requires exact mode");
  const GroupDescriptor& desc = a.descriptor();
  Word e = Word::identity(desc);

  DixmierReport report{false, trace(a).re(), {}, a};
  AlgebraElement target = AlgebraElement::delta(e, trace(a));
  AlgebraElement current = a;

  // Averaging doubles supports, so in-loop certificates stay with the
  // formula-grade methods; moment depth is capped where half-powers
  // would already need quadratic convolutions.
  BoundConfig step_bounds = cheap_bounds(cfg.bounds);
  step_bounds.power_depth = 0;
  step_bounds.moment_depth = std::min(step_bounds.moment_depth, 2);
  step_bounds.radius = std::min(step_bounds.radius, 6);

  auto distance_estimate = [&](const AlgebraElement& x) { return estimate(sub(x, target), step_bounds); };
  auto distance_upper = [&](const AlgebraElement& x) {
    return certified_upper_bound(sub(x, target), step_bounds).value;
  };

  report.steps.push_back({e, distance_estimate(current)});
  Rational current_upper = distance_upper(current);
  if (sub(current, target).is_zero() || current_upper < cfg.epsilon) {
    report.success = true;
    report.final_element = current;
    return report;
  }

  std::vector<Word> pool;
  pool.push_back(e);  // the no-op candidate keeps the sequence monotone
  for (const std::vector<Word>& p : build_pools(desc, cfg)) pool.insert(pool.end(), p.begin(), p.end());

  Scalar half = Scalar::exact(Rational(1, 2));
  for (int step = 0; step < cfg.max_conjugators; ++step) {
    Rational best_upper = current_upper;
    std::size_t best_idx = 0;
    AlgebraElement best_next = current;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      AlgebraElement conjugated(desc, ScalarMode::exact);
      for (const auto& [w, c] : current.terms()) conjugated.accumulate(conjugate(pool[i], w), c);
      AlgebraElement next = scale(half, add(current, conjugated));
      Rational u = distance_upper(next);
      if (u < best_upper) {  // strict: ties keep the lowest candidate index
        best_upper = u;
        best_idx = i;
        best_next = std::move(next);
      }
    }
    current = std::move(best_next);
    current_upper = best_upper;
    report.steps.push_back({pool[best_idx], distance_estimate(current)});
    if (current_upper < cfg.epsilon) {
      report.success = true;
      break;
    }
  }
  report.final_element = current;
  return report;
}

}  // namespace powers
