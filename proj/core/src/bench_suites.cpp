#include "powers/bench_suites.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "powers/errors.hpp"
#include "powers/powers_engine.hpp"

namespace powers {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kSqrt3Over2 = 0.8660254037844386;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

Rational ratio(long p, long q) { return Rational(p) / Rational(q); }

// Deterministic random words and positive/signed elements for the
// property suites; raw engine bits keep results platform-stable.
Word random_word(std::mt19937_64& rng, const GroupDescriptor& desc, int max_length, bool allow_identity) {
  int gens = desc.generator_count();
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uint64_t len = rng() % static_cast<std::uint64_t>(max_length + 1);
    std::vector<int> letters;
    for (std::uint64_t i = 0; i < len; ++i) {
      int idx = static_cast<int>(rng() % static_cast<std::uint64_t>(gens)) + 1;
      letters.push_back(rng() % 2 == 0 ? idx : -idx);
    }
    Word w = reduce(desc, letters);
    if (allow_identity || !w.is_identity()) return w;
  }
  return Word::generator(desc, 0);
}

AlgebraElement random_positive_combination(std::mt19937_64& rng, const GroupDescriptor& desc, int max_terms,
                                           int max_length) {
  AlgebraElement out(desc, ScalarMode::exact);
  std::uint64_t terms = 1 + rng() % static_cast<std::uint64_t>(max_terms);
  for (std::uint64_t i = 0; i < terms; ++i) {
    Rational c = ratio(1 + static_cast<long>(rng() % 8), 1 + static_cast<long>(rng() % 4));
    out.accumulate(random_word(rng, desc, max_length, true), Scalar::exact(c));
  }
  if (out.is_zero()) out.accumulate(Word::identity(desc), Scalar::exact(Rational(1)));
  return out;
}

AlgebraElement random_signed_element(std::mt19937_64& rng, const GroupDescriptor& desc, int max_terms,
                                     int max_length) {
  AlgebraElement out(desc, ScalarMode::exact);
  std::uint64_t terms = 1 + rng() % static_cast<std::uint64_t>(max_terms);
  for (std::uint64_t i = 0; i < terms; ++i) {
    long num = 1 + static_cast<long>(rng() % 8);
    if (rng() % 2 == 0) num = -num;
    Rational c = ratio(num, 1 + static_cast<long>(rng() % 4));
    out.accumulate(random_word(rng, desc, max_length, true), Scalar::exact(c));
  }
  return out;
}

BoundConfig small_bounds() {
  BoundConfig cfg;
  cfg.radius = 3;
  cfg.max_iterations = 40;
  cfg.moment_depth = 2;
  cfg.power_depth = 1;
  return cfg;
}

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << "FAILED: " << what;
    }
  }
  void note(const std::string& what) {
    if (detail.tellp() > 0) detail << "; ";
    detail << what;
  }
};

// --- Suite 1: Kesten bracket at default budgets ---------------------------

SuiteResult suite_kesten() {
  auto start = Clock::now();
  Check check;
  GroupDescriptor f2 = GroupDescriptor::free_group(2);
  AlgebraElement kesten = parse_element("(1/4)(a+A+b+B)", f2);
  NormEstimate est = estimate(kesten, BoundConfig{});
  check.note("bracket [" + fmt(est.lower) + ", " + fmt(est.upper) + "] via " + est.lower_method + "/" +
             est.upper_method);
  check.require(est.lower >= 0.86, "lower >= 0.86");
  check.require(est.upper <= 0.92, "upper <= 0.92");
  check.require(est.lower <= kSqrt3Over2 && kSqrt3Over2 <= est.upper, "bracket contains sqrt(3)/2");
  double secs = seconds_since(start);
  check.require(secs <= 30.0, "runtime <= 30 s");
  return {"kesten", check.pass, check.detail.str(), secs};
}

// --- Suite 2: two-generator sum -------------------------------------------

SuiteResult suite_two_generator() {
  auto start = Clock::now();
  Check check;
  GroupDescriptor f2 = GroupDescriptor::free_group(2);
  AlgebraElement a = parse_element("a+b", f2);
  NormEstimate est = estimate(a, BoundConfig{});
  check.note("bracket [" + fmt(est.lower) + ", " + fmt(est.upper) + "]");
  check.require(est.lower <= 2.0 && 2.0 <= est.upper, "bracket contains 2.0");
  check.require(est.upper - est.lower <= 0.1, "width <= 0.1");
  double secs = seconds_since(start);
  check.require(secs <= 60.0, "runtime <= 60 s");
  return {"two-generator", check.pass, check.detail.str(), secs};
}

// --- Suite 3: averaged-conjugate decay certificates ------------------------

SuiteResult suite_powers_decay() {
  auto start = Clock::now();
  Check check;
  GroupDescriptor f2 = GroupDescriptor::free_group(2);
  Word a = parse_word("a", f2);

  SearchConfig cfg;
  cfg.epsilon = ratio(19, 20);
  cfg.max_conjugators = 4;
  SearchOutcome loose = search_certificate({a}, cfg);
  check.require(loose.certificate.has_value(), "certificate found at epsilon 0.95");
  if (loose.certificate) {
    check.note("eps 0.95: n = " + std::to_string(loose.certificate->conjugators.size()) + ", value " +
               fmt(loose.best_value));
    check.require(loose.certificate->conjugators.size() <= 4, "n <= 4");
    check.require(verify_certificate(*loose.certificate), "certificate re-verifies");
  }

  cfg.epsilon = ratio(3, 5);
  cfg.max_conjugators = 12;
  SearchOutcome tight = search_certificate({a}, cfg);
  check.require(tight.certificate.has_value(), "certificate found at epsilon 0.60");
  if (tight.certificate) {
    check.note("eps 0.60: n = " + std::to_string(tight.certificate->conjugators.size()) + ", value " +
               fmt(tight.best_value));
    check.require(tight.certificate->conjugators.size() <= 12, "n <= 12");
    check.require(verify_certificate(*tight.certificate), "certificate re-verifies");
  }
  double secs = seconds_since(start);
  check.require(secs <= 300.0, "runtime <= 5 min");
  return {"powers-decay", check.pass, check.detail.str(), secs};
}

// --- Suite 4: one conjugator family, several targets -----------------------

SuiteResult suite_multi_target() {
  auto start = Clock::now();
  Check check;
  GroupDescriptor f2 = GroupDescriptor::free_group(2);
  std::vector<Word> targets{parse_word("a", f2), parse_word("b", f2), parse_word("ab", f2)};

  SearchConfig cfg;
  cfg.epsilon = ratio(19, 20);
  SearchOutcome outcome = search_certificate(targets, cfg);
  check.require(outcome.certificate.has_value(), "joint certificate found at epsilon 0.95");
  if (outcome.certificate) {
    const Certificate& cert = *outcome.certificate;
    check.note("n = " + std::to_string(cert.conjugators.size()) + ", worst value " + fmt(outcome.best_value));
    check.require(cert.targets.size() == 3, "all three targets certified");
    for (const Rational& u : cert.target_upper_bounds) {
      check.require(u < cert.epsilon, "per-target bound below epsilon");
    }
    check.require(verify_certificate(cert), "certificate re-verifies");
  }
  double secs = seconds_since(start);
  check.require(secs <= 300.0, "runtime <= 5 min");
  return {"multi-target", check.pass, check.detail.str(), secs};
}

// --- Suite 5: central targets obstruct averaging ---------------------------

SuiteResult suite_central_obstruction() {
  auto start = Clock::now();
  Check check;
  GroupDescriptor g = GroupDescriptor::parse("F2xZ");
  Word t = parse_word("e | (1)", g);
  AlgebraElement delta_t = AlgebraElement::delta(t);

  // Every conjugate average is exactly delta_t, whatever the choices.
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    std::uint64_t n = 1 + rng() % 5;
    std::vector<Word> conjugators;
    std::vector<Rational> weights;
    Rational sum(0);
    for (std::uint64_t k = 0; k < n; ++k) {
      conjugators.push_back(random_word(rng, g, 3, true));
      Rational w = ratio(1 + static_cast<long>(rng() % 6), 1 + static_cast<long>(rng() % 3));
      weights.push_back(w);
      sum += w;
    }
    for (Rational& w : weights) w /= sum;
    ConjugateAverage avg = conjugate_average({t}, conjugators, weights);
    check.require(sub(avg.per_target.front(), delta_t).is_zero(), "conjugate average equals delta_t exactly");
  }

  BoundConfig bounds;
  bounds.radius = 6;
  NormEstimate est = estimate(delta_t, bounds);
  check.note("bracket [" + fmt(est.lower) + ", " + fmt(est.upper) + "]");
  check.require(est.upper == 1.0, "upper bound exactly 1");
  check.require(est.lower >= 1.0 - 2e-9, "lower bound within tolerance of 1");

  SearchConfig cfg;
  cfg.epsilon = ratio(99, 100);
  cfg.max_conjugators = 6;
  cfg.bounds = bounds;
  SearchOutcome outcome = search_certificate({t}, cfg);
  check.require(!outcome.certificate.has_value(), "no certificate exists for a central target");
  check.require(outcome.best_value == 1.0, "best achievable value is exactly 1");

  double secs = seconds_since(start);
  check.require(secs <= 10.0, "runtime <= 10 s");
  return {"central-obstruction", check.pass, check.detail.str(), secs};
}

// --- Suite 6: positive-cone and symmetrization inequalities ----------------

SuiteResult suite_cone_symmetrization() {
  auto start = Clock::now();
  Check check;
  BoundConfig bounds = small_bounds();
  const double slack = 1e-9;

  std::vector<GroupDescriptor> groups{GroupDescriptor::free_group(2), GroupDescriptor::free_abelian(1),
                                      GroupDescriptor::parse("F2xZ")};
  std::mt19937_64 rng(41);
  int cases = 0, violations = 0, bracket_violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupDescriptor& desc = groups[trial % groups.size()];
    AlgebraElement x = random_positive_combination(rng, desc, 3, 3);
    AlgebraElement y = random_positive_combination(rng, desc, 3, 3);
    AlgebraElement xsym = add(x, adjoint(x));

    NormEstimate ex = estimate(x, bounds);
    NormEstimate exy = estimate(add(x, y), bounds);
    NormEstimate esym = estimate(xsym, bounds);
    for (const NormEstimate* e : {&ex, &exy, &esym}) {
      if (e->lower > e->upper + slack) ++bracket_violations;
    }

    bool ok = ex.lower <= exy.upper + slack       // ||x|| <= ||x + y||
              && ex.lower <= esym.upper + slack   // ||x|| <= ||x + x*||
              && esym.lower <= 2 * ex.upper + slack;
    ++cases;
    if (!ok) ++violations;
  }
  check.note(std::to_string(cases) + " randomized positive combinations");
  check.require(cases >= 1000, ">= 1000 cases");
  check.require(violations == 0, "no chain inequality violated (" + std::to_string(violations) + ")");
  check.require(bracket_violations == 0,
                "no lower > upper + 1e-9 (" + std::to_string(bracket_violations) + ")");
  double secs = seconds_since(start);
  check.require(secs <= 300.0, "runtime <= 5 min");
  return {"cone-symmetrization", check.pass, check.detail.str(), secs};
}

// --- Suite 7: Dixmier averaging toward the trace ----------------------------

SuiteResult suite_dixmier() {
  auto start = Clock::now();
  Check check;

  GroupDescriptor f2 = GroupDescriptor::free_group(2);
  AlgebraElement a = parse_element("a+A", f2);
  SearchConfig cfg;
  cfg.epsilon = ratio(1, 2);
  cfg.max_conjugators = 16;
  cfg.bounds.radius = 6;
  DixmierReport report = dixmier_average(a, cfg);
  check.require(report.trace_value == 0, "tau0(a) = 0");
  check.require(report.success, "certified distance driven below 0.5");
  if (!report.steps.empty()) {
    check.note("steps " + std::to_string(report.steps.size() - 1) + ", final upper " +
               fmt(report.steps.back().distance.upper));
    for (std::size_t i = 1; i < report.steps.size(); ++i) {
      check.require(report.steps[i].distance.upper <= report.steps[i - 1].distance.upper + 1e-12,
                    "upper-bound sequence nonincreasing");
    }
  }

  GroupDescriptor g = GroupDescriptor::parse("F2xZ");
  AlgebraElement central = AlgebraElement::delta(parse_word("e | (1)", g));
  SearchConfig central_cfg;
  central_cfg.epsilon = ratio(1, 2);
  central_cfg.max_conjugators = 6;
  central_cfg.bounds.radius = 4;
  DixmierReport stalled = dixmier_average(central, central_cfg);
  check.require(!stalled.success, "central element reports failure");
  for (const DixmierStep& s : stalled.steps) {
    check.require(s.distance.upper == 1.0 && s.distance.lower == 1.0, "central distance stays exactly 1");
  }

  double secs = seconds_since(start);
  check.require(secs <= 300.0, "runtime <= 5 min");
  return {"dixmier", check.pass, check.detail.str(), secs};
}

// --- Suite 8: soundness regression ------------------------------------------

SuiteResult suite_soundness() {
  auto start = Clock::now();
  Check check;
  BoundConfig bounds = small_bounds();

  std::vector<GroupDescriptor> groups{GroupDescriptor::free_group(2), GroupDescriptor::free_group(3),
                                      GroupDescriptor::free_abelian(1), GroupDescriptor::free_abelian(2),
                                      GroupDescriptor::parse("F2xZ")};
  std::mt19937_64 rng(97);
  int bracket_violations = 0, identity_violations = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const GroupDescriptor& desc = groups[trial % groups.size()];
    AlgebraElement x = random_signed_element(rng, desc, 4, 3);
    AlgebraElement y = random_signed_element(rng, desc, 4, 3);

    if (!x.is_zero()) {
      NormEstimate e = estimate(x, bounds);
      if (e.lower > e.upper + 1e-9) ++bracket_violations;
    }

    // Exact-mode identities at zero tolerance.
    if (!(trace(convolve(x, y)) == trace(convolve(y, x)))) ++identity_violations;
    if (!(trace(convolve(adjoint(x), x)).re() == l2_squared(x))) ++identity_violations;
    AlgebraElement lhs = adjoint(convolve(x, y));
    AlgebraElement rhs = convolve(adjoint(y), adjoint(x));
    if (!sub(lhs, rhs).is_zero()) ++identity_violations;
  }
  check.note("400 randomized elements across 5 backends");
  check.require(bracket_violations == 0,
                "no lower > upper + 1e-9 (" + std::to_string(bracket_violations) + ")");
  check.require(identity_violations == 0,
                "exact algebra identities hold (" + std::to_string(identity_violations) + ")");
  double secs = seconds_since(start);
  check.require(secs <= 300.0, "runtime <= 5 min");
  return {"soundness", check.pass, check.detail.str(), secs};
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"kesten",      "two-generator",       "powers-decay", "multi-target",
          "central-obstruction", "cone-symmetrization", "dixmier",      "soundness"};
}

SuiteResult run_suite(const std::string& name) {
  if (name == "kesten") return suite_kesten();
  if (name == "two-generator") return suite_two_generator();
  if (name == "powers-decay") return suite_powers_decay();
  if (name == "multi-target") return suite_multi_target();
  if (name == "central-obstruction") return suite_central_obstruction();
  if (name == "cone-symmetrization") return suite_cone_symmetrization();
  if (name == "dixmier") return suite_dixmier();
  if (name == "soundness") return suite_soundness();
  throw Error("unknown suite: '" + name + "'");
}

std::vector<SuiteResult> run_suites(const std::string& which) {
  std::vector<SuiteResult> out;
  if (which == "all") {
    for (const std::string& name : suite_names()) out.push_back(run_suite(name));
  } else {
    out.push_back(run_suite(which));
  }
  return out;
}

}  // namespace powers
