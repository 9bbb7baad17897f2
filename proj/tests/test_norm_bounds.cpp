#include <doctest.h>

#include <cmath>
#include <map>

#include "powers/errors.hpp"
#include "powers/norm_bounds.hpp"
#include "test_helpers.hpp"

using namespace powers;
using powers::testing::random_element;
using powers::testing::random_word;

namespace {

const GroupDescriptor& f2() {
  static GroupDescriptor g = GroupDescriptor::free_group(2);
  return g;
}

AlgebraElement kesten_element() { return parse_element("(1/4)(a+A+b+B)", f2()); }

constexpr double kSqrt3Over2 = 0.8660254037844386;

// Independent moment oracle for the generator average on F_2: closed
// walks on the 4-regular tree counted by a radial transfer recursion,
// entirely separate from the convolution pipeline.
Rational kesten_trace_power(int exponent) {
  std::map<int, Integer> level{{0, Integer(1)}};
  for (int step = 0; step < exponent; ++step) {
    std::map<int, Integer> next;
    for (const auto& [d, count] : level) {
      if (d == 0) {
        next[1] += 4 * count;
      } else {
        next[d - 1] += count;
        next[d + 1] += 3 * count;
      }
    }
    level = std::move(next);
  }
  Integer walks = level.count(0) != 0 ? level[0] : Integer(0);
  Integer denom = 1;
  for (int i = 0; i < exponent; ++i) denom *= 4;
  return Rational(walks) / Rational(denom);
}

// Independent compression oracle: the best Rayleigh quotient over
// ball(R) for the generator average is radial, so a dense power
// iteration on the (R+2)-level radial reduction bounds it.
double kesten_ball_cap(int radius) {
  int n = radius + 2;
  std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
  for (int d = 0; d + 1 < n; ++d) {
    double off = d == 0 ? 2.0 / 4.0 : std::sqrt(3.0) / 4.0;
    J[d][d + 1] = off;
    J[d + 1][d] = off;
  }
  // M = (J^2) restricted to levels 0..radius
  int m = radius + 1;
  std::vector<std::vector<double>> M(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k) M[i][j] += J[i][k] * J[k][j];
  std::vector<double> x(m, 1.0);
  double q = 0.0;
  for (int it = 0; it < 3000; ++it) {
    std::vector<double> y(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) y[i] += M[i][j] * x[j];
    double xx = 0, xy = 0, yy = 0;
    for (int i = 0; i < m; ++i) {
      xx += x[i] * x[i];
      xy += x[i] * y[i];
      yy += y[i] * y[i];
    }
    q = xy / xx;
    double ny = std::sqrt(yy);
    for (int i = 0; i < m; ++i) x[i] = y[i] / ny;
  }
  return std::sqrt(q);
}

}  // namespace

TEST_CASE("moment lower bounds") {
  // Unitaries: b = a* a = delta_e, every moment is 1.
  Word g = parse_word("abA", f2());
  Rational m = lower_bound_moments(AlgebraElement::delta(g), 4);
  CHECK(m <= 1);
  CHECK(to_double_down(m) >= 1.0 - 1e-9);

  // Kesten depth 1: trace(a* a) = 1/4, root = 1/2 exactly.
  CHECK(lower_bound_moments(kesten_element(), 1) == Rational(1) / Rational(2));

  // Z walk depth 1: trace = 1/2.
  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  Rational zi = lower_bound_moments(parse_element("(1/2)((1)+(-1))", z), 1);
  CHECK(zi * zi <= Rational(1) / Rational(2));
  CHECK(to_double_down(zi) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

  CHECK_THROWS_AS(lower_bound_moments(to_float(kesten_element()), 2), ModeMismatch);
}

TEST_CASE("kesten moments agree with the walk-count oracle") {
  // trace((a*a)^m) = trace(a^{2m}) must match the radial transfer count.
  AlgebraElement a = kesten_element();
  AlgebraElement b = convolve(adjoint(a), a);
  AlgebraElement p = b;
  for (int m = 1; m <= 5; ++m) {
    if (m > 1) p = convolve(p, b);
    CHECK(trace(p).re() == kesten_trace_power(2 * m));
  }
  // And the certified root is below the true norm.
  Rational bound = lower_bound_moments(a, 6);
  CHECK(to_double_down(bound) < kSqrt3Over2);
  CHECK(to_double_down(bound) > 0.60);  // m = 6 reaches ~0.69
}

TEST_CASE("moment bounds are nondecreasing in depth") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    AlgebraElement x = random_element(rng, f2(), 3, 2);
    if (x.is_zero()) continue;
    double prev = 0.0;
    for (int depth = 1; depth <= 4; ++depth) {
      double v = to_double_down(lower_bound_moments(x, depth));
      CHECK(v >= prev - 1e-9);
      prev = std::max(prev, v);
    }
  }
}

TEST_CASE("l1-of-powers upper bound") {
  Word g = parse_word("ba", f2());
  CHECK(to_double_up(upper_bound_l1_power(AlgebraElement::delta(g), 2)) == doctest::Approx(1.0).epsilon(1e-9));

  // Nonnegative coefficients make l1 multiplicative, so the Kesten bound
  // sticks at 1 for every depth (k = 2 included).
  CHECK(upper_bound_l1_power(kesten_element(), 0) == 1);
  CHECK(upper_bound_l1_power(kesten_element(), 2) == 1);

  // Soundness under sign cancellation: x = (1/2)(a - A) has norm exactly
  // 1 and the alternating powers keep l1((x*x)^{2^k}) = 1 on the nose.
  AlgebraElement x = parse_element("(1/2)(a-A)", f2());
  CHECK(upper_bound_l1_power(x, 2) == 1);
}

TEST_CASE("l1-of-powers is nonincreasing in depth") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    AlgebraElement x = random_element(rng, f2(), 3, 2);
    if (x.is_zero()) continue;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 2; ++k) {
      double v = to_double_up(upper_bound_l1_power(x, k));
      CHECK(v <= prev + 1e-9);
      prev = std::min(prev, v);
    }
  }
}

TEST_CASE("budget errors are explicit, never silent truncation") {
  CHECK_THROWS_AS(upper_bound_l1_power(kesten_element(), 3, 1000), BudgetExceeded);
  CHECK_THROWS_AS(lower_bound_moments(kesten_element(), 10, 200), BudgetExceeded);
  BoundConfig tiny;
  tiny.support_cap = 50;
  tiny.radius = 6;
  CHECK_THROWS_AS(lower_bound_power(kesten_element(), tiny), BudgetExceeded);
}

TEST_CASE("float-mode input is exactified losslessly") {
  AlgebraElement kf = to_float(kesten_element());
  BoundConfig cfg;
  cfg.radius = 4;
  cfg.moment_depth = 2;
  NormEstimate est = estimate(kf, cfg);
  CHECK(est.lower <= kSqrt3Over2);
  CHECK(est.upper >= kSqrt3Over2);
  CHECK(est.upper <= kSqrt3Over2 + 1e-6);
}

TEST_CASE("haagerup stratified bound") {
  CHECK(upper_bound_haagerup(parse_element("e", f2())) == 1);
  Word g = parse_word("abab", f2());
  CHECK(upper_bound_haagerup(AlgebraElement::delta(g)) == 5);  // (d+1), d = 4
  CHECK(upper_bound_haagerup(kesten_element()) == 1);          // 2 * l2 = 2 * 1/2
  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  CHECK_THROWS_AS(upper_bound_haagerup(parse_element("(1)", z)), WrongBackend);
}

TEST_CASE("geometric schur bound certifies the kesten norm") {
  auto bound = upper_bound_schur(kesten_element());
  REQUIRE(bound.has_value());
  double v = to_double_up(*bound);
  CHECK(v >= kSqrt3Over2);  // soundness: never below the true norm
  CHECK(v <= 0.8661);       // beta tuning lands near 1/sqrt(3)

  // Unitaries stay at 1 within tuning tolerance.
  auto unit = upper_bound_schur(AlgebraElement::delta(parse_word("ab", f2())));
  REQUIRE(unit.has_value());
  CHECK(to_double_up(*unit) >= 1.0);
  CHECK(to_double_up(*unit) <= 1.0 + 1e-6);

  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  CHECK_THROWS_AS(upper_bound_schur(parse_element("(1)", z)), WrongBackend);
}

TEST_CASE("power-iteration lower bound") {
  BoundConfig cfg;
  cfg.radius = 4;
  // Unitary elements give quotient 1 immediately.
  double u = lower_bound_power(AlgebraElement::delta(parse_word("ab", f2())), cfg);
  CHECK(u >= 1.0 - 2e-9);
  CHECK(u <= 1.0);

  // Kesten at radius 10: the ball-compression cap is ~0.8440 (radial
  // oracle); the iteration should converge close to it and never exceed.
  cfg.radius = 10;
  double cap = kesten_ball_cap(10);
  double v = lower_bound_power(kesten_element(), cfg);
  CHECK(v <= cap + 1e-6);
  CHECK(v >= 0.83);
  CHECK(cap == doctest::Approx(0.844023).epsilon(1e-4));

  // Z walk at radius 100 passes 0.99.
  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  BoundConfig zcfg;
  zcfg.radius = 100;
  CHECK(lower_bound_power(parse_element("(1/2)((1)+(-1))", z), zcfg) >= 0.99);
}

TEST_CASE("free-position edge bounds") {
  FreeEdgeBounds kest = free_edge_bounds(kesten_element());
  REQUIRE(kest.upper.has_value());
  REQUIRE(kest.lower.has_value());
  CHECK(to_double_up(*kest.upper) >= kSqrt3Over2);
  CHECK(to_double_up(*kest.upper) <= kSqrt3Over2 + 1e-6);
  CHECK(to_double_down(*kest.lower) <= kSqrt3Over2);
  CHECK(to_double_down(*kest.lower) >= kSqrt3Over2 - 1e-9);

  FreeEdgeBounds twogen = free_edge_bounds(parse_element("a+b", f2()));
  REQUIRE(twogen.upper.has_value());
  REQUIRE(twogen.lower.has_value());
  CHECK(to_double_up(*twogen.upper) >= 2.0);
  CHECK(to_double_up(*twogen.upper) <= 2.0 + 1e-6);
  CHECK(*twogen.lower == 2);

  // Uniform average of three free conjugates: 2 sqrt(2)/3.
  AlgebraElement avg(f2(), ScalarMode::exact);
  Word a = parse_word("a", f2());
  for (int k = 1; k <= 3; ++k)
    avg.accumulate(conjugate(power(parse_word("b", f2()), k), a), Scalar::exact(Rational(1) / Rational(3)));
  FreeEdgeBounds tri = free_edge_bounds(avg);
  REQUIRE(tri.upper.has_value());
  double oracle = 2.0 * std::sqrt(2.0) / 3.0;
  CHECK(to_double_up(*tri.upper) >= oracle - 1e-12);
  CHECK(to_double_up(*tri.upper) <= oracle + 1e-6);
  CHECK(to_double_down(*tri.lower) == doctest::Approx(oracle).epsilon(1e-9));

  // Not applicable: dependent words, identity in the support, mixed
  // one-/two-sided supports, non-free backends.
  CHECK_FALSE(free_edge_bounds(parse_element("a+aa", f2())).upper.has_value());
  CHECK_FALSE(free_edge_bounds(parse_element("e+a", f2())).upper.has_value());
  CHECK_FALSE(free_edge_bounds(parse_element("a+b+B", f2())).upper.has_value());
  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  CHECK_FALSE(free_edge_bounds(parse_element("(1)+(2)", z)).upper.has_value());

  // Nonuniform weights: upper only, still sound (element norm is 1 here
  // scaled by weights; compare against the power lower bound).
  AlgebraElement nonuni = parse_element("(1/2)a + (1/3)bab + (1/6)bbabb", f2());
  FreeEdgeBounds nb = free_edge_bounds(nonuni);
  REQUIRE(nb.upper.has_value());
  CHECK_FALSE(nb.lower.has_value());
  BoundConfig small;
  small.radius = 6;
  CHECK(to_double_up(*nb.upper) + 1e-9 >= lower_bound_power(nonuni, small));
}

TEST_CASE("estimate assembles a sound bracket") {
  BoundConfig cfg;
  cfg.radius = 6;
  cfg.moment_depth = 4;

  NormEstimate unit = estimate(AlgebraElement::delta(parse_word("a", f2())), cfg);
  CHECK(unit.lower >= 1.0 - 2e-9);
  CHECK(unit.upper == 1.0);

  NormEstimate zero = estimate(AlgebraElement::zero(f2(), ScalarMode::exact), cfg);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);
  CHECK(zero.lower_method == "zero");

  NormEstimate kest = estimate(kesten_element(), cfg);
  CHECK(kest.lower <= kSqrt3Over2);
  CHECK(kest.upper >= kSqrt3Over2);
  CHECK(kest.upper - kest.lower <= 0.05);
  CHECK(kest.lower >= 0.86);
  CHECK(kest.upper <= 0.92);

  NormEstimate twogen = estimate(parse_element("a+b", f2()), cfg);
  CHECK(twogen.lower <= 2.0);
  CHECK(twogen.upper >= 2.0);
  CHECK(twogen.upper - twogen.lower <= 0.1);

  // Degradation flags: an unachievable radius skips power iteration but
  // still returns a sound bracket.
  BoundConfig big = cfg;
  big.radius = 40;
  NormEstimate degraded = estimate(kesten_element(), big);
  CHECK(degraded.lower <= degraded.upper + 1e-9);
  bool has_power = false;
  for (const auto& d : degraded.degraded) has_power = has_power || d == "power";
  CHECK(has_power);
}

TEST_CASE("estimate bracket properties on randomized elements") {
  BoundConfig cfg;
  cfg.radius = 3;
  cfg.max_iterations = 40;
  cfg.moment_depth = 2;
  cfg.power_depth = 1;

  std::mt19937_64 rng(31);
  std::vector<GroupDescriptor> groups{f2(), GroupDescriptor::free_abelian(1),
                                      GroupDescriptor::parse("F2xZ")};
  for (int trial = 0; trial < 150; ++trial) {
    const GroupDescriptor& desc = groups[trial % groups.size()];
    AlgebraElement x = random_element(rng, desc, 3, 3);
    if (x.is_zero()) continue;
    NormEstimate ex = estimate(x, cfg);
    CHECK(ex.lower <= ex.upper + 1e-9);
    // Elementary sandwich.
    CHECK(l2_norm(x) <= ex.upper + 1e-9);
    CHECK(ex.lower <= l1_norm(x) + 1e-9);
    // Unitary invariance: conjugation by a group unitary is isometric,
    // so the brackets of x and s x s^-1 must overlap.
    Word s = random_word(rng, desc, 2);
    AlgebraElement conj_x(desc, ScalarMode::exact);
    for (const auto& [w, c] : x.terms()) conj_x.accumulate(conjugate(s, w), c);
    NormEstimate ec = estimate(conj_x, cfg);
    CHECK(ex.lower <= ec.upper + 1e-9);
    CHECK(ec.lower <= ex.upper + 1e-9);
  }
}

TEST_CASE("positive-cone and symmetrization bracket inequalities") {
  BoundConfig cfg;
  cfg.radius = 3;
  cfg.max_iterations = 40;
  cfg.moment_depth = 2;
  cfg.power_depth = 1;

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    AlgebraElement x = random_element(rng, f2(), 3, 3, /*allow_negative=*/false);
    AlgebraElement y = random_element(rng, f2(), 3, 3, /*allow_negative=*/false);
    NormEstimate ex = estimate(x, cfg);
    NormEstimate exy = estimate(add(x, y), cfg);
    AlgebraElement xsym = add(x, adjoint(x));
    NormEstimate esym = estimate(xsym, cfg);
    CHECK(ex.lower <= exy.upper + 1e-9);
    CHECK(ex.lower <= esym.upper + 1e-9);
    CHECK(esym.lower <= 2 * ex.upper + 1e-9);
  }
}
