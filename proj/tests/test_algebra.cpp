#include <doctest.h>

#include "powers/algebra.hpp"
#include "powers/errors.hpp"
#include "powers/json_io.hpp"
#include "test_helpers.hpp"

using namespace powers;
using powers::testing::random_element;
using powers::testing::random_word;

namespace {

const GroupDescriptor& f2() {
  static GroupDescriptor g = GroupDescriptor::free_group(2);
  return g;
}

bool equal(const AlgebraElement& a, const AlgebraElement& b) { return sub(a, b).is_zero(); }

}  // namespace

TEST_CASE("linear operations keep the support zero-free") {
  Word a = parse_word("a", f2()), b = parse_word("b", f2());
  AlgebraElement da = AlgebraElement::delta(a);
  CHECK(add(da, scale(Scalar::exact_int(-1), da)).is_zero());
  CHECK(scale(Scalar::exact_int(0), da).is_zero());
  CHECK(add(da, AlgebraElement::delta(b)).support_size() == 2);
  CHECK(da.degree() == 1);
  CHECK(add(da, AlgebraElement::delta(mul(a, b))).degree() == 2);
}

TEST_CASE("convolution examples") {
  Word a = parse_word("a", f2());
  AlgebraElement sym = parse_element("a+A", f2());
  AlgebraElement prod = convolve(sym, AlgebraElement::delta(a));
  CHECK(equal(prod, parse_element("aa+e", f2())));

  AlgebraElement x = parse_element("(1/3)(ab+B)-2a", f2());
  CHECK(equal(convolve(AlgebraElement::delta(Word::identity(f2())), x), x));
  CHECK(equal(convolve(x, AlgebraElement::delta(Word::identity(f2()))), x));

  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  AlgebraElement d1 = parse_element("(1)", z);
  AlgebraElement dm1 = parse_element("(-1)", z);
  CHECK(equal(convolve(d1, dm1), parse_element("e", z)));
}

TEST_CASE("convolution budget") {
  AlgebraElement big(f2(), ScalarMode::exact);
  for (const Word& w : ball(f2(), 3)) big.accumulate(w, Scalar::exact_int(1));
  CHECK_THROWS_AS(convolve(big, big, 10), BudgetExceeded);
}

TEST_CASE("adjoint is an involutive antihomomorphism") {
  Word g = parse_word("ab", f2());
  Scalar c = Scalar::exact(Rational(2), Rational(3));  // 2 + 3i
  AlgebraElement cg = AlgebraElement::delta(g, c);
  AlgebraElement star = adjoint(cg);
  CHECK(star.coefficient(inv(g)) == c.conj());

  AlgebraElement sym = parse_element("ab+BA", f2());
  CHECK(equal(adjoint(sym), sym));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    AlgebraElement x = random_element(rng, f2(), 4, 3);
    AlgebraElement y = random_element(rng, f2(), 4, 3);
    CHECK(equal(adjoint(adjoint(x)), x));
    CHECK(equal(adjoint(convolve(x, y)), convolve(adjoint(y), adjoint(x))));
  }
}

TEST_CASE("trace reads the identity coefficient and is tracial") {
  CHECK(trace(parse_element("e", f2())) == Scalar::exact_int(1));
  CHECK(trace(parse_element("ab", f2())).is_zero());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    AlgebraElement x = random_element(rng, f2(), 4, 3);
    AlgebraElement y = random_element(rng, f2(), 4, 3);
    CHECK(trace(convolve(x, y)) == trace(convolve(y, x)));
    // Parseval: trace(x* x) = sum |coeff|^2, exactly.
    CHECK(trace(convolve(adjoint(x), x)).re() == l2_squared(x));
    // Distributivity.
    AlgebraElement z = random_element(rng, f2(), 3, 2);
    CHECK(equal(convolve(x, add(y, z)), add(convolve(x, y), convolve(x, z))));
  }
}

TEST_CASE("l1 and l2") {
  // Uniform average of n distinct conjugates: l1 = 1, l2^2 = 1/n.
  Word a = parse_word("a", f2()), b = parse_word("b", f2());
  AlgebraElement avg(f2(), ScalarMode::exact);
  Word s = Word::identity(f2());
  for (int k = 0; k < 4; ++k) {
    avg.accumulate(conjugate(s, a), Scalar::exact(Rational(1) / Rational(4)));
    s = mul(s, b);
  }
  CHECK(avg.support_size() == 4);
  CHECK(l1_norm_upper(avg) == 1);
  CHECK(l2_squared(avg) == Rational(1) / Rational(4));

  AlgebraElement dg = AlgebraElement::delta(parse_word("ab", f2()));
  CHECK(l1_norm_upper(dg) == 1);
  CHECK(l2_squared(dg) == 1);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    AlgebraElement x = random_element(rng, f2(), 4, 3);
    CHECK(l2_norm(x) <= l1_norm(x) + 1e-12);
  }
}

TEST_CASE("mode discipline") {
  AlgebraElement ex = parse_element("a", f2());
  AlgebraElement fl = to_float(ex);
  CHECK(fl.mode() == ScalarMode::floating);
  CHECK_THROWS_AS(add(ex, fl), ModeMismatch);
  CHECK_THROWS_AS(convolve(ex, fl), ModeMismatch);
  CHECK_THROWS_AS(l2_squared(fl), ModeMismatch);
  // Round-trip through float of dyadic values is lossless.
  AlgebraElement dyadic = parse_element("(1/4)(a+b)+(3/8)e", f2());
  CHECK(equal(to_exact(to_float(dyadic)), dyadic));
}

TEST_CASE("stratum restriction") {
  AlgebraElement x = parse_element("(1/2)e + a + 3ab + (1/5)ba", f2());
  CHECK(stratum(x, 0).support_size() == 1);
  CHECK(stratum(x, 1).support_size() == 1);
  CHECK(stratum(x, 2).support_size() == 2);
  CHECK(stratum(x, 3).is_zero());
}

TEST_CASE("inline element grammar") {
  AlgebraElement kesten = parse_element("(1/4)(a+A+b+B)", f2());
  CHECK(kesten.support_size() == 4);
  CHECK(kesten.coefficient(parse_word("A", f2())) == Scalar::exact(Rational(1) / Rational(4)));

  AlgebraElement mixed = parse_element("2a - 3/2 b + e - 1", f2());
  CHECK(mixed.coefficient(parse_word("a", f2())) == Scalar::exact_int(2));
  CHECK(mixed.coefficient(parse_word("b", f2())) == Scalar::exact(Rational(-3) / Rational(2)));
  CHECK(mixed.coefficient(Word::identity(f2())).is_zero());

  GroupDescriptor z = GroupDescriptor::free_abelian(1);
  AlgebraElement walk = parse_element("(1/2)((1)+(-1))", z);
  CHECK(walk.support_size() == 2);
  CHECK(walk.coefficient(parse_word("(-1)", z)) == Scalar::exact(Rational(1) / Rational(2)));

  GroupDescriptor p = GroupDescriptor::parse("F2xZ");
  AlgebraElement pe = parse_element("e|(1) + 2 a|e", p);
  CHECK(pe.support_size() == 2);

  CHECK(parse_element("0", f2()).is_zero());
  CHECK(parse_element("a-a", f2()).is_zero());
  CHECK_THROWS_AS(parse_element("a+*b", f2()), ParseError);
  CHECK_THROWS_AS(parse_element("(1/0)a", f2()), ParseError);
  CHECK_THROWS_AS(parse_element("((a)", f2()), ParseError);
}

TEST_CASE("element text rendering") {
  AlgebraElement x = parse_element("a - (1/2)b", f2());
  CHECK(to_text(x) == "(1)a + (-1/2)b");
  CHECK(to_text(AlgebraElement::zero(f2(), ScalarMode::exact)) == "0");
}

TEST_CASE("element JSON round-trips") {
  AlgebraElement exact = parse_element("(1/3)(a+A) - 7/5 ba", f2());
  CHECK(equal(element_from_json(element_to_json(exact)), exact));
  CHECK(element_to_json(element_from_json(element_to_json(exact))).dump() ==
        element_to_json(exact).dump());

  AlgebraElement fl = to_float(parse_element("(1/4)a - 2b", f2()));
  AlgebraElement fl_back = element_from_json(element_to_json(fl));
  CHECK(fl_back.mode() == ScalarMode::floating);
  CHECK(sub(to_exact(fl_back), to_exact(fl)).is_zero());

  AlgebraElement cplx(f2(), ScalarMode::exact);
  cplx.accumulate(parse_word("ab", f2()), Scalar::exact(Rational(1) / Rational(2), Rational(-3)));
  CHECK(equal(element_from_json(element_to_json(cplx)), cplx));

  GroupDescriptor p = GroupDescriptor::parse("F2xZ");
  AlgebraElement pe = parse_element("e|(1) + 2 ab|(-3)", p);
  CHECK(equal(element_from_json(element_to_json(pe)), pe));

  CHECK_THROWS_AS(element_from_json(nlohmann::json{{"group", descriptor_to_json(f2())},
                                                   {"mode", "nope"},
                                                   {"terms", nlohmann::json::array()}}),
                  ParseError);
}
