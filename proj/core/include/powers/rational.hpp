#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace powers {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parses "p", "p/q", or a decimal like "0.25" into a canonical rational.
Rational parse_rational(std::string_view text);

/// Canonical "p" / "p/q" form; round-trips through parse_rational bit-exactly.
std::string format_rational(const Rational& r);

/// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double x);

/// Nearest double not above (resp. not below) r. Used when certified
/// rational bounds are reported through a double interface.
double to_double_down(const Rational& r);
double to_double_up(const Rational& r);

/// Rational s with s^2 <= r (resp. >= r), within 2^-48 of sqrt(r). r >= 0.
Rational sqrt_down(const Rational& r);
Rational sqrt_up(const Rational& r);

/// Rational s with s^n <= r (resp. >= r), within 2^-48 of r^(1/n).
/// Requires r >= 0 and n >= 1.
Rational nth_root_down(const Rational& r, unsigned n);
Rational nth_root_up(const Rational& r, unsigned n);

Rational pow_rational(const Rational& base, unsigned exp);

/// Best rational approximation of x with denominator <= max_denominator
/// (continued-fraction convergents/semiconvergents).
Rational snap_to_rational(double x, std::uint64_t max_denominator);

}  // namespace powers
