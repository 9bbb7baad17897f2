#include "powers/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "powers/errors.hpp"

namespace powers {

namespace {

Integer parse_integer(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  try {
    return Integer(std::string(text));
  } catch (const std::exception&) {
    throw ParseError("bad integer: '" + std::string(text) + "'");
  }
}

}  // namespace

Rational parse_rational(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator");
    // Division canonicalizes (gcd reduction, sign normalization).
    return Rational(num) / Rational(den);
  }
  auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    Integer whole = dot == 0 ? Integer(0) : parse_integer(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty()) return Rational(whole);
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad decimal: '" + std::string(text) + "'");
    }
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer digits = parse_integer(frac);
    bool negative = text.front() == '-';
    Rational r = Rational(abs(whole)) + Rational(digits) / Rational(scale);
    return negative ? -r : r;
  }
  return Rational(parse_integer(text));
}

std::string format_rational(const Rational& r) {
  Integer num = numerator(r);
  Integer den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error("non-finite double cannot become a rational");
  return Rational(x);
}

double to_double_down(const Rational& r) {
  double d = r.convert_to<double>();
  if (!std::isfinite(d)) return d < 0 ? d : std::numeric_limits<double>::max();
  // convert_to rounds in an unspecified direction; nudge until certified.
  while (rational_from_double(d) > r) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

double to_double_up(const Rational& r) {
  double d = r.convert_to<double>();
  if (!std::isfinite(d)) return d > 0 ? d : std::numeric_limits<double>::lowest();
  while (rational_from_double(d) < r) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

namespace {

constexpr int kRootScaleBits = 48;

}  // namespace

Rational sqrt_down(const Rational& r) {
  if (r < 0) throw Error("sqrt of negative rational");
  if (r == 0) return Rational(0);
  // floor(sqrt(p * 2^(2B) / q)) / 2^B  <= sqrt(p/q)
  Integer scaled = (numerator(r) << (2 * kRootScaleBits)) / denominator(r);
  Integer s = sqrt(scaled);
  return Rational(s) / Rational(Integer(1) << kRootScaleBits);
}

Rational sqrt_up(const Rational& r) {
  if (r < 0) throw Error("sqrt of negative rational");
  if (r == 0) return Rational(0);
  Integer num_scaled = numerator(r) << (2 * kRootScaleBits);
  Integer scaled = num_scaled / denominator(r);
  Integer s = sqrt(scaled);
  // Exact square on the dyadic grid: no outward nudge needed.
  if (s * s == scaled && scaled * denominator(r) == num_scaled)
    return Rational(s) / Rational(Integer(1) << kRootScaleBits);
  return Rational(s + 1) / Rational(Integer(1) << kRootScaleBits);
}

Rational pow_rational(const Rational& base, unsigned exp) {
  Rational result(1);
  Rational b = base;
  unsigned e = exp;
  while (e > 0) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

namespace {

Rational nth_root_bracket(const Rational& r, unsigned n, bool round_down) {
  if (r < 0) throw Error("nth root of negative rational");
  if (n == 0) throw Error("zeroth root");
  if (r == 0) return Rational(0);
  if (n == 1) return r;
  if (n == 2) return round_down ? sqrt_down(r) : sqrt_up(r);

  Rational lo(0);
  Rational hi = r < 1 ? Rational(1) : r;
  // Binary search on dyadic grid: ~kRootScaleBits+log2(hi) halvings suffice.
  for (int i = 0; i < kRootScaleBits + 16; ++i) {
    Rational mid = (lo + hi) / 2;
    if (pow_rational(mid, n) <= r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return round_down ? lo : hi;
}

}  // namespace

Rational nth_root_down(const Rational& r, unsigned n) { return nth_root_bracket(r, n, true); }
Rational nth_root_up(const Rational& r, unsigned n) { return nth_root_bracket(r, n, false); }

Rational snap_to_rational(double x, std::uint64_t max_denominator) {
  if (!std::isfinite(x)) throw Error("cannot snap non-finite double");
  if (max_denominator == 0) throw Error("max_denominator must be positive");
  bool negative = x < 0;
  double v = std::fabs(x);

  // Continued-fraction convergents p/q with q <= max_denominator.
  std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(frac);
    if (fl > static_cast<double>(std::numeric_limits<std::int64_t>::max())) break;
    std::uint64_t a = static_cast<std::uint64_t>(fl);
    if (q1 != 0 && a > (max_denominator - q0) / q1) {
      // Take the best semiconvergent that still fits the cap.
      std::uint64_t a_cap = (max_denominator - q0) / q1;
      if (a_cap > 0) {
        std::uint64_t p = p0 + a_cap * p1;
        std::uint64_t q = q0 + a_cap * q1;
        Rational semi = Rational(Integer(p)) / Rational(Integer(q));
        Rational conv = q1 == 0 ? semi : Rational(Integer(p1)) / Rational(Integer(q1));
        Rational xr = rational_from_double(v);
        Rational best = abs(semi - xr) < abs(conv - xr) ? semi : conv;
        return negative ? -best : best;
      }
      break;
    }
    std::uint64_t p = p0 + a * p1;
    std::uint64_t q = q0 + a * q1;
    p0 = p1; q0 = q1; p1 = p; q1 = q;
    double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  Rational best = q1 == 0 ? Rational(0) : Rational(Integer(p1)) / Rational(Integer(q1));
  return negative ? -best : best;
}

}  // namespace powers
