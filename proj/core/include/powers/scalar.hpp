#pragma once

#include <complex>
#include <string>

#include "powers/rational.hpp"

namespace powers {

enum class ScalarMode { exact, floating };

/// Tagged algebra coefficient: an exact complex rational or a complex
/// double. Exact values never silently degrade; mixing modes throws
/// ModeMismatch and conversions are spelled out (to_float / to_exact).
class Scalar {
 public:
  Scalar() = default;  // exact zero

  static Scalar exact(Rational re, Rational im = Rational(0));
  static Scalar exact_int(long long v) { return exact(Rational(v)); }
  static Scalar floating(double re, double im = 0.0);
  static Scalar zero(ScalarMode mode);
  static Scalar one(ScalarMode mode);

  ScalarMode mode() const { return mode_; }
  bool is_zero() const;
  bool is_real() const;

  const Rational& re() const;
  const Rational& im() const;
  std::complex<double> value() const;

  /// Lossless: exact dyadic rationals from the double components.
  Scalar to_exact() const;
  Scalar to_float() const;
  std::complex<double> approx() const;

  Scalar operator+(const Scalar& other) const;
  Scalar operator-(const Scalar& other) const;
  Scalar operator*(const Scalar& other) const;
  Scalar operator-() const;
  Scalar conj() const;
  bool operator==(const Scalar& other) const;

  /// |re|^2 + |im|^2, exact mode only.
  Rational abs_squared() const;
  /// Rational bracket of |value|; exact for real exact scalars.
  Rational abs_upper() const;
  Rational abs_lower() const;

  std::string to_string() const;

 private:
  ScalarMode mode_ = ScalarMode::exact;
  Rational re_q_, im_q_;
  double re_d_ = 0.0, im_d_ = 0.0;

  void require(ScalarMode m, const char* op) const;
};

}  // namespace powers
