#include "powers/scalar.hpp"

#include "powers/errors.hpp"

namespace powers {

Scalar Scalar::exact(Rational re, Rational im) {
  Scalar s;
  s.mode_ = ScalarMode::exact;
  s.re_q_ = std::move(re);
  s.im_q_ = std::move(im);
  return s;
}

Scalar Scalar::floating(double re, double im) {
  Scalar s;
  s.mode_ = ScalarMode::floating;
  s.re_d_ = re;
  s.im_d_ = im;
  return s;
}

Scalar Scalar::zero(ScalarMode mode) {
  return mode == ScalarMode::exact ? exact(Rational(0)) : floating(0.0);
}

Scalar Scalar::one(ScalarMode mode) {
  return mode == ScalarMode::exact ? exact(Rational(1)) : floating(1.0);
}

bool Scalar::is_zero() const {
  return mode_ == ScalarMode::exact ? re_q_ == 0 && im_q_ == 0 : re_d_ == 0.0 && im_d_ == 0.0;
}

bool Scalar::is_real() const {
  return mode_ == ScalarMode::exact ? im_q_ == 0 : im_d_ == 0.0;
}

void Scalar::require(ScalarMode m, const char* op) const {
  if (mode_ != m) throw ModeMismatch(std::string(op) + " requires " +
                                     (m == ScalarMode::exact ? "exact" : "float") + " mode");
}

const Rational& Scalar::re() const {
  require(ScalarMode::exact, "re()");
  return re_q_;
}

const Rational& Scalar::im() const {
  require(ScalarMode::exact, "im()");
  return im_q_;
}

std::complex<double> Scalar::value() const {
  require(ScalarMode::floating, "value()");
  return {re_d_, im_d_};
}

Scalar Scalar::to_exact() const {
  if (mode_ == ScalarMode::exact) return *this;
  return exact(rational_from_double(re_d_), rational_from_double(im_d_));
}

Scalar Scalar::to_float() const {
  if (mode_ == ScalarMode::floating) return *this;
  return floating(re_q_.convert_to<double>(), im_q_.convert_to<double>());
}

std::complex<double> Scalar::approx() const {
  return mode_ == ScalarMode::exact ? std::complex<double>(re_q_.convert_to<double>(), im_q_.convert_to<double>())
                                    : std::complex<double>(re_d_, im_d_);
}

Scalar Scalar::operator+(const Scalar& other) const {
  if (mode_ != other.mode_) throw ModeMismatch("adding scalars of different modes");
  if (mode_ == ScalarMode::exact) return exact(re_q_ + other.re_q_, im_q_ + other.im_q_);
  return floating(re_d_ + other.re_d_, im_d_ + other.im_d_);
}

Scalar Scalar::operator-(const Scalar& other) const { return *this + (-other); }

Scalar Scalar::operator*(const Scalar& other) const {
  if (mode_ != other.mode_) throw ModeMismatch("multiplying scalars of different modes");
  if (mode_ == ScalarMode::exact)
    return exact(re_q_ * other.re_q_ - im_q_ * other.im_q_, re_q_ * other.im_q_ + im_q_ * other.re_q_);
  return floating(re_d_ * other.re_d_ - im_d_ * other.im_d_, re_d_ * other.im_d_ + im_d_ * other.re_d_);
}

Scalar Scalar::operator-() const {
  if (mode_ == ScalarMode::exact) return exact(-re_q_, -im_q_);
  return floating(-re_d_, -im_d_);
}

Scalar Scalar::conj() const {
  if (mode_ == ScalarMode::exact) return exact(re_q_, -im_q_);
  return floating(re_d_, -im_d_);
}

bool Scalar::operator==(const Scalar& other) const {
  if (mode_ != other.mode_) return false;
  if (mode_ == ScalarMode::exact) return re_q_ == other.re_q_ && im_q_ == other.im_q_;
  return re_d_ == other.re_d_ && im_d_ == other.im_d_;
}

Rational Scalar::abs_squared() const {
  require(ScalarMode::exact, "abs_squared()");
  return re_q_ * re_q_ + im_q_ * im_q_;
}

Rational Scalar::abs_upper() const {
  Scalar e = to_exact();
  if (e.im_q_ == 0) return abs(e.re_q_);
  return sqrt_up(e.abs_squared());
}

Rational Scalar::abs_lower() const {
  Scalar e = to_exact();
  if (e.im_q_ == 0) return abs(e.re_q_);
  return sqrt_down(e.abs_squared());
}

std::string Scalar::to_string() const {
  if (mode_ == ScalarMode::exact) {
    if (im_q_ == 0) return format_rational(re_q_);
    return format_rational(re_q_) + (im_q_ > 0 ? "+" : "") + format_rational(im_q_) + "i";
  }
  if (im_d_ == 0.0) return std::to_string(re_d_);
  return std::to_string(re_d_) + (im_d_ > 0 ? "+" : "") + std::to_string(im_d_) + "i";
}

}  // namespace powers
