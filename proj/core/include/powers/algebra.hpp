#pragma once

#include <map>
#include <vector>

#include "powers/group.hpp"
#include "powers/scalar.hpp"

namespace powers {

inline constexpr std::size_t kDefaultSupportCap = 5'000'000;

/// A finitely supported function on group elements: an element of the
/// group ring acting on l2(G) by left convolution. The support map never
/// stores explicit zeros and every term shares the element's descriptor
/// and scalar mode. Immutable in spirit: all operations return fresh
/// elements, so values are safe to share across threads.
class AlgebraElement {
 public:
  using TermMap = std::map<Word, Scalar, WordLess>;

  AlgebraElement(GroupDescriptor desc, ScalarMode mode) : desc_(std::move(desc)), mode_(mode) {}

  static AlgebraElement zero(const GroupDescriptor& desc, ScalarMode mode = ScalarMode::exact);
  static AlgebraElement delta(const Word& w);
  static AlgebraElement delta(const Word& w, const Scalar& coeff);

  const GroupDescriptor& descriptor() const { return desc_; }
  ScalarMode mode() const { return mode_; }
  const TermMap& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Max word length over the support; 0 for the zero element.
  std::int64_t degree() const;
  Scalar coefficient(const Word& w) const;

  /// Adds c * delta_w, dropping the term if it cancels to zero.
  void accumulate(const Word& w, const Scalar& c);

 private:
  GroupDescriptor desc_;
  ScalarMode mode_;
  TermMap terms_;
};

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement scale(const Scalar& c, const AlgebraElement& a);

/// Convolution product: (a*b)(w) = sum over uv = w of a(u) b(v).
/// Throws BudgetExceeded when the result support would exceed the cap;
/// truncation is never an option because it would silently invalidate
/// norm upper bounds downstream.
AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b,
                        std::size_t support_cap = kDefaultSupportCap);

/// The * operation: a*(w) = conj(a(w^-1)).
AlgebraElement adjoint(const AlgebraElement& a);

/// Canonical trace: the coefficient of the identity.
Scalar trace(const AlgebraElement& a);

/// Sum of |coefficients| as a certified upper rational (exact for real
/// exact coefficients).
Rational l1_norm_upper(const AlgebraElement& a);
/// Exact sum of squared coefficient moduli (exact mode).
Rational l2_squared(const AlgebraElement& a);
double l1_norm(const AlgebraElement& a);
double l2_norm(const AlgebraElement& a);

/// Restriction to words of length exactly d (Haagerup strata).
AlgebraElement stratum(const AlgebraElement& a, std::int64_t d);

/// Explicit mode conversions.
AlgebraElement to_float(const AlgebraElement& a);
AlgebraElement to_exact(const AlgebraElement& a);

/// Parses the inline element grammar: rational coefficients, '+'/'-',
/// parenthesized scalar multiples, and word tokens in the text format,
/// e.g. "(1/4)(a+A+b+B)" or "(1/2)((1)+(-1))". Always exact mode.
AlgebraElement parse_element(std::string_view text, const GroupDescriptor& desc);

std::string to_text(const AlgebraElement& a);

}  // namespace powers
