#include "powers/algebra.hpp"

#include <cmath>
#include <limits>

#include "powers/errors.hpp"

namespace powers {

AlgebraElement AlgebraElement::zero(const GroupDescriptor& desc, ScalarMode mode) {
  return AlgebraElement(desc, mode);
}

AlgebraElement AlgebraElement::delta(const Word& w) { return delta(w, Scalar::exact(Rational(1))); }

AlgebraElement AlgebraElement::delta(const Word& w, const Scalar& coeff) {
  AlgebraElement e(w.descriptor(), coeff.mode());
  e.accumulate(w, coeff);
  return e;
}

std::int64_t AlgebraElement::degree() const {
  std::int64_t d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, w.length());
  return d;
}

Scalar AlgebraElement::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

void AlgebraElement::accumulate(const Word& w, const Scalar& c) {
  if (w.descriptor() != desc_) throw GroupMismatch("term word from a different group");
  if (c.mode() != mode_) throw ModeMismatch("term coefficient mode differs from element mode");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

namespace {

void require_compatible(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
  if (a.descriptor() != b.descriptor()) throw GroupMismatch(std::string(op) + " on elements of different groups");
  if (a.mode() != b.mode()) throw ModeMismatch(std::string(op) + " on elements of different scalar modes");
}

}  // namespace

AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
  require_compatible(a, b, "add");
  AlgebraElement out = a;
  for (const auto& [w, c] : b.terms()) out.accumulate(w, c);
  return out;
}

AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
  require_compatible(a, b, "sub");
  AlgebraElement out = a;
  for (const auto& [w, c] : b.terms()) out.accumulate(w, -c);
  return out;
}

AlgebraElement scale(const Scalar& c, const AlgebraElement& a) {
  if (c.mode() != a.mode()) throw ModeMismatch("scale with coefficient of different mode");
  AlgebraElement out(a.descriptor(), a.mode());
  if (c.is_zero()) return out;
  for (const auto& [w, coeff] : a.terms()) out.accumulate(w, c * coeff);
  return out;
}

AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b, std::size_t support_cap) {
  require_compatible(a, b, "convolve");
  // Reject hopeless products before looping: the term-pair count bounds
  // the work, the cap bounds the result.
  constexpr std::size_t kWorkFactor = 8;
  std::size_t as = a.support_size(), bs = b.support_size();
  if (as != 0 && bs != 0) {
    if (as > std::numeric_limits<std::size_t>::max() / bs || as * bs > kWorkFactor * support_cap)
      throw BudgetExceeded("convolution needs " + std::to_string(as) + "x" + std::to_string(bs) +
                           " term pairs, cap " + std::to_string(support_cap));
  }
  AlgebraElement out(a.descriptor(), a.mode());
  for (const auto& [u, cu] : a.terms()) {
    for (const auto& [v, cv] : b.terms()) {
      out.accumulate(mul(u, v), cu * cv);
      if (out.support_size() > support_cap)
        throw BudgetExceeded("convolution support exceeds cap of " + std::to_string(support_cap));
    }
  }
  return out;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement out(a.descriptor(), a.mode());
  for (const auto& [w, c] : a.terms()) out.accumulate(inv(w), c.conj());
  return out;
}

Scalar trace(const AlgebraElement& a) { return a.coefficient(Word::identity(a.descriptor())); }

Rational l1_norm_upper(const AlgebraElement& a) {
  Rational total(0);
  for (const auto& [w, c] : a.terms()) total += c.abs_upper();
  return total;
}

Rational l2_squared(const AlgebraElement& a) {
  if (a.mode() != ScalarMode::exact) throw ModeMismatch("l2_squared requires exact mode");
  Rational total(0);
  for (const auto& [w, c] : a.terms()) total += c.abs_squared();
  return total;
}

double l1_norm(const AlgebraElement& a) {
  if (a.mode() == ScalarMode::exact) return to_double_up(l1_norm_upper(a));
  double total = 0.0;
  for (const auto& [w, c] : a.terms()) total += std::abs(c.value());
  return total;
}

double l2_norm(const AlgebraElement& a) {
  if (a.mode() == ScalarMode::exact) return to_double_up(sqrt_up(l2_squared(a)));
  double total = 0.0;
  for (const auto& [w, c] : a.terms()) total += std::norm(c.value());
  return std::sqrt(total);
}

AlgebraElement stratum(const AlgebraElement& a, std::int64_t d) {
  AlgebraElement out(a.descriptor(), a.mode());
  for (const auto& [w, c] : a.terms()) {
    if (w.length() == d) out.accumulate(w, c);
  }
  return out;
}

AlgebraElement to_float(const AlgebraElement& a) {
  AlgebraElement out(a.descriptor(), ScalarMode::floating);
  for (const auto& [w, c] : a.terms()) out.accumulate(w, c.to_float());
  return out;
}

AlgebraElement to_exact(const AlgebraElement& a) {
  AlgebraElement out(a.descriptor(), ScalarMode::exact);
  for (const auto& [w, c] : a.terms()) out.accumulate(w, c.to_exact());
  return out;
}

std::string to_text(const AlgebraElement& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (!first) out += " + ";
    first = false;
    out += "(" + c.to_string() + ")";
    out += to_text(w);
  }
  return out;
}

}  // namespace powers
