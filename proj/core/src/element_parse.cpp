#include <cctype>
#include <string>
#include <string_view>

#include "powers/algebra.hpp"
#include "powers/errors.hpp"

namespace powers {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on top-level '+'/'-' (outside parentheses); a leading sign binds
// to the first term.
struct SignedTerm {
  int sign;
  std::string_view text;
};

std::vector<SignedTerm> split_terms(std::string_view text) {
  std::vector<SignedTerm> out;
  int depth = 0;
  int sign = +1;
  std::size_t start = 0;
  bool leading = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw ParseError("unbalanced ')'");
    if (depth == 0 && (c == '+' || c == '-')) {
      if (leading && trim(text.substr(start, i - start)).empty()) {
        // Unary sign on the first term.
        if (c == '-') sign = -sign;
        start = i + 1;
        continue;
      }
      out.push_back({sign, text.substr(start, i - start)});
      sign = c == '-' ? -1 : +1;
      start = i + 1;
      leading = false;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '('");
  out.push_back({sign, text.substr(start)});
  return out;
}

// Whole text is one balanced "( ... )" group.
bool is_fully_parenthesized(std::string_view s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && i + 1 != s.size()) return false;
  }
  return depth == 0;
}

AlgebraElement parse_expr(std::string_view text, const GroupDescriptor& desc);

AlgebraElement parse_term(std::string_view text, const GroupDescriptor& desc) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty term");

  // A whole-term word wins: for Z, "(-1)" is the word delta_{-1}, not a scalar.
  try {
    return AlgebraElement::delta(parse_word(text, desc));
  } catch (const Error&) {
  }

  // Leading coefficient: bare "p/q" digits or a parenthesized rational.
  Rational coeff(1);
  bool have_coeff = false;
  std::string_view rest = text;
  if (std::isdigit(static_cast<unsigned char>(text.front()))) {
    std::size_t end = 0;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '/')) ++end;
    coeff = parse_rational(text.substr(0, end));
    have_coeff = true;
    rest = trim(text.substr(end));
  } else if (text.front() == '(') {
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos) throw ParseError("unbalanced '(' in term");
    try {
      coeff = parse_rational(text.substr(1, close - 1));
      have_coeff = true;
      rest = trim(text.substr(close + 1));
    } catch (const ParseError&) {
    }
  }

  if (have_coeff) {
    if (rest.empty()) return AlgebraElement::delta(Word::identity(desc), Scalar::exact(coeff));
    AlgebraElement inner = is_fully_parenthesized(rest)
                               ? parse_expr(rest.substr(1, rest.size() - 2), desc)
                               : AlgebraElement::delta(parse_word(rest, desc));
    return scale(Scalar::exact(coeff), inner);
  }

  if (is_fully_parenthesized(text)) return parse_expr(text.substr(1, text.size() - 2), desc);

  throw ParseError("cannot parse term: '" + std::string(text) + "'");
}

AlgebraElement parse_expr(std::string_view text, const GroupDescriptor& desc) {
  AlgebraElement out = AlgebraElement::zero(desc, ScalarMode::exact);
  for (const SignedTerm& term : split_terms(text)) {
    AlgebraElement t = parse_term(term.text, desc);
    out = term.sign > 0 ? add(out, t) : sub(out, t);
  }
  return out;
}

}  // namespace

AlgebraElement parse_element(std::string_view text, const GroupDescriptor& desc) {
  text = trim(text);
  if (text.empty() || text == "0") return AlgebraElement::zero(desc, ScalarMode::exact);
  return parse_expr(text, desc);
}

}  // namespace powers
