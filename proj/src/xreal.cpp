#include "chargelat/xreal.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace chargelat {

ExtReal add(const ExtReal& a, const ExtReal& b) {
  if (a.is_finite() && b.is_finite()) return ExtReal(a.finite_value() + b.finite_value());
  if (a.is_pos_inf()) {
    if (b.is_neg_inf()) throw UndefinedSum();
    return ExtReal::pos_inf();
  }
  if (a.is_neg_inf()) {
    if (b.is_pos_inf()) throw UndefinedSum();
    return ExtReal::neg_inf();
  }
  return b;  // a finite, b infinite
}

ExtReal sub(const ExtReal& a, const ExtReal& b) { return add(a, neg(b)); }

ExtReal neg(const ExtReal& a) {
  if (a.is_pos_inf()) return ExtReal::neg_inf();
  if (a.is_neg_inf()) return ExtReal::pos_inf();
  return ExtReal(-a.finite_value());
}

ExtReal abs(const ExtReal& a) {
  if (a.is_infinite()) return ExtReal::pos_inf();
  return a.finite_value() < 0 ? ExtReal(-a.finite_value()) : a;
}

ExtReal sum(std::span<const ExtReal> values) {
  ExtReal acc;
  for (const ExtReal& v : values) acc = add(acc, v);
  return acc;
}

ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

ExtReal sup_of(std::span<const ExtReal> values) {
  if (values.empty()) throw EmptyFamily();
  ExtReal best = values.front();
  for (const ExtReal& v : values.subspan(1)) best = max(best, v);
  return best;
}

ExtReal inf_of(std::span<const ExtReal> values) {
  if (values.empty()) throw EmptyFamily();
  ExtReal best = values.front();
  for (const ExtReal& v : values.subspan(1)) best = min(best, v);
  return best;
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

std::string to_string(const ExtReal& x) {
  if (x.is_pos_inf()) return "+inf";
  if (x.is_neg_inf()) return "-inf";
  return to_string(x.finite_value());
}

namespace {

bool parse_integer(std::string_view text, BigInt& out) {
  if (text.empty()) return false;
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) return false;
  BigInt acc = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    acc = acc * 10 + (text[i] - '0');
  }
  out = negative ? BigInt(-acc) : acc;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  const std::size_t slash = text.find('/');
  BigInt num;
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, num)) return std::nullopt;
    return Rational(num);
  }
  BigInt den;
  if (!parse_integer(text.substr(0, slash), num)) return std::nullopt;
  if (!parse_integer(text.substr(slash + 1), den)) return std::nullopt;
  if (den <= 0) return std::nullopt;
  return Rational(num, den);
}

std::optional<ExtReal> parse_ext_real(std::string_view text) {
  if (text == "+inf") return ExtReal::pos_inf();
  if (text == "-inf") return ExtReal::neg_inf();
  auto r = parse_rational(text);
  if (!r) return std::nullopt;
  return ExtReal(std::move(*r));
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << to_string(x); }

}  // namespace chargelat
