#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chargelat {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an addition would form "+inf + -inf". This always indicates a
/// caller bug: the operations in this library are arranged so that defined
/// quantities never produce that form.
struct UndefinedSum : std::runtime_error {
  UndefinedSum() : std::runtime_error("undefined sum: +inf and -inf combined") {}
};

struct EmptyFamily : std::runtime_error {
  EmptyFamily() : std::runtime_error("empty family has no supremum/infimum") {}
};

/// An exact rational extended with the two infinities.
///
/// Finite values are canonical (lowest terms, positive denominator; the
/// underlying rational type maintains this). Total order:
/// -inf < every finite < +inf.
class ExtReal {
public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtReal() : kind_(Kind::Finite), value_(0) {}
  ExtReal(Rational value) : kind_(Kind::Finite), value_(std::move(value)) {}
  ExtReal(long long value) : kind_(Kind::Finite), value_(value) {}

  static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_infinite() const { return kind_ != Kind::Finite; }

  /// Finite payload; only meaningful when is_finite().
  const Rational& finite_value() const { return value_; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Finite || a.value_ == b.value_;
  }

  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    return a.kind_ == Kind::Finite && a.value_ < b.value_;
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

private:
  explicit ExtReal(Kind kind) : kind_(kind), value_(0) {}

  Kind kind_;
  Rational value_;
};

/// Exact sum with absorbing infinities. Throws UndefinedSum on "+inf + -inf".
ExtReal add(const ExtReal& a, const ExtReal& b);

/// a + (-b); same contract as add.
ExtReal sub(const ExtReal& a, const ExtReal& b);

ExtReal neg(const ExtReal& a);
ExtReal abs(const ExtReal& a);

/// Left fold of add over the sequence; the empty sum is 0. Order-independent
/// whenever the sequence avoids mixing the two infinities.
ExtReal sum(std::span<const ExtReal> values);

ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal min(const ExtReal& a, const ExtReal& b);

/// Maximum / minimum of a nonempty sequence. Throws EmptyFamily when empty.
ExtReal sup_of(std::span<const ExtReal> values);
ExtReal inf_of(std::span<const ExtReal> values);

/// Canonical text form: "p/q" (lowest terms), integer "p", "+inf", "-inf".
std::string to_string(const ExtReal& x);
std::string to_string(const Rational& r);

/// Parses exactly what to_string emits (plus an optional leading '+' on
/// finite values). No floating point forms are accepted.
std::optional<ExtReal> parse_ext_real(std::string_view text);
std::optional<Rational> parse_rational(std::string_view text);

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace chargelat
