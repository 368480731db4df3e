#include <doctest.h>

#include <random>

#include "chargelat/xreal.hpp"

using namespace chargelat;

TEST_CASE("addition is exact and absorbs infinities") {
  CHECK(add(ExtReal(Rational(1, 2)), ExtReal(Rational(1, 3))) == ExtReal(Rational(5, 6)));
  CHECK(add(ExtReal::pos_inf(), ExtReal(-7)) == ExtReal::pos_inf());
  CHECK_THROWS_AS(add(ExtReal::pos_inf(), ExtReal::neg_inf()), UndefinedSum);
  CHECK_THROWS_AS(add(ExtReal::neg_inf(), ExtReal::pos_inf()), UndefinedSum);
}

TEST_CASE("sums fold from zero") {
  std::vector<ExtReal> v{ExtReal(1), ExtReal(2), ExtReal(3)};
  CHECK(sum(v) == ExtReal(6));
  CHECK(sum(std::span<const ExtReal>{}) == ExtReal(0));
  std::vector<ExtReal> with_inf{ExtReal::pos_inf(), ExtReal(1), ExtReal(-5)};
  CHECK(sum(with_inf) == ExtReal::pos_inf());
  std::vector<ExtReal> mixed{ExtReal::pos_inf(), ExtReal(1), ExtReal::neg_inf()};
  CHECK_THROWS_AS(sum(mixed), UndefinedSum);
}

TEST_CASE("suprema and negation") {
  std::vector<ExtReal> v{ExtReal(-1), ExtReal::pos_inf(), ExtReal(3)};
  CHECK(sup_of(v) == ExtReal::pos_inf());
  std::vector<ExtReal> w{ExtReal(-2), ExtReal(-5)};
  CHECK(sup_of(w) == ExtReal(-2));
  CHECK(neg(ExtReal::neg_inf()) == ExtReal::pos_inf());
  CHECK_THROWS_AS(sup_of(std::span<const ExtReal>{}), EmptyFamily);
}

TEST_CASE("total order places the infinities at the ends") {
  CHECK(ExtReal::neg_inf() < ExtReal(Rational(-1000000)));
  CHECK(ExtReal(Rational(1000000)) < ExtReal::pos_inf());
  CHECK(ExtReal(Rational(1, 3)) < ExtReal(Rational(1, 2)));
}

namespace {

ExtReal random_value(std::mt19937_64& rng, bool allow_neg_inf, bool allow_pos_inf) {
  std::uniform_int_distribution<int> pick(0, 9);
  int p = pick(rng);
  if (p == 0 && allow_pos_inf) return ExtReal::pos_inf();
  if (p == 1 && allow_neg_inf) return ExtReal::neg_inf();
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 12);
  return ExtReal(Rational(num(rng), den(rng)));
}

}  // namespace

TEST_CASE("addition is commutative and associative on defined triples") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    // One sign of infinity per trial keeps every sum defined.
    const bool pos = trial % 2 == 0;
    ExtReal a = random_value(rng, !pos, pos);
    ExtReal b = random_value(rng, !pos, pos);
    ExtReal c = random_value(rng, !pos, pos);
    CHECK(add(a, b) == add(b, a));
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
  }
}

TEST_CASE("negation is involutive and dualises suprema") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ExtReal> values;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) values.push_back(random_value(rng, true, true));
    for (const ExtReal& v : values) CHECK(neg(neg(v)) == v);
    std::vector<ExtReal> negated;
    for (const ExtReal& v : values) negated.push_back(neg(v));
    CHECK(sup_of(values) == neg(inf_of(negated)));
  }
}

TEST_CASE("parse and print round-trip on the canonical encoding") {
  for (const char* text : {"0", "-7", "5/6", "-22/7", "+inf", "-inf", "1000000007/999999937"}) {
    auto parsed = parse_ext_real(text);
    REQUIRE(parsed.has_value());
    CHECK(to_string(*parsed) == text);
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    ExtReal v = random_value(rng, true, true);
    auto round = parse_ext_real(to_string(v));
    REQUIRE(round.has_value());
    CHECK(*round == v);
  }
}

TEST_CASE("floating point and malformed forms are rejected") {
  for (const char* text : {"1.5", "inf", "3/0", "3/-2", "", "a/b", "1e9"}) {
    CHECK_FALSE(parse_ext_real(text).has_value());
  }
}
