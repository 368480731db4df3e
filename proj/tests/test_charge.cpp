#include <doctest.h>

#include <random>

#include "chargelat/catalog.hpp"
#include "chargelat/charge.hpp"
#include "oracle.hpp"

using namespace chargelat;
using Mask = ExplicitBackend::Mask;

namespace {

std::shared_ptr<const ExplicitBackend> power2() {
  return make_power_set_backend(GroundSet{{"1", "2"}});
}

}  // namespace

TEST_CASE("charge validation checks additivity over every partition") {
  auto backend = power2();
  SUBCASE("an additive table passes and records its polarity") {
    // members ascend: {}, {1}, {2}, {1,2}
    auto r = validate_charge(backend, {ExtReal(0), ExtReal(2), ExtReal(-3), ExtReal(-1)}, "mu");
    REQUIRE(r.ok());
    CHECK(r.charge->polarity() == Polarity::Finite);
    CHECK(r.charge->value(*backend->find_member(3)) == ExtReal(-1));
  }
  SUBCASE("a broken sum is reported with the partition and both sides") {
    auto r = validate_charge(backend, {ExtReal(0), ExtReal(2), ExtReal(-3), ExtReal(0)}, "mu");
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->kind == ChargeViolation::Kind::NotAdditive);
    CHECK(r.violation->member == "{1,2}");
  }
  SUBCASE("mixed infinities are refused") {
    auto r = validate_charge(backend,
                             {ExtReal(0), ExtReal::pos_inf(), ExtReal::neg_inf(), ExtReal(0)}, "mu");
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->kind == ChargeViolation::Kind::AttainsBothInfinities);
  }
  SUBCASE("the empty set must carry zero") {
    auto r = validate_charge(backend, {ExtReal(1), ExtReal(2), ExtReal(-3), ExtReal(-1)}, "mu");
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->kind == ChargeViolation::Kind::EmptyNotZero);
  }
  SUBCASE("one-signed infinities validate and fix the polarity") {
    auto r = validate_charge(backend,
                             {ExtReal(0), ExtReal::pos_inf(), ExtReal(1), ExtReal::pos_inf()}, "mu");
    REQUIRE(r.ok());
    CHECK(r.charge->polarity() == Polarity::AvoidsNegInf);
    CHECK(r.charge->negated().polarity() == Polarity::AvoidsPosInf);
  }
}

TEST_CASE("point-weight charges revalidate as full tables") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    auto backend = oracle::random_semiring(rng);
    Charge mu = oracle::random_charge(rng, backend, "mu");
    std::vector<ExtReal> table;
    backend->for_each_member(std::nullopt, [&](MemberId m) {
      table.push_back(mu.value(m));
      return true;
    });
    CHECK(validate_charge(backend, std::move(table), "check").ok());
  }
}

TEST_CASE("admissibility of families") {
  auto backend = power2();
  Charge finite = *charge_from_point_weights(backend, {ExtReal(1), ExtReal(1)}, "fin").charge;
  SUBCASE("a family with an everywhere-finite charge is admissible") {
    auto all_neg = validate_charge(
        backend, {ExtReal(0), ExtReal::neg_inf(), ExtReal::neg_inf(), ExtReal::neg_inf()}, "bottom");
    REQUIRE(all_neg.ok());
    CHECK(check_admissibility(Family({*all_neg.charge, finite})).ok);
  }
  SUBCASE("the constant -inf charge alone is inadmissible") {
    auto all_neg = validate_charge(
        backend, {ExtReal(0), ExtReal::neg_inf(), ExtReal::neg_inf(), ExtReal::neg_inf()}, "bottom");
    auto report = check_admissibility(Family({*all_neg.charge}));
    CHECK_FALSE(report.ok);
    CHECK(report.witness == "{1}");
  }
  SUBCASE("raw set functions are checked the same way") {
    SetFunction f = SetFunction::from_table(
        backend, {ExtReal(0), ExtReal(1), ExtReal::neg_inf(), ExtReal(0)}, "f");
    std::vector<SetFunction> one{f};
    auto alone = check_admissibility(one);
    CHECK_FALSE(alone.ok);
    CHECK(alone.witness == "{2}");
    std::vector<SetFunction> rescued{f, SetFunction::from_table(
                                            backend, {ExtReal(0), ExtReal(0), ExtReal(0), ExtReal(0)},
                                            "zero")};
    CHECK(check_admissibility(rescued).ok);
  }
}

TEST_CASE("ring extension sums the canonical decomposition") {
  auto r = validate_semiring(GroundSet{{"1", "2", "3", "4"}}, std::vector<Mask>{0, 1, 2, 8});
  REQUIRE(r.ok());
  Charge mu = *charge_from_point_weights(r.backend, {ExtReal(1), ExtReal(-2), ExtReal(0), ExtReal(5)},
                                         "mu")
                   .charge;
  SUBCASE("a two-block union") {
    RingMember member = *r.backend->ring_membership(0b1001);
    CHECK(ring_value(mu, member) == ExtReal(6));
  }
  SUBCASE("the extension restricted to the semi-ring is the charge") {
    auto extension = extend_to_explicit_ring(mu);
    r.backend->for_each_member(std::nullopt, [&](MemberId m) {
      auto on_ring = extension.ring_backend->find_member(r.backend->mask_of(m));
      REQUIRE(on_ring.has_value());
      CHECK(extension.extended.value(*on_ring) == mu.value(m));
      return true;
    });
  }
}

TEST_CASE("extension values agree across all decompositions of a ring member") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 25; ++trial) {
    auto backend = oracle::random_semiring(rng);
    Charge mu = oracle::random_charge(rng, backend, "mu");
    std::vector<Mask> members;
    backend->for_each_member(std::nullopt, [&](MemberId m) {
      members.push_back(backend->mask_of(m));
      return true;
    });
    for (const RingMember& member : backend->generate_ring()) {
      const ExtReal canonical = ring_value(mu, member);
      for (const auto& cover : oracle::all_partitions(members, backend->union_mask(member))) {
        ExtReal total(0);
        for (std::size_t idx : cover) {
          total = add(total, mu.value(MemberId{static_cast<std::uint32_t>(idx)}));
        }
        CHECK(total == canonical);
      }
    }
  }
}

TEST_CASE("interval charge extension over a disjoint pair of runs") {
  auto backend = std::make_shared<NatIntervalBackend>(1);
  Charge mu = fixtures::alternating_nat_charge(backend);
  RingMember r = backend->ring_membership({1, 2, 5});
  CHECK(ring_value(mu, r) == ExtReal(Rational(-7, 10)));
}

TEST_CASE("countable additivity witnesses") {
  SUBCASE("the cofinite counting charge fails at the first truncation") {
    auto backend = std::make_shared<CofiniteBackend>();
    Charge mu = *validate_symbolic_charge(backend, SymbolicCharge{CofiniteRule::CardCocard, false, {}},
                                          "mu")
                     .charge;
    std::vector<MemberId> pieces;
    for (std::uint64_t n = 3; n <= 10; ++n) pieces.push_back(backend->member(CofiniteSet::finite({n})));
    auto verdict = check_countable_additivity_witness(
        mu, backend->member(CofiniteSet::cofinite({1, 2})), pieces,
        [](std::size_t n) { return ExtReal(Rational(1, n)); });
    REQUIRE_FALSE(verdict.confirmed);
    CHECK(*verdict.failure_index == 1);
  }
  SUBCASE("the alternating interval charge is confirmed with tail 1/N") {
    auto backend = std::make_shared<NatIntervalBackend>(1);
    Charge mu = fixtures::alternating_nat_charge(backend);
    std::vector<MemberId> pieces;
    for (std::uint64_t k = 1; k < 30; ++k) pieces.push_back(backend->interval(k, k + 1));
    auto verdict = check_countable_additivity_witness(
        mu, backend->interval(1, 30), pieces, [](std::size_t n) { return ExtReal(Rational(1, n)); });
    CHECK(verdict.confirmed);
  }
  SUBCASE("bad pieces are rejected up front") {
    auto backend = power2();
    Charge mu = *charge_from_point_weights(backend, {ExtReal(1), ExtReal(1)}, "mu").charge;
    MemberId one = *backend->find_member(1);
    MemberId both = *backend->find_member(3);
    std::vector<MemberId> overlapping{both, one};
    CHECK_THROWS_AS(check_countable_additivity_witness(mu, both, overlapping,
                                                       [](std::size_t) { return ExtReal(0); }),
                    std::invalid_argument);
  }
}

TEST_CASE("charge addition is memberwise") {
  std::mt19937_64 rng(53);
  auto backend = make_power_set_backend(GroundSet{{"1", "2", "3"}});
  Charge a = oracle::random_charge(rng, backend, "a");
  Charge b = oracle::random_charge(rng, backend, "b");
  Charge c = add_charges(a, b, "a+b");
  backend->for_each_member(std::nullopt, [&](MemberId m) {
    CHECK(c.value(m) == add(a.value(m), b.value(m)));
    return true;
  });
}
