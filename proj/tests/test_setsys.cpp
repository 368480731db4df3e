#include <doctest.h>

#include <algorithm>
#include <set>

#include "chargelat/setsys.hpp"
#include "oracle.hpp"

using namespace chargelat;
using Mask = ExplicitBackend::Mask;

namespace {

GroundSet ground4() { return GroundSet{{"1", "2", "3", "4"}}; }

std::vector<std::vector<MemberId>> collect_partitions(const SemiRingBackend& backend, MemberId a,
                                                      PartitionOptions opts = {}) {
  std::vector<std::vector<MemberId>> out;
  backend.for_each_partition(a, opts, [&](const Partition& p) {
    out.push_back(p.blocks);
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("semi-ring validation accepts the axioms and names violations") {
  SUBCASE("a partition family is a semi-ring") {
    auto r = validate_semiring(ground4(), {{}, {"1", "2"}, {"3", "4"}});
    CHECK(r.ok());
  }
  SUBCASE("nested members whose differences stay inside") {
    auto r = validate_semiring(GroundSet{{"1", "2"}}, {{}, {"1"}, {"1", "2"}, {"2"}});
    CHECK(r.ok());
  }
  SUBCASE("a missing intersection is reported with the witness pair") {
    auto r = validate_semiring(GroundSet{{"1", "2", "3"}}, {{}, {"1", "2"}, {"2", "3"}});
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->kind == SemiRingViolation::Kind::IntersectionNotMember);
    CHECK(r.violation->witness_a == "{1,2}");
    CHECK(r.violation->witness_b == "{2,3}");
  }
  SUBCASE("a family without the empty set is rejected, not repaired") {
    auto r = validate_semiring(GroundSet{{"1"}}, std::vector<Mask>{1});
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->kind == SemiRingViolation::Kind::MissingEmpty);
  }
  SUBCASE("undecomposable differences are reported") {
    // {1,2,3} \ {1} = {2,3} has no cover here.
    auto r = validate_semiring(GroundSet{{"1", "2", "3"}}, std::vector<Mask>{0, 1, 7});
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->kind == SemiRingViolation::Kind::DifferenceNotDecomposable);
  }
}

TEST_CASE("partition enumeration matches the subset-cover oracle and Bell counts") {
  for (std::size_t n = 1; n <= 6; ++n) {
    GroundSet ground;
    for (std::size_t i = 0; i < n; ++i) ground.labels.push_back(std::to_string(i + 1));
    auto backend = make_power_set_backend(ground);
    const Mask full = static_cast<Mask>((1u << n) - 1);
    MemberId top = *backend->find_member(full);
    auto partitions = collect_partitions(*backend, top);
    CHECK(partitions.size() == oracle::bell_numbers()[n]);

    // Same partitions as the oracle, independently enumerated.
    std::vector<Mask> members;
    backend->for_each_member(std::nullopt, [&](MemberId m) {
      members.push_back(backend->mask_of(m));
      return true;
    });
    auto expected = oracle::all_partitions(members, full);
    std::set<std::vector<Mask>> expected_sets;
    for (const auto& cover : expected) {
      std::vector<Mask> blocks;
      for (std::size_t idx : cover) blocks.push_back(members[idx]);
      std::sort(blocks.begin(), blocks.end());
      expected_sets.insert(blocks);
    }
    std::set<std::vector<Mask>> got_sets;
    for (const auto& blocks : partitions) {
      std::vector<Mask> masks;
      for (MemberId b : blocks) masks.push_back(backend->mask_of(b));
      std::sort(masks.begin(), masks.end());
      CHECK(got_sets.insert(masks).second);  // no duplicates
    }
    CHECK(got_sets == expected_sets);
  }
}

TEST_CASE("every emitted partition passes an independent verifier") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto backend = oracle::random_semiring(rng);
    backend->for_each_member(std::nullopt, [&](MemberId target) {
      backend->for_each_partition(target, {}, [&](const Partition& p) {
        Mask acc = 0;
        for (MemberId b : p.blocks) {
          const Mask mask = backend->mask_of(b);
          CHECK(mask != 0);
          CHECK((acc & mask) == 0);
          acc |= mask;
        }
        CHECK(acc == backend->mask_of(target));
        // Canonical order: ascending by smallest element.
        for (std::size_t i = 0; i + 1 < p.blocks.size(); ++i) {
          CHECK(backend->block_order_key(p.blocks[i]) < backend->block_order_key(p.blocks[i + 1]));
        }
        return true;
      });
      return true;
    });
  }
}

TEST_CASE("the empty member has exactly the empty partition") {
  auto backend = make_power_set_backend(GroundSet{{"1", "2"}});
  auto partitions = collect_partitions(*backend, backend->empty_member());
  REQUIRE(partitions.size() == 1);
  CHECK(partitions[0].empty());
}

TEST_CASE("the partition semi-ring leaves only the trivial partition") {
  auto r = validate_semiring(ground4(), {{}, {"1", "2"}, {"3", "4"}});
  MemberId a = r.backend->member_from_labels(std::vector<std::string>{"1", "2"});
  auto partitions = collect_partitions(*r.backend, a);
  REQUIRE(partitions.size() == 1);
  CHECK(partitions[0].size() == 1);
}

TEST_CASE("max_blocks truncates and is flagged incomplete") {
  auto backend = make_power_set_backend(GroundSet{{"1", "2", "3"}});
  MemberId top = *backend->find_member(7);
  PartitionOptions opts;
  opts.max_blocks = 2;
  std::size_t count = 0;
  EnumerationStatus status = backend->for_each_partition(top, opts, [&](const Partition& p) {
    CHECK(p.blocks.size() <= 2);
    ++count;
    return true;
  });
  CHECK(count == 4);  // {123}, {1}{23}, {12}{3}, {13}{2}
  CHECK_FALSE(status.complete);
}

TEST_CASE("difference decompositions are disjoint covers of the difference") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    auto backend = oracle::random_semiring(rng);
    backend->for_each_member(std::nullopt, [&](MemberId a) {
      backend->for_each_member(std::nullopt, [&](MemberId b) {
        auto blocks = backend->difference_decomposition(a, b);
        Mask acc = 0;
        for (MemberId c : blocks) {
          const Mask mask = backend->mask_of(c);
          CHECK((acc & mask) == 0);
          CHECK((mask & backend->mask_of(b)) == 0);  // disjoint from b
          acc |= mask;
        }
        CHECK(acc == (backend->mask_of(a) & ~backend->mask_of(b)));
        return true;
      });
      return true;
    });
  }
}

TEST_CASE("ring membership produces canonical decompositions and the generated ring round-trips") {
  auto r = validate_semiring(ground4(), std::vector<Mask>{0, 1, 2, 8});
  REQUIRE(r.ok());
  const auto& backend = *r.backend;

  SUBCASE("{1,4} decomposes into {1} and {4}") {
    auto member = backend.ring_membership(0b1001);
    REQUIRE(member.has_value());
    CHECK(backend.ring_member_name(*member) == "{1,4}");
    REQUIRE(member->blocks.size() == 2);
    CHECK(backend.member_name(member->blocks[0]) == "{1}");
    CHECK(backend.member_name(member->blocks[1]) == "{4}");
  }
  SUBCASE("{1,3} is not in the ring") {
    CHECK_FALSE(backend.ring_membership(0b0101).has_value());
  }
  SUBCASE("membership after generation is the identity") {
    for (const RingMember& member : backend.generate_ring()) {
      auto again = backend.ring_membership(backend.union_mask(member));
      REQUIRE(again.has_value());
      CHECK(backend.union_mask(*again) == backend.union_mask(member));
    }
  }
}

TEST_CASE("common refinement intersects blockwise") {
  auto backend = make_power_set_backend(GroundSet{{"1", "2", "3"}});
  auto member = [&](std::initializer_list<const char*> labels) {
    std::vector<std::string> v;
    for (const char* l : labels) v.emplace_back(l);
    return backend->member_from_labels(v);
  };
  MemberId top = member({"1", "2", "3"});
  Partition p = *make_partition(*backend, top, {member({"1", "2"}), member({"3"})});
  Partition q = *make_partition(*backend, top, {member({"1"}), member({"2", "3"})});
  Partition refined = common_refinement(*backend, p, q);
  REQUIRE(refined.blocks.size() == 3);
  CHECK(backend->member_name(refined.blocks[0]) == "{1}");
  CHECK(backend->member_name(refined.blocks[1]) == "{2}");
  CHECK(backend->member_name(refined.blocks[2]) == "{3}");
  // Idempotence.
  Partition self = common_refinement(*backend, p, p);
  CHECK(self.blocks == p.blocks);
}

TEST_CASE("make_partition rejects overlaps, gaps and empty blocks") {
  auto backend = make_power_set_backend(GroundSet{{"1", "2", "3"}});
  auto member = [&](Mask m) { return *backend->find_member(m); };
  MemberId top = member(7);
  CHECK_FALSE(make_partition(*backend, top, {member(3), member(6)}).has_value());  // overlap
  CHECK_FALSE(make_partition(*backend, top, {member(1), member(2)}).has_value());  // gap
  CHECK_FALSE(make_partition(*backend, top, {member(7), member(0)}).has_value());  // empty block
  CHECK(make_partition(*backend, top, {member(4), member(3)}).has_value());
}
