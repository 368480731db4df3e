#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chargelat/charge.hpp"
#include "chargelat/intervals.hpp"

namespace chargelat {

/// One catalogued check: a computation through the public operations and the
/// frozen value it must reproduce, with a self-contained statement of the
/// identity behind that value.
struct FixtureQuery {
  std::string description;
  std::string identity;
  std::function<std::string()> compute;
  std::string expected;
};

struct Fixture {
  std::string id;
  std::string summary;
  std::vector<FixtureQuery> queries;
};

struct UnknownFixture : std::runtime_error {
  explicit UnknownFixture(const std::string& id) : std::runtime_error("unknown fixture: " + id) {}
};

std::vector<std::string> catalog_ids();
Fixture build_fixture(const std::string& id);

struct FixtureCheckResult {
  std::string description;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct FixtureReport {
  std::string id;
  std::vector<FixtureCheckResult> checks;
  bool all_pass = true;
};

FixtureReport run_fixture(const Fixture& fixture);

/// Shared fixture ingredients, reused by tests.
namespace fixtures {

/// Alternating-by-element weights w(k) = (-1)^k / k on the naturals from 1.
Charge alternating_nat_charge(std::shared_ptr<const NatIntervalBackend> backend);

/// Grid over [1/points, 1) at reciprocals, with the alternating cell masses
/// whose cell [1/(m+1),1/m) carries (-1)^(m+1)/m.
std::shared_ptr<const GridIntervalBackend> reciprocal_grid(std::size_t max_denominator);
Charge alternating_grid_charge(std::shared_ptr<const GridIntervalBackend> backend);

/// Power set of {1,2,3,4} with point masses 2, -3, 1, -1.
struct FourPoint {
  std::shared_ptr<const ExplicitBackend> backend;
  Charge mu;
};
FourPoint four_point();

Rational harmonic(std::size_t n);       // sum of 1/k for k = 1..n
Rational odd_harmonic(std::size_t n);   // sum of 1/(2k-1) for k = 1..n
Rational even_harmonic(std::size_t n);  // sum of 1/(2k) for k = 1..n

}  // namespace fixtures

}  // namespace chargelat
