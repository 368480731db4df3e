#include <doctest.h>

#include "chargelat/catalog.hpp"

using namespace chargelat;

TEST_CASE("every catalogued fixture reproduces its frozen values") {
  for (const std::string& id : catalog_ids()) {
    CAPTURE(id);
    FixtureReport report = run_fixture(build_fixture(id));
    for (const FixtureCheckResult& check : report.checks) {
      CAPTURE(check.description);
      CAPTURE(check.expected);
      CAPTURE(check.actual);
      CHECK(check.pass);
    }
    CHECK(report.all_pass);
  }
}

TEST_CASE("unknown fixtures are refused by name") {
  CHECK_THROWS_AS(build_fixture("no-such-fixture"), UnknownFixture);
}
