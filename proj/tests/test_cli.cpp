#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "chargelat/cli.hpp"
#include "chargelat/xreal.hpp"

using namespace chargelat;

namespace {

#ifndef CHARGELAT_DATA_DIR
#define CHARGELAT_DATA_DIR "data"
#endif

std::string data_file(const std::string& name) { return std::string(CHARGELAT_DATA_DIR) + "/" + name; }

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("validate reports ok on a valid instance") {
  CliRun r = run({"validate", "--input", data_file("four.json")});
  CHECK(r.status == 0);
  CHECK(contains(r.out, "semi-ring: ok"));
  CHECK(contains(r.out, "charges: ok"));
}

TEST_CASE("validate rejects a broken family with the witness pair") {
  CliRun r = run({"validate", "--input", data_file("bad_semiring.json")});
  CHECK(r.status == 1);
  CHECK(contains(r.err, "{1,2}"));
  CHECK(contains(r.err, "{2,3}"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"validate"}).status == 2);  // missing --input
  CHECK(run({"validate", "--input", data_file("four.json"), "--format", "yaml"}).status == 2);
}

TEST_CASE("jordan reports the decomposition per member") {
  CliRun r = run({"jordan", "--input", data_file("four.json"), "--charge", "mu", "--member", "omega"});
  CHECK(r.status == 0);
  CHECK(contains(r.out, "pos=3"));
  CHECK(contains(r.out, "neg=4"));
  CHECK(contains(r.out, "var=7"));
  CHECK(contains(r.out, "identities=ok"));
}

TEST_CASE("reports are byte-identical across runs") {
  std::vector<std::string> args{"variation", "--input", data_file("four.json"), "--charge", "mu"};
  CliRun first = run(args);
  CliRun second = run(args);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("json reports parse and their values re-parse in the text encoding") {
  CliRun r = run({"--format", "json", "jordan", "--input", data_file("four.json"), "--charge", "mu"});
  CHECK(r.status == 0);
  auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.contains("results"));
  for (const auto& row : doc["results"]) {
    for (const char* key : {"pos", "neg", "variation"}) {
      CHECK(parse_ext_real(row.at(key).get<std::string>()).has_value());
    }
  }
}

TEST_CASE("sup defaults to every member and witnesses are shown") {
  CliRun r = run({"sup", "--input", data_file("four.json"), "--charges", "mu"});
  CHECK(r.status == 0);
  CHECK(contains(r.out, "{1,2,3,4} = -1 [exact]"));
  CHECK(contains(r.out, "witness"));
}

TEST_CASE("meet reports the two-case verdict") {
  CliRun omega = run({"meet", "--input", data_file("cofinite.json"), "--charge", "mu", "--member",
                      "N\\{1,2}"});
  CHECK(omega.status == 0);
  CHECK(contains(omega.out, "verdict: infinite"));
  CliRun finite = run({"meet", "--input", data_file("cofinite.json"), "--charge", "mu", "--member",
                       "f123"});
  CHECK(finite.status == 0);
  CHECK(contains(finite.out, "verdict: zero"));
}

TEST_CASE("hahn emits a certificate and its verification") {
  CliRun r = run({"hahn", "--input", data_file("four.json"), "--charge", "mu", "--member", "omega",
                  "--epsilon", "1/2"});
  CHECK(r.status == 0);
  CHECK(contains(r.out, "status: found"));
  CHECK(contains(r.out, "h: {2}+{4}"));
  CHECK(contains(r.out, "verification: ok"));

  CliRun impossible = run({"hahn", "--input", data_file("cofinite.json"), "--charge", "mu",
                           "--member", "N\\{}", "--epsilon", "1/10"});
  CHECK(impossible.status == 0);
  CHECK(contains(impossible.out, "status: impossible"));
}

TEST_CASE("norm on the nat backend reports a certified lower bound") {
  CliRun r = run({"norm", "--input", data_file("nat.json"), "--charge", "mu"});
  CHECK(r.status == 0);
  CHECK(contains(r.out, "norm: 25/12"));
  CHECK(contains(r.out, "lower-bound"));
}

TEST_CASE("partitions and ring commands") {
  CliRun partitions = run({"partitions", "--input", data_file("grid.json"), "--member", "[1/4,1)"});
  CHECK(partitions.status == 0);
  CHECK(contains(partitions.out, "count: 2"));
  CHECK(contains(partitions.out, "complete: yes"));

  CliRun in_ring = run({"ring", "--input", data_file("miniring.json"), "--subset", "{1,4}"});
  CHECK(in_ring.status == 0);
  CHECK(contains(in_ring.out, "in-ring: yes"));
  CHECK(contains(in_ring.out, "decomposition: {1}+{4}"));

  CliRun not_in_ring = run({"ring", "--input", data_file("miniring.json"), "--subset", "{1,3}"});
  CHECK(not_in_ring.status == 1);
  CHECK(contains(not_in_ring.out, "in-ring: no"));
}

TEST_CASE("density-sup prints both routes and their agreement") {
  CliRun r = run({"density-sup", "--input", data_file("density.json"), "--densities", "f1,f2"});
  CHECK(r.status == 0);
  CHECK(contains(r.out, "partition-formula: 6"));
  CHECK(contains(r.out, "pointwise-sup-integral: 6"));
  CHECK(contains(r.out, "agreement: ok"));
}

TEST_CASE("examples run through the CLI") {
  CliRun list = run({"example", "--list"});
  CHECK(list.status == 0);
  CHECK(contains(list.out, "four-point"));
  CHECK(contains(list.out, "grid-alternating"));

  CliRun fixture = run({"example", "four-point"});
  CHECK(fixture.status == 0);
  CHECK(contains(fixture.out, "all checks passed"));

  CHECK(run({"example", "no-such"}).status == 1);
}
