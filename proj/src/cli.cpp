#include "chargelat/cli.hpp"

#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chargelat/catalog.hpp"
#include "chargelat/density.hpp"
#include "chargelat/hahn.hpp"
#include "chargelat/instance.hpp"
#include "chargelat/lattice.hpp"

namespace chargelat {

namespace {

using nlohmann::ordered_json;

/// Accumulates one report, printable as stable plain text or as JSON with
/// the same key order, so identical inputs give byte-identical output.
class Report {
public:
  explicit Report(bool json_mode) : json_mode_(json_mode) {}

  void kv(const std::string& key, const std::string& value) {
    doc_[key] = value;
    lines_.push_back(key + ": " + value);
  }

  void item(ordered_json fields, const std::string& plain_line) {
    doc_["results"].push_back(std::move(fields));
    lines_.push_back("  " + plain_line);
  }

  void print(std::ostream& out) const {
    if (json_mode_) {
      out << doc_.dump(2) << '\n';
    } else {
      for (const std::string& line : lines_) out << line << '\n';
    }
  }

private:
  bool json_mode_;
  ordered_json doc_;
  std::vector<std::string> lines_;
};

std::string partition_text(const SemiRingBackend& backend, const Partition& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    if (i) out += ",";
    out += backend.member_name(p.blocks[i]);
  }
  return out + "}";
}

std::string ring_member_text(const SemiRingBackend& backend, const RingMember& r) {
  if (r.blocks.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    if (i) out += "+";
    out += backend.member_name(r.blocks[i]);
  }
  return out;
}

std::vector<Charge> pick_charges(const Instance& instance, const std::vector<std::string>& names) {
  std::vector<Charge> out;
  if (names.empty()) {
    for (const auto& [name, charge] : instance.charges) out.push_back(charge);
    if (out.empty()) throw std::invalid_argument("the instance defines no charges");
    return out;
  }
  for (const std::string& name : names) out.push_back(instance.charge(name));
  return out;
}

std::vector<MemberId> members_to_report(const Instance& instance, const std::string& member_arg) {
  if (!member_arg.empty()) return {parse_member(instance, member_arg)};
  const SemiRingBackend& backend = *instance.backend;
  if (!backend.member_count()) {
    throw std::invalid_argument("this backend has unboundedly many members; pass --member");
  }
  std::vector<MemberId> all;
  backend.for_each_member(std::nullopt, [&](MemberId m) {
    all.push_back(m);
    return true;
  });
  return all;
}

int cmd_validate(const Instance& instance, Report& report) {
  // Loading already validated everything; reaching here means it passed.
  if (instance.backend) {
    report.kv("backend", instance.backend->describe());
    report.kv("semi-ring", "ok");
  }
  std::string charges = "ok";
  for (const auto& [name, charge] : instance.charges) {
    report.item({{"charge", name}, {"polarity", to_string(charge.polarity())}},
                "charge " + name + ": " + to_string(charge.polarity()));
  }
  report.kv("charges", charges);
  if (instance.density_space) {
    report.kv("density-space", "ok (" + std::to_string(instance.density_space->size()) + " points)");
  }
  return 0;
}

int cmd_partitions(const Instance& instance, const std::string& member_arg,
                   std::size_t max_blocks, Report& report) {
  MemberId target = parse_member(instance, member_arg);
  const SemiRingBackend& backend = *instance.backend;
  PartitionOptions options;
  if (max_blocks > 0) options.max_blocks = max_blocks;
  std::size_t count = 0;
  EnumerationStatus status = backend.for_each_partition(target, options, [&](const Partition& p) {
    ++count;
    report.item({{"partition", partition_text(backend, p)}}, partition_text(backend, p));
    return true;
  });
  report.kv("member", backend.member_name(target));
  report.kv("count", std::to_string(count));
  report.kv("complete", status.complete ? "yes" : "no");
  return 0;
}

int cmd_ring(const Instance& instance, const std::string& subset_arg, Report& report) {
  const SemiRingBackend& backend = *instance.backend;
  if (backend.kind() == BackendKind::Explicit) {
    const auto& explicit_backend = static_cast<const ExplicitBackend&>(backend);
    if (!subset_arg.empty()) {
      // Membership test for one explicit subset given as {a,b,...}.
      MemberId probe{0};
      std::optional<RingMember> decomposition;
      if (subset_arg.size() >= 2 && subset_arg.front() == '{' && subset_arg.back() == '}') {
        std::vector<std::string> labels;
        std::string body = subset_arg.substr(1, subset_arg.size() - 2);
        std::stringstream ss(body);
        std::string label;
        while (std::getline(ss, label, ',')) labels.push_back(label);
        ExplicitBackend::Mask mask = 0;
        for (const std::string& l : labels) {
          auto pos = explicit_backend.ground().index_of(l);
          if (!pos) throw std::invalid_argument("unknown ground element: " + l);
          mask |= ExplicitBackend::Mask{1} << *pos;
        }
        decomposition = explicit_backend.ring_membership(mask);
        report.kv("subset", explicit_backend.mask_name(mask));
      } else {
        throw std::invalid_argument("subsets look like {a,b}");
      }
      (void)probe;
      if (decomposition) {
        report.kv("in-ring", "yes");
        report.kv("decomposition", ring_member_text(backend, *decomposition));
        return 0;
      }
      report.kv("in-ring", "no");
      return 1;
    }
    std::vector<RingMember> ring = explicit_backend.generate_ring();
    report.kv("ring-size", std::to_string(ring.size()));
    for (const RingMember& r : ring) {
      report.item({{"member", explicit_backend.ring_member_name(r)},
                   {"decomposition", ring_member_text(backend, r)}},
                  explicit_backend.ring_member_name(r) + " = " + ring_member_text(backend, r));
    }
    return 0;
  }
  if (backend.kind() == BackendKind::NatIntervals && !subset_arg.empty()) {
    const auto& nat = static_cast<const NatIntervalBackend&>(backend);
    std::vector<std::uint64_t> elements;
    std::string body = subset_arg;
    if (body.size() >= 2 && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) elements.push_back(std::stoull(tok));
    RingMember r = nat.ring_membership(std::move(elements));
    report.kv("decomposition", ring_member_text(backend, r));
    return 0;
  }
  throw std::invalid_argument("ring needs an explicit backend, or --subset on nat-intervals");
}

int cmd_sup_inf(const Instance& instance, bool is_sup, const std::vector<std::string>& charge_names,
                const std::string& member_arg, Report& report) {
  Family family(pick_charges(instance, charge_names));
  LatticeResult result = is_sup ? sup_family(family) : inf_family(family);
  const SemiRingBackend& backend = *instance.backend;
  report.kv("operation", is_sup ? "sup" : "inf");
  for (MemberId m : members_to_report(instance, member_arg)) {
    LatticeValue v = result.at(m);
    ordered_json fields{{"member", backend.member_name(m)},
                        {"value", to_string(v.value)},
                        {"exactness", to_string(v.exactness)}};
    std::string line = backend.member_name(m) + " = " + to_string(v.value) + " [" +
                       to_string(v.exactness) + "]";
    if (v.witness) {
      fields["witness"] = partition_text(backend, *v.witness);
      line += " witness " + partition_text(backend, *v.witness);
    }
    report.item(std::move(fields), line);
  }
  return 0;
}

int cmd_jordan(const Instance& instance, const std::string& charge_name,
               const std::string& member_arg, Report& report) {
  const Charge& mu = instance.charge(charge_name);
  JordanParts parts = jordan(mu);
  const SemiRingBackend& backend = *instance.backend;
  report.kv("charge", charge_name);
  bool all_hold = true;
  for (MemberId m : members_to_report(instance, member_arg)) {
    LatticeValue var = parts.variation.at(m);
    JordanIdentityReport identities = check_jordan_identities(mu, parts, m);
    all_hold = all_hold && identities.holds;
    report.item({{"member", backend.member_name(m)},
                 {"pos", to_string(parts.pos.value(m))},
                 {"neg", to_string(parts.neg.value(m))},
                 {"variation", to_string(var.value)},
                 {"exactness", to_string(var.exactness)},
                 {"identities", identities.holds ? "ok" : identities.detail}},
                backend.member_name(m) + ": pos=" + to_string(parts.pos.value(m)) +
                    " neg=" + to_string(parts.neg.value(m)) + " var=" + to_string(var.value) + " [" +
                    to_string(var.exactness) + "] identities=" +
                    (identities.holds ? "ok" : identities.detail));
  }
  return all_hold ? 0 : 1;
}

int cmd_variation(const Instance& instance, const std::string& charge_name,
                  const std::string& member_arg, Report& report) {
  const Charge& mu = instance.charge(charge_name);
  LatticeResult variation = sup_family(Family({mu, mu.negated()}));
  const SemiRingBackend& backend = *instance.backend;
  report.kv("charge", charge_name);
  for (MemberId m : members_to_report(instance, member_arg)) {
    LatticeValue v = variation.at(m);
    ordered_json fields{{"member", backend.member_name(m)},
                        {"value", to_string(v.value)},
                        {"exactness", to_string(v.exactness)}};
    std::string line =
        backend.member_name(m) + " = " + to_string(v.value) + " [" + to_string(v.exactness) + "]";
    if (v.witness) {
      fields["witness"] = partition_text(backend, *v.witness);
      line += " witness " + partition_text(backend, *v.witness);
    }
    report.item(std::move(fields), line);
  }
  return 0;
}

int cmd_norm(const Instance& instance, const std::string& charge_name, const std::string& threshold,
             std::size_t horizon, Report& report) {
  const Charge& mu = instance.charge(charge_name);
  NormOptions options;
  if (horizon > 0) options.horizon = horizon;
  if (!threshold.empty()) {
    auto t = parse_rational(threshold);
    if (!t) throw std::invalid_argument("threshold must be a rational");
    options.divergence_threshold = *t;
  }
  NormResult result = ba_norm(mu, options);
  report.kv("charge", charge_name);
  report.kv("norm", to_string(result.value));
  report.kv("exactness", to_string(result.exactness));
  report.kv("witness", result.witness_member);
  report.kv("diverged", result.diverged ? "yes" : "no");
  return 0;
}

int cmd_meet(const Instance& instance, const std::string& charge_name, const std::string& member_arg,
             Report& report) {
  const Charge& mu = instance.charge(charge_name);
  MemberId m = parse_member(instance, member_arg);
  MeetReport result = meet_dichotomy(mu, m);
  report.kv("charge", charge_name);
  report.kv("member", instance.backend->member_name(m));
  report.kv("pos", to_string(result.pos_value));
  report.kv("neg", to_string(result.neg_value));
  report.kv("meet", to_string(result.meet_value));
  report.kv("verdict", result.verdict == MeetVerdict::Zero ? "zero" : "infinite");
  return 0;
}

int cmd_hahn(const Instance& instance, const std::string& charge_name, const std::string& member_arg,
             const std::string& epsilon_text, Report& report) {
  const Charge& mu = instance.charge(charge_name);
  MemberId m = parse_member(instance, member_arg);
  auto epsilon = parse_rational(epsilon_text);
  if (!epsilon || !(*epsilon > 0)) throw std::invalid_argument("epsilon must be a positive rational");
  HahnOutcome outcome = epsilon_hahn(mu, m, *epsilon);
  const SemiRingBackend& backend = *instance.backend;
  report.kv("charge", charge_name);
  report.kv("member", backend.member_name(m));
  report.kv("epsilon", to_string(*epsilon));
  switch (outcome.status) {
    case HahnOutcome::Status::Impossible:
      report.kv("status", "impossible");
      report.kv("reason", outcome.detail);
      return 0;
    case HahnOutcome::Status::SearchExhausted:
      report.kv("status", "search-exhausted");
      report.kv("reason", outcome.detail);
      return 1;
    case HahnOutcome::Status::Found:
      break;
  }
  const HahnCertificate& cert = *outcome.certificate;
  report.kv("status", "found");
  report.kv("h", ring_member_text(backend, cert.h));
  report.kv("complement", ring_member_text(backend, cert.complement));
  report.kv("source-partition", partition_text(backend, cert.source));
  HahnVerification verification = verify_hahn(mu, cert);
  report.kv("verification", verification.verified
                                ? "ok"
                                : "violated at " + verification.violating_subset + ": " + verification.detail);
  return verification.verified ? 0 : 1;
}

int cmd_density_sup(const Instance& instance, const std::vector<std::string>& density_names,
                    const std::string& member_arg, Report& report) {
  if (!instance.density_space) throw std::invalid_argument("the instance defines no density_space");
  const DensitySpace& space = *instance.density_space;
  std::vector<Density> family;
  if (density_names.empty()) {
    for (const auto& [name, density] : instance.densities) family.push_back(density);
  } else {
    for (const std::string& name : density_names) family.push_back(instance.density(name));
  }
  if (family.empty()) throw std::invalid_argument("no densities selected");

  PointSet subset = all_points(space);
  if (!member_arg.empty()) {
    // Point subsets are written {p1,p2,...} over the density-space labels.
    if (member_arg.size() < 2 || member_arg.front() != '{' || member_arg.back() != '}') {
      throw std::invalid_argument("density members look like {p1,p2}");
    }
    subset = 0;
    std::stringstream ss(member_arg.substr(1, member_arg.size() - 2));
    std::string label;
    while (std::getline(ss, label, ',')) {
      auto it = std::find(space.points.begin(), space.points.end(), label);
      if (it == space.points.end()) throw std::invalid_argument("unknown point: " + label);
      subset |= PointSet{1} << (it - space.points.begin());
    }
  }

  ExtReal by_partitions = sup_density_measures(space, family, subset);
  ExtReal by_integral = measure_of_density(space, pointwise_sup(space, family), subset);
  report.kv("partition-formula", to_string(by_partitions));
  report.kv("pointwise-sup-integral", to_string(by_integral));
  report.kv("agreement", by_partitions == by_integral ? "ok" : "MISMATCH");
  return by_partitions == by_integral ? 0 : 1;
}

int cmd_example(const std::string& id, bool list, Report& report) {
  if (list) {
    for (const std::string& fixture_id : catalog_ids()) {
      report.item({{"fixture", fixture_id}}, fixture_id);
    }
    return 0;
  }
  Fixture fixture = build_fixture(id);
  FixtureReport result = run_fixture(fixture);
  report.kv("fixture", fixture.id);
  report.kv("summary", fixture.summary);
  for (const FixtureCheckResult& check : result.checks) {
    report.item({{"check", check.description},
                 {"expected", check.expected},
                 {"actual", check.actual},
                 {"pass", check.pass ? "yes" : "no"}},
                std::string(check.pass ? "[PASS] " : "[FAIL] ") + check.description + ": expected " +
                    check.expected + ", got " + check.actual);
  }
  report.kv("result", result.all_pass ? "all checks passed" : "checks failed");
  return result.all_pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact lattice operations for signed charges on semi-rings"};
  app.require_subcommand(1);
  app.fallthrough();  // inherited: --format may follow the subcommand

  std::string format = "plain";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"plain", "json"}));

  std::string input, member, charge, epsilon, threshold, subset, example_id;
  std::vector<std::string> charge_names, density_names;
  std::size_t max_blocks = 0, horizon = 0;
  bool list_examples = false;

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "instance file")->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "validate an instance");
  add_input(validate);

  CLI::App* partitions = app.add_subcommand("partitions", "enumerate partitions of a member");
  add_input(partitions);
  partitions->add_option("--member", member, "target member")->required();
  partitions->add_option("--max-blocks", max_blocks, "cap on block count");

  CLI::App* ring = app.add_subcommand("ring", "generated ring, or one membership test");
  add_input(ring);
  ring->add_option("--subset", subset, "subset to test, {a,b}");

  CLI::App* sup = app.add_subcommand("sup", "constructive supremum of charges");
  add_input(sup);
  sup->add_option("--charges", charge_names, "comma-separated charge names")->delimiter(',');
  sup->add_option("--member", member, "report only this member");

  CLI::App* inf = app.add_subcommand("inf", "infimum by duality");
  add_input(inf);
  inf->add_option("--charges", charge_names, "comma-separated charge names")->delimiter(',');
  inf->add_option("--member", member, "report only this member");

  CLI::App* jordan_cmd = app.add_subcommand("jordan", "decomposition into positive and negative parts");
  add_input(jordan_cmd);
  jordan_cmd->add_option("--charge", charge, "charge name")->required();
  jordan_cmd->add_option("--member", member, "report only this member");

  CLI::App* variation = app.add_subcommand("variation", "the variation charge");
  add_input(variation);
  variation->add_option("--charge", charge, "charge name")->required();
  variation->add_option("--member", member, "report only this member");

  CLI::App* norm = app.add_subcommand("norm", "supremum of the variation over members");
  add_input(norm);
  norm->add_option("--charge", charge, "charge name")->required();
  norm->add_option("--threshold", threshold, "divergence threshold (rational)");
  norm->add_option("--horizon", horizon, "starting window on unbounded backends");

  CLI::App* meet = app.add_subcommand("meet", "meet of the two parts with the dichotomy verdict");
  add_input(meet);
  meet->add_option("--charge", charge, "charge name")->required();
  meet->add_option("--member", member, "member")->required();

  CLI::App* hahn_cmd = app.add_subcommand("hahn", "epsilon-Hahn decomposition");
  add_input(hahn_cmd);
  hahn_cmd->add_option("--charge", charge, "charge name")->required();
  hahn_cmd->add_option("--member", member, "member")->required();
  hahn_cmd->add_option("--epsilon", epsilon, "positive rational")->required();

  CLI::App* density_sup = app.add_subcommand("density-sup", "supremum of density-defined measures");
  add_input(density_sup);
  density_sup->add_option("--densities", density_names, "comma-separated density names")->delimiter(',');
  density_sup->add_option("--member", member, "point subset {p1,p2}");

  CLI::App* example = app.add_subcommand("example", "run a catalogued example");
  example->add_option("id", example_id, "fixture id");
  example->add_flag("--list", list_examples, "list fixture ids");

  std::vector<std::string> argv_order(args);
  try {
    std::vector<const char*> argv;
    argv.push_back("chargelat");
    for (const std::string& a : argv_order) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  Report report(format == "json");
  int status = 0;
  try {
    if (example->parsed()) {
      if (!list_examples && example_id.empty()) {
        err << "example needs an id or --list\n";
        return 2;
      }
      status = cmd_example(example_id, list_examples, report);
    } else {
      Instance instance = load_instance(input);
      if (validate->parsed()) status = cmd_validate(instance, report);
      if (partitions->parsed()) status = cmd_partitions(instance, member, max_blocks, report);
      if (ring->parsed()) status = cmd_ring(instance, subset, report);
      if (sup->parsed()) status = cmd_sup_inf(instance, true, charge_names, member, report);
      if (inf->parsed()) status = cmd_sup_inf(instance, false, charge_names, member, report);
      if (jordan_cmd->parsed()) status = cmd_jordan(instance, charge, member, report);
      if (variation->parsed()) status = cmd_variation(instance, charge, member, report);
      if (norm->parsed()) status = cmd_norm(instance, charge, threshold, horizon, report);
      if (meet->parsed()) status = cmd_meet(instance, charge, member, report);
      if (hahn_cmd->parsed()) status = cmd_hahn(instance, charge, member, epsilon, report);
      if (density_sup->parsed()) status = cmd_density_sup(instance, density_names, member, report);
    }
  } catch (const LoadError& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const UnknownFixture& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  report.print(out);
  return status;
}

}  // namespace chargelat
