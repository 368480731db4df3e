#include "chargelat/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chargelat {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw LoadError(where, what);
}

Rational require_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    if (auto r = parse_rational(j.get<std::string>())) return *r;
  }
  fail(where, "expected a rational like \"p/q\", \"p\" or an integer");
}

ExtReal require_ext_real(const json& j, const std::string& where) {
  if (j.is_number_integer()) return ExtReal(j.get<long long>());
  if (j.is_string()) {
    if (auto v = parse_ext_real(j.get<std::string>())) return *v;
  }
  fail(where, "expected \"p/q\", \"p\", \"+inf\" or \"-inf\"");
}

std::vector<std::string> require_label_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of ground labels");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(std::to_string(e.get<long long>()));
    } else {
      fail(where, "labels must be strings or integers");
    }
  }
  return out;
}

std::vector<std::uint64_t> require_nat_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of naturals");
  std::vector<std::uint64_t> out;
  for (const auto& e : j) {
    if (!e.is_number_unsigned() && !e.is_number_integer()) fail(where, "expected naturals");
    long long v = e.get<long long>();
    if (v < 0) fail(where, "expected naturals");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

MemberId member_from_json(const Instance& instance, const json& j, const std::string& where) {
  const SemiRingBackend& backend = *instance.backend;
  switch (backend.kind()) {
    case BackendKind::Explicit: {
      auto labels = require_label_list(j, where);
      try {
        return static_cast<const ExplicitBackend&>(backend).member_from_labels(labels);
      } catch (const std::invalid_argument& e) {
        fail(where, e.what());
      }
    }
    case BackendKind::NatIntervals: {
      if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) {
        fail(where, "nat-interval members look like {\"lo\": m, \"hi\": n}");
      }
      const auto& nat = static_cast<const NatIntervalBackend&>(backend);
      try {
        return nat.interval(j.at("lo").get<std::uint64_t>(), j.at("hi").get<std::uint64_t>());
      } catch (const std::invalid_argument& e) {
        fail(where, e.what());
      }
    }
    case BackendKind::GridIntervals: {
      if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) {
        fail(where, "grid members look like {\"lo\": \"p/q\", \"hi\": \"p/q\"}");
      }
      const auto& grid = static_cast<const GridIntervalBackend&>(backend);
      try {
        return grid.member_from_endpoints(require_rational(j.at("lo"), where + ".lo"),
                                          require_rational(j.at("hi"), where + ".hi"));
      } catch (const std::invalid_argument& e) {
        fail(where, e.what());
      }
    }
    case BackendKind::Cofinite: {
      const auto& cof = static_cast<const CofiniteBackend&>(backend);
      if (j.is_object() && j.contains("finite")) {
        return cof.member(CofiniteSet::finite(require_nat_list(j.at("finite"), where)));
      }
      if (j.is_object() && j.contains("cofinite")) {
        return cof.member(CofiniteSet::cofinite(require_nat_list(j.at("cofinite"), where)));
      }
      fail(where, "cofinite members look like {\"finite\": [..]} or {\"cofinite\": [..]}");
    }
  }
  fail(where, "unknown backend kind");
}

Charge charge_from_json(const Instance& instance, const std::string& name, const json& spec,
                        const std::string& where) {
  const auto& backend = instance.backend;
  switch (backend->kind()) {
    case BackendKind::Explicit: {
      auto explicit_backend = std::static_pointer_cast<const ExplicitBackend>(backend);
      if (spec.contains("point_weights")) {
        const json& pw = spec.at("point_weights");
        if (!pw.is_object()) fail(where, "point_weights must map labels to values");
        std::vector<ExtReal> weights(explicit_backend->ground().size(), ExtReal(0));
        for (const auto& [label, value] : pw.items()) {
          auto pos = explicit_backend->ground().index_of(label);
          if (!pos) fail(where, "unknown ground element: " + label);
          weights[*pos] = require_ext_real(value, where + "." + label);
        }
        auto result = charge_from_point_weights(explicit_backend, std::move(weights), name);
        if (!result.ok()) fail(where, result.violation->message());
        return *std::move(result.charge);
      }
      if (spec.contains("values")) {
        const json& entries = spec.at("values");
        if (!entries.is_array()) fail(where, "values must be a list of {member, value} pairs");
        const std::size_t count = *explicit_backend->member_count();
        std::vector<std::optional<ExtReal>> values(count);
        for (const auto& entry : entries) {
          if (!entry.is_object() || !entry.contains("member") || !entry.contains("value")) {
            fail(where, "each entry needs a member and a value");
          }
          MemberId m = member_from_json(instance, entry.at("member"), where + ".member");
          values[m.index] = require_ext_real(entry.at("value"), where + ".value");
        }
        std::vector<ExtReal> table;
        table.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
          if (!values[i]) {
            fail(where, "no value for member " +
                            explicit_backend->member_name(MemberId{static_cast<std::uint32_t>(i)}));
          }
          table.push_back(*values[i]);
        }
        auto result = validate_charge(explicit_backend, std::move(table), name);
        if (!result.ok()) fail(where, result.violation->message());
        return *std::move(result.charge);
      }
      fail(where, "explicit charges need values or point_weights");
    }
    case BackendKind::NatIntervals: {
      if (!spec.contains("weights") || !spec.at("weights").is_object()) {
        fail(where, "nat-interval charges need a weights map element -> rational");
      }
      auto weights = std::make_shared<std::map<std::uint64_t, Rational>>();
      for (const auto& [key, value] : spec.at("weights").items()) {
        std::uint64_t k = 0;
        try {
          k = std::stoull(key);
        } catch (...) {
          fail(where, "weight keys are naturals, got " + key);
        }
        (*weights)[k] = require_rational(value, where + "." + key);
      }
      return make_nat_weight_charge(std::static_pointer_cast<const NatIntervalBackend>(backend),
                                    [weights](std::uint64_t k) {
                                      auto it = weights->find(k);
                                      return it == weights->end() ? Rational(0) : it->second;
                                    },
                                    name);
    }
    case BackendKind::GridIntervals: {
      if (!spec.contains("cell_masses") || !spec.at("cell_masses").is_array()) {
        fail(where, "grid charges need a cell_masses list");
      }
      std::vector<Rational> masses;
      for (const auto& m : spec.at("cell_masses")) {
        masses.push_back(require_rational(m, where + ".cell_masses"));
      }
      try {
        return make_grid_mass_charge(std::static_pointer_cast<const GridIntervalBackend>(backend),
                                     std::move(masses), name);
      } catch (const std::invalid_argument& e) {
        fail(where, e.what());
      }
    }
    case BackendKind::Cofinite: {
      if (!spec.contains("rule") || !spec.at("rule").is_string()) {
        fail(where, "cofinite charges need a rule: card-cocard, card-neginf or zero");
      }
      const std::string rule_name = spec.at("rule").get<std::string>();
      auto rule = parse_cofinite_rule(rule_name);
      if (!rule || (*rule != CofiniteRule::CardCocard && *rule != CofiniteRule::CardNegInf &&
                    *rule != CofiniteRule::Zero)) {
        fail(where, "unknown rule " + rule_name + " (instances accept card-cocard, card-neginf, zero)");
      }
      SymbolicCharge symbolic{*rule, false, {}};
      if (spec.contains("perturbation")) {
        const json& p = spec.at("perturbation");
        if (!p.is_object()) fail(where, "perturbation maps naturals to rationals");
        for (const auto& [key, value] : p.items()) {
          std::uint64_t k = 0;
          try {
            k = std::stoull(key);
          } catch (...) {
            fail(where, "perturbation keys are naturals, got " + key);
          }
          symbolic.perturbation[k] = require_rational(value, where + "." + key);
        }
      }
      auto result = validate_symbolic_charge(std::static_pointer_cast<const CofiniteBackend>(backend),
                                             std::move(symbolic), name);
      if (!result.ok()) fail(where, result.violation->message());
      return *std::move(result.charge);
    }
  }
  fail(where, "unknown backend kind");
}

}  // namespace

MemberId Instance::member(const std::string& name) const {
  auto it = members.find(name);
  if (it == members.end()) throw std::invalid_argument("no member named " + name);
  return it->second;
}

const Charge& Instance::charge(const std::string& name) const {
  auto it = charges.find(name);
  if (it == charges.end()) throw std::invalid_argument("no charge named " + name);
  return it->second;
}

const Density& Instance::density(const std::string& name) const {
  auto it = densities.find(name);
  if (it == densities.end()) throw std::invalid_argument("no density named " + name);
  return it->second;
}

Instance parse_instance(const std::string& json_text, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(source_name, e.what());
  }
  if (!doc.is_object()) fail(source_name, "instance must be a JSON object");

  Instance instance;
  if (doc.contains("backend")) {
    const std::string kind = doc.at("backend").is_string() ? doc.at("backend").get<std::string>() : "";
    if (kind == "explicit") {
      if (!doc.contains("ground")) fail(source_name, "explicit backends need a ground list");
      GroundSet ground{require_label_list(doc.at("ground"), source_name + ".ground")};
      if (!doc.contains("family")) fail(source_name, "explicit backends need a family list");
      if (!doc.at("family").is_array()) fail(source_name + ".family", "expected a list of label lists");
      std::vector<std::vector<std::string>> family;
      for (const auto& subset : doc.at("family")) {
        family.push_back(require_label_list(subset, source_name + ".family"));
      }
      ValidateSemiringResult validated;
      try {
        validated = validate_semiring(std::move(ground), family);
      } catch (const std::invalid_argument& e) {
        fail(source_name + ".family", e.what());
      }
      if (!validated.ok()) fail(source_name + ".family", validated.violation->message());
      instance.backend = validated.backend;
    } else if (kind == "nat-intervals") {
      std::uint64_t min_element = 0;
      if (doc.contains("min_element")) min_element = doc.at("min_element").get<std::uint64_t>();
      instance.backend = std::make_shared<NatIntervalBackend>(min_element);
    } else if (kind == "grid-intervals") {
      if (!doc.contains("grid") || !doc.at("grid").is_array()) {
        fail(source_name, "grid backends need a grid list of rationals");
      }
      EndpointGrid grid;
      for (const auto& p : doc.at("grid")) {
        grid.points.push_back(require_rational(p, source_name + ".grid"));
      }
      try {
        instance.backend = std::make_shared<GridIntervalBackend>(std::move(grid));
      } catch (const std::invalid_argument& e) {
        fail(source_name + ".grid", e.what());
      }
    } else if (kind == "cofinite") {
      instance.backend = std::make_shared<CofiniteBackend>();
    } else {
      fail(source_name + ".backend",
           "expected explicit, nat-intervals, grid-intervals or cofinite");
    }
  }

  if (doc.contains("members")) {
    if (!instance.backend) fail(source_name + ".members", "members need a backend");
    for (const auto& [name, spec] : doc.at("members").items()) {
      instance.members.emplace(name, member_from_json(instance, spec, source_name + ".members." + name));
    }
  }
  if (doc.contains("charges")) {
    if (!instance.backend) fail(source_name + ".charges", "charges need a backend");
    for (const auto& [name, spec] : doc.at("charges").items()) {
      instance.charges.emplace(name,
                               charge_from_json(instance, name, spec, source_name + ".charges." + name));
    }
  }
  if (doc.contains("density_space")) {
    const json& ds = doc.at("density_space");
    if (!ds.is_object() || !ds.contains("points") || !ds.contains("weights")) {
      fail(source_name + ".density_space", "needs points and weights lists");
    }
    std::vector<std::string> points = require_label_list(ds.at("points"), source_name + ".density_space.points");
    std::vector<Rational> weights;
    for (const auto& w : ds.at("weights")) {
      weights.push_back(require_rational(w, source_name + ".density_space.weights"));
    }
    std::vector<std::vector<std::uint32_t>> cells;
    if (ds.contains("cells")) {
      for (const auto& cell : ds.at("cells")) {
        std::vector<std::uint32_t> indices;
        for (const auto& p : cell) indices.push_back(p.get<std::uint32_t>());
        cells.push_back(std::move(indices));
      }
    }
    try {
      instance.density_space = make_density_space(std::move(points), std::move(weights), std::move(cells));
    } catch (const std::invalid_argument& e) {
      fail(source_name + ".density_space", e.what());
    }
  }
  if (doc.contains("densities")) {
    if (!instance.density_space) fail(source_name + ".densities", "densities need a density_space");
    for (const auto& [name, values] : doc.at("densities").items()) {
      if (!values.is_array()) fail(source_name + ".densities." + name, "expected a value list");
      std::vector<ExtReal> v;
      for (const auto& e : values) v.push_back(require_ext_real(e, source_name + ".densities." + name));
      try {
        instance.densities.emplace(name, validate_density(*instance.density_space, std::move(v), name));
      } catch (const std::invalid_argument& e) {
        fail(source_name + ".densities." + name, e.what());
      }
    }
  }
  return instance;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str(), path);
}

MemberId parse_member(const Instance& instance, const std::string& text) {
  if (auto it = instance.members.find(text); it != instance.members.end()) return it->second;
  if (!instance.backend) throw std::invalid_argument("no backend loaded");
  const SemiRingBackend& backend = *instance.backend;

  auto split_csv = [](std::string_view body) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      if (comma == std::string_view::npos) comma = body.size();
      if (comma > start) parts.emplace_back(body.substr(start, comma - start));
      start = comma + 1;
    }
    return parts;
  };

  switch (backend.kind()) {
    case BackendKind::Explicit: {
      if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
        auto labels = split_csv(std::string_view(text).substr(1, text.size() - 2));
        return static_cast<const ExplicitBackend&>(backend).member_from_labels(labels);
      }
      break;
    }
    case BackendKind::NatIntervals:
    case BackendKind::GridIntervals: {
      if (text.size() >= 2 && text.front() == '[' && text.back() == ')') {
        auto parts = split_csv(std::string_view(text).substr(1, text.size() - 2));
        if (parts.size() == 2) {
          if (backend.kind() == BackendKind::NatIntervals) {
            return static_cast<const NatIntervalBackend&>(backend).interval(std::stoull(parts[0]),
                                                                            std::stoull(parts[1]));
          }
          auto lo = parse_rational(parts[0]);
          auto hi = parse_rational(parts[1]);
          if (lo && hi) {
            return static_cast<const GridIntervalBackend&>(backend).member_from_endpoints(*lo, *hi);
          }
        }
      }
      break;
    }
    case BackendKind::Cofinite: {
      const auto& cof = static_cast<const CofiniteBackend&>(backend);
      std::string_view body(text);
      bool cofinite = false;
      if (body.rfind("N\\", 0) == 0) {
        cofinite = true;
        body.remove_prefix(2);
      }
      if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
        std::vector<std::uint64_t> elems;
        for (const std::string& p : split_csv(body.substr(1, body.size() - 2))) {
          elems.push_back(std::stoull(p));
        }
        return cof.member(cofinite ? CofiniteSet::cofinite(std::move(elems))
                                   : CofiniteSet::finite(std::move(elems)));
      }
      break;
    }
  }
  throw std::invalid_argument("cannot parse member denotation: " + text);
}

}  // namespace chargelat
