#pragma once

#include <map>
#include <optional>
#include <string>

#include "chargelat/charge.hpp"
#include "chargelat/density.hpp"

namespace chargelat {

/// A loaded problem instance: a backend with named members, charges and
/// densities, everything validated on load.
struct Instance {
  std::shared_ptr<const SemiRingBackend> backend;
  std::map<std::string, MemberId> members;
  std::map<std::string, Charge> charges;
  std::optional<DensitySpace> density_space;
  std::map<std::string, Density> densities;

  MemberId member(const std::string& name) const;
  const Charge& charge(const std::string& name) const;
  const Density& density(const std::string& name) const;
};

struct LoadError : std::runtime_error {
  LoadError(std::string location, const std::string& what)
      : std::runtime_error(location + ": " + what), location(std::move(location)) {}
  std::string location;
};

Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text, const std::string& source_name = "<string>");

/// Parses a member denotation against the instance's backend: a named member,
/// an explicit label list "{a,b}", an interval "[lo,hi)", or a cofinite form
/// "{1,2}" / "N\{1,2}".
MemberId parse_member(const Instance& instance, const std::string& text);

}  // namespace chargelat
