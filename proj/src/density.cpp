#include "chargelat/density.hpp"

#include <algorithm>
#include <stdexcept>

namespace chargelat {

namespace {

// 0 * inf = 0: zero-weight points contribute nothing even where f = +inf.
ExtReal density_term(const ExtReal& f, const Rational& weight) {
  if (weight == 0) return ExtReal(0);
  if (f.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(f.finite_value() * weight);
}

}  // namespace

DensitySpace make_density_space(std::vector<std::string> points, std::vector<Rational> weights,
                                std::vector<std::vector<std::uint32_t>> witness_cells) {
  if (points.size() != weights.size()) {
    throw std::invalid_argument("density space needs one weight per point");
  }
  if (points.size() > 64) throw std::invalid_argument("density spaces are limited to 64 points");
  for (const Rational& w : weights) {
    if (w < 0) throw std::invalid_argument("base weights must be nonnegative");
  }
  if (witness_cells.empty()) {
    for (std::uint32_t i = 0; i < points.size(); ++i) witness_cells.push_back({i});
  }
  std::vector<bool> seen(points.size(), false);
  for (const auto& cell : witness_cells) {
    for (std::uint32_t p : cell) {
      if (p >= points.size() || seen[p]) {
        throw std::invalid_argument("witness cells must partition the points");
      }
      seen[p] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("witness cells must cover every point");
  }
  return DensitySpace{std::move(points), std::move(weights), std::move(witness_cells)};
}

Density validate_density(const DensitySpace& space, std::vector<ExtReal> values, std::string name) {
  if (values.size() != space.size()) {
    throw std::invalid_argument("density needs one value per point");
  }
  for (const ExtReal& v : values) {
    if (v.is_neg_inf()) throw std::invalid_argument("densities take values in (-inf, +inf]");
  }
  // The negative part integrates finitely: finitely many finite terms.
  return Density{std::move(values), std::move(name)};
}

PointSet all_points(const DensitySpace& space) {
  if (space.size() == 64) return ~PointSet{0};
  return (PointSet{1} << space.size()) - 1;
}

ExtReal measure_of_density(const DensitySpace& space, const Density& f, PointSet subset) {
  ExtReal acc(0);
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (subset & (PointSet{1} << s)) acc = add(acc, density_term(f.values[s], space.weights[s]));
  }
  return acc;
}

Density pointwise_sup(const DensitySpace& space, std::span<const Density> family) {
  if (family.empty()) throw EmptyFamily();
  std::vector<ExtReal> values;
  values.reserve(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) {
    ExtReal best = family.front().values[s];
    for (const Density& f : family.subspan(1)) best = max(best, f.values[s]);
    values.push_back(std::move(best));
  }
  return Density{std::move(values), "sup"};
}

std::shared_ptr<const ExplicitBackend> density_power_backend(const DensitySpace& space) {
  if (space.size() > 16) {
    throw std::invalid_argument("the partition-formula route needs 16 points or fewer");
  }
  return make_power_set_backend(GroundSet{space.points});
}

Charge induced_charge(const DensitySpace& space, const Density& f,
                      std::shared_ptr<const ExplicitBackend> backend) {
  std::vector<ExtReal> point_weights;
  point_weights.reserve(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) {
    point_weights.push_back(density_term(f.values[s], space.weights[s]));
  }
  auto result = charge_from_point_weights(std::move(backend), std::move(point_weights), f.name);
  if (!result.ok()) throw std::logic_error("induced density charge invalid: " + result.violation->message());
  return *std::move(result.charge);
}

ExtReal sup_density_measures(const DensitySpace& space, std::span<const Density> family,
                             PointSet subset) {
  if (family.empty()) throw EmptyFamily();
  auto backend = density_power_backend(space);
  std::vector<Charge> charges;
  charges.reserve(family.size());
  for (const Density& f : family) charges.push_back(induced_charge(space, f, backend));
  auto member = backend->find_member(static_cast<ExplicitBackend::Mask>(subset));
  if (!member) throw std::invalid_argument("subset outside the point set");
  return sup_family(Family(std::move(charges))).at(*member).value;
}

DensityVariation variation_of_density(const DensitySpace& space, const Density& f, PointSet subset) {
  DensityVariation out{ExtReal(0), ExtReal(0), ExtReal(0)};
  for (std::size_t s = 0; s < space.size(); ++s) {
    if (!(subset & (PointSet{1} << s))) continue;
    const ExtReal& v = f.values[s];
    ExtReal pos_part = max(v, ExtReal(0));
    ExtReal neg_part = max(neg(v), ExtReal(0));
    out.pos = add(out.pos, density_term(pos_part, space.weights[s]));
    out.neg = add(out.neg, density_term(neg_part, space.weights[s]));
    out.var = add(out.var, density_term(abs(v), space.weights[s]));
  }
  return out;
}

}  // namespace chargelat
