#pragma once

#include <span>
#include <string>
#include <vector>

#include "chargelat/lattice.hpp"

namespace chargelat {

/// A discrete sigma-finite measure space: countably many points realized as
/// an explicit finite list, nonnegative rational weights, and a witness
/// partition of the points into finite-weight cells.
struct DensitySpace {
  std::vector<std::string> points;
  std::vector<Rational> weights;
  std::vector<std::vector<std::uint32_t>> witness_cells;

  std::size_t size() const { return points.size(); }
};

/// Validates weights >= 0 and the witness cells (a partition of the points;
/// singletons when omitted).
DensitySpace make_density_space(std::vector<std::string> points, std::vector<Rational> weights,
                                std::vector<std::vector<std::uint32_t>> witness_cells = {});

/// A density: one value per point, in (-inf, +inf]. The negative part must
/// integrate finitely, which is automatic on finite realizations.
struct Density {
  std::vector<ExtReal> values;
  std::string name;
};

Density validate_density(const DensitySpace& space, std::vector<ExtReal> values, std::string name = "");

using PointSet = std::uint64_t;  // bitset over the point list (up to 64 points)
PointSet all_points(const DensitySpace& space);

/// The integral over `subset`: sum of value * weight, with 0 * inf = 0.
ExtReal measure_of_density(const DensitySpace& space, const Density& f, PointSet subset);

Density pointwise_sup(const DensitySpace& space, std::span<const Density> family);

/// The power set of the points as an explicit backend, and the charge a
/// density induces on it. These feed the partition-based supremum.
std::shared_ptr<const ExplicitBackend> density_power_backend(const DensitySpace& space);
Charge induced_charge(const DensitySpace& space, const Density& f,
                      std::shared_ptr<const ExplicitBackend> backend);

/// The supremum of the density-defined measures at `subset`, computed by the
/// constructive partition formula — an independent route from integrating the
/// pointwise supremum, with which it provably agrees.
ExtReal sup_density_measures(const DensitySpace& space, std::span<const Density> family,
                             PointSet subset);

struct DensityVariation {
  ExtReal pos;
  ExtReal neg;
  ExtReal var;
};

/// Direct positive part / negative part / variation integrals over `subset`.
DensityVariation variation_of_density(const DensitySpace& space, const Density& f, PointSet subset);

}  // namespace chargelat
