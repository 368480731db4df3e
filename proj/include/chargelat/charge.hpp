#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chargelat/cofinite.hpp"
#include "chargelat/intervals.hpp"
#include "chargelat/setsys.hpp"
#include "chargelat/xreal.hpp"

namespace chargelat {

/// Which infinity a charge avoids. Finite charges avoid both. The branch
/// taken by the decomposition identities is this stored datum, never a guess.
enum class Polarity { Finite, AvoidsNegInf, AvoidsPosInf };

std::string to_string(Polarity p);

struct InadmissibleFamily : std::runtime_error {
  explicit InadmissibleFamily(const std::string& member_name)
      : std::runtime_error("family violates admissibility at " + member_name), member(member_name) {}
  std::string member;
};

/// An arbitrary set function: a valuation on members with no additivity
/// requirement. Inputs of the raw supremum, and the common view charges
/// expose.
class SetFunction {
public:
  SetFunction(std::shared_ptr<const SemiRingBackend> backend, std::function<ExtReal(MemberId)> eval,
              std::string name = "");

  const std::shared_ptr<const SemiRingBackend>& backend() const { return backend_; }
  const std::string& name() const { return name_; }
  ExtReal value(MemberId a) const { return eval_(a); }
  SetFunction negated() const;

  static SetFunction from_table(std::shared_ptr<const ExplicitBackend> backend,
                                std::vector<ExtReal> values, std::string name = "");

private:
  std::shared_ptr<const SemiRingBackend> backend_;
  std::function<ExtReal(MemberId)> eval_;
  std::string name_;
};

/// A finitely additive set function avoiding one of the infinities, as
/// validated data. Presentations are backend-specific: explicit value tables,
/// per-element weights (nat intervals), per-cell masses (grid intervals), or
/// closed-form rules (cofinite). Cheap to copy; negation is a flag flip.
class Charge {
public:
  enum class Presentation { Table, NatWeights, GridMasses, Symbolic };

  const std::shared_ptr<const SemiRingBackend>& backend() const;
  const std::string& name() const { return name_; }
  Presentation presentation() const;
  Polarity polarity() const;
  bool is_negated() const { return negated_; }

  ExtReal value(MemberId a) const;
  Charge negated() const;
  Charge renamed(std::string name) const;
  SetFunction as_set_function() const;

  /// Table presentation only: values indexed by member index.
  const std::vector<ExtReal>& table() const;
  /// Symbolic presentation only: the rule with the charge-level negation folded in.
  SymbolicCharge effective_symbolic() const;

  struct Data;

private:
  friend ExtReal interval_value(const Charge& charge, std::uint64_t from, std::uint64_t to);
  friend std::pair<std::uint64_t, std::uint64_t> interval_span(const Charge& charge, MemberId a);
  friend Charge add_charges(const Charge& a, const Charge& b, std::string name);
  friend class ChargeFactory;

  Charge() = default;

  std::shared_ptr<const Data> data_;
  bool negated_ = false;
  std::string name_;
};

/// Value of an interval charge on [from,to): element range on the nat
/// backend, cell-index range on the grid backend. Constant time via cached
/// prefix sums.
ExtReal interval_value(const Charge& charge, std::uint64_t from, std::uint64_t to);
std::pair<std::uint64_t, std::uint64_t> interval_span(const Charge& charge, MemberId a);

/// Memberwise sum; defined for charges of matching presentation on a common
/// backend (tables, weights and masses — not symbolic rules).
Charge add_charges(const Charge& a, const Charge& b, std::string name);

struct ChargeViolation {
  enum class Kind { ValuationIncomplete, EmptyNotZero, NotAdditive, AttainsBothInfinities };
  Kind kind;
  std::string member;    // the member A at fault (or the +inf witness)
  std::string detail;    // partition and both sides for NotAdditive; -inf witness otherwise

  std::string message() const;
};

struct ValidateChargeResult {
  std::optional<Charge> charge;
  std::optional<ChargeViolation> violation;

  bool ok() const { return charge.has_value(); }
};

/// Explicit-backend validation: checks the empty set, scans for mixed
/// infinities, and verifies additivity over every partition of every member.
ValidateChargeResult validate_charge(std::shared_ptr<const ExplicitBackend> backend,
                                     std::vector<ExtReal> values, std::string name = "");

/// Charge from per-element weights: additive by construction, so only the
/// infinity scan applies.
ValidateChargeResult charge_from_point_weights(std::shared_ptr<const ExplicitBackend> backend,
                                               std::vector<ExtReal> point_weights, std::string name = "");

/// Per-element rational weights on the nat-interval backend; values are the
/// finite sums over the run, so the charge is finite and additive structurally.
Charge make_nat_weight_charge(std::shared_ptr<const NatIntervalBackend> backend,
                              std::function<Rational(std::uint64_t)> weight, std::string name = "");

/// Per-cell rational masses on the grid backend.
Charge make_grid_mass_charge(std::shared_ptr<const GridIntervalBackend> backend,
                             std::vector<Rational> cell_masses, std::string name = "");

/// Closed-form rule on the cofinite backend. Additivity of the rule is
/// spot-checked on seeded random disjoint unions inside the algebra.
ValidateChargeResult validate_symbolic_charge(std::shared_ptr<const CofiniteBackend> backend,
                                              SymbolicCharge rule, std::string name = "",
                                              std::uint64_t seed = 20240901);

/// A nonempty family of charges over a common backend; the index set is the
/// position in the list.
class Family {
public:
  explicit Family(std::vector<Charge> charges);

  const std::vector<Charge>& charges() const { return charges_; }
  const std::shared_ptr<const SemiRingBackend>& backend() const;
  Family negated() const;

private:
  std::vector<Charge> charges_;
};

struct AdmissibilityReport {
  bool ok = true;
  std::string witness;  // member where every charge is -inf
};

/// The family-level condition sup_j of the values > -inf on every member.
/// Exhaustive on explicit backends; structural on interval backends (weights
/// are finite); rule introspection on the cofinite backend.
AdmissibilityReport check_admissibility(const Family& family);

/// Raw set-function variant (explicit backends only).
AdmissibilityReport check_admissibility(std::span<const SetFunction> family);

/// The identically-zero charge on any backend.
Charge make_zero_charge(std::shared_ptr<const SemiRingBackend> backend);

/// Extension value on the generated ring: the block sum of the canonical
/// decomposition. Independent of the decomposition chosen.
ExtReal ring_value(const Charge& mu, const RingMember& r);

/// The generated ring of an explicit backend, itself as an explicit backend.
std::shared_ptr<const ExplicitBackend> generated_ring_backend(const ExplicitBackend& base);

/// The unique extension of `mu` onto the generated ring, as a charge there.
Charge extend_charge(const Charge& mu, std::shared_ptr<const ExplicitBackend> ring_backend);

/// The generated ring of an explicit backend, itself as an explicit backend,
/// together with the uniquely extended charge on it.
struct ExplicitRingExtension {
  std::shared_ptr<const ExplicitBackend> ring_backend;
  Charge extended;
};
ExplicitRingExtension extend_to_explicit_ring(const Charge& mu);

struct WitnessVerdict {
  bool confirmed = true;
  std::optional<std::size_t> failure_index;  // 1-based truncation N where the bound broke
  std::string detail;
};

/// Checks |mu(target) - partial sum over the first N pieces| <= tail_bound(N)
/// for every N up to the number of supplied pieces. Pieces must be pairwise
/// disjoint members inside target (checked; violations throw). A failure is
/// a witness against countable additivity at that truncation.
WitnessVerdict check_countable_additivity_witness(const Charge& mu, MemberId target,
                                                  std::span<const MemberId> pieces,
                                                  const std::function<ExtReal(std::size_t)>& tail_bound);

}  // namespace chargelat
