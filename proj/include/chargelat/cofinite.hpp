#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "chargelat/setsys.hpp"
#include "chargelat/xreal.hpp"

namespace chargelat {

/// A member of the algebra {A subset of N : A or its complement is finite},
/// kept canonical: Finite({}) is the empty set, Cofinite({}) is all of N.
struct CofiniteSet {
  enum class Kind { Finite, Cofinite };

  Kind kind = Kind::Finite;
  std::vector<std::uint64_t> support;  // the set itself, or its complement; sorted, distinct

  static CofiniteSet finite(std::vector<std::uint64_t> elements);
  static CofiniteSet cofinite(std::vector<std::uint64_t> complement);

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_empty() const { return is_finite() && support.empty(); }
  bool contains(std::uint64_t k) const;
  /// Cardinality: element count, or +inf for cofinite sets.
  ExtReal card() const;
  /// Smallest element; only valid for nonempty sets.
  std::uint64_t min_element() const;

  friend bool operator==(const CofiniteSet&, const CofiniteSet&) = default;
};

CofiniteSet intersect(const CofiniteSet& a, const CofiniteSet& b);
CofiniteSet unite(const CofiniteSet& a, const CofiniteSet& b);
CofiniteSet difference(const CofiniteSet& a, const CofiniteSet& b);
bool is_subset(const CofiniteSet& a, const CofiniteSet& b);
std::string to_string(const CofiniteSet& a);

class CofiniteBackend final : public SemiRingBackend {
public:
  CofiniteBackend() = default;

  BackendKind kind() const override { return BackendKind::Cofinite; }
  std::string describe() const override { return "cofinite algebra over N"; }

  MemberId empty_member() const override;
  bool is_empty(MemberId a) const override { return set_of(a).is_empty(); }
  MemberId intersect(MemberId a, MemberId b) const override;
  std::vector<MemberId> difference_decomposition(MemberId a, MemberId b) const override;
  bool is_subset(MemberId a, MemberId b) const override;
  std::uint64_t block_order_key(MemberId a) const override;
  bool union_equals(std::span<const MemberId> blocks, MemberId target) const override;
  std::string member_name(MemberId a) const override;
  EnumerationStatus for_each_member(std::optional<std::size_t> bound,
                                    const std::function<bool(MemberId)>& visit) const override;
  std::optional<std::size_t> member_count() const override { return std::nullopt; }

  /// Finite members (up to 12 elements) are enumerated completely. Cofinite
  /// members have infinitely many partitions: the enumeration covers those
  /// whose finite blocks are drawn from the first `element_horizon` elements
  /// (default 4) and reports itself incomplete.
  EnumerationStatus for_each_partition(MemberId a, const PartitionOptions& opts,
                                       const std::function<bool(const Partition&)>& visit) const override;

  MemberId member(CofiniteSet set) const;
  CofiniteSet set_of(MemberId a) const;
  MemberId universe() const;

  /// The first n elements of the member, in increasing order.
  std::vector<std::uint64_t> first_elements(MemberId a, std::size_t n) const;

private:
  mutable std::mutex mutex_;
  mutable std::vector<CofiniteSet> table_;
  mutable std::map<std::pair<int, std::vector<std::uint64_t>>, std::uint32_t> index_;
};

/// Closed-form charge rules on the cofinite algebra. The first three are the
/// public, instance-loadable rules; the *PosInf rules arise as positive and
/// negative parts and as variations.
enum class CofiniteRule {
  CardCocard,   // card(A) on finite members, -card(complement) on cofinite ones
  CardNegInf,   // card(A) on finite members, -inf on cofinite ones
  Zero,         // identically 0
  CardPosInf,   // card(A) on finite members, +inf on cofinite ones
  ZeroPosInf,   // 0 on finite members, +inf on cofinite ones
};

std::string to_string(CofiniteRule rule);
std::optional<CofiniteRule> parse_cofinite_rule(std::string_view text);

/// A charge on the cofinite algebra given in closed form: a rule, an optional
/// global negation, and a finite-support rational perturbation added on top.
struct SymbolicCharge {
  CofiniteRule rule = CofiniteRule::Zero;
  bool negated = false;
  std::map<std::uint64_t, Rational> perturbation;

  bool pure() const { return perturbation.empty(); }
  std::string describe() const;

  friend bool operator==(const SymbolicCharge&, const SymbolicCharge&) = default;
};

ExtReal symbolic_value(const SymbolicCharge& charge, const CofiniteSet& a);
SymbolicCharge symbolic_negate(SymbolicCharge charge);

/// True when the rule evaluates to -inf (resp. +inf) somewhere; such values
/// occur exactly on the cofinite members.
bool symbolic_attains_neg_inf(const SymbolicCharge& charge);
bool symbolic_attains_pos_inf(const SymbolicCharge& charge);

struct UnsupportedRule : std::runtime_error {
  explicit UnsupportedRule(const std::string& what) : std::runtime_error(what) {}
};

/// Closed-form positive and negative parts. Perturbed charges are refused
/// (UnsupportedRule): their parts have no catalogued closed form.
std::pair<SymbolicCharge, SymbolicCharge> jordan_symbolic(const SymbolicCharge& charge);

/// Closed-form variation (the sum of the two Jordan parts).
SymbolicCharge symbolic_variation(const SymbolicCharge& charge);

/// Best value of sum_blocks max(charge, -charge) over partitions of `a` that
/// split off at most `depth` finite blocks: a certified lower bound for the
/// variation, monotone nondecreasing in depth, exact for small finite `a`.
ExtReal variation_lower_bound(const SymbolicCharge& charge, const CofiniteSet& a, std::size_t depth);

}  // namespace chargelat
