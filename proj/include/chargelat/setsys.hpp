#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chargelat/xreal.hpp"

namespace chargelat {

/// Opaque handle for one member of a semi-ring. Handles are canonical within
/// their backend: two handles are equal iff they denote the same subset.
struct MemberId {
  std::uint32_t index = 0;
  friend bool operator==(MemberId, MemberId) = default;
  friend auto operator<=>(MemberId, MemberId) = default;
};

enum class BackendKind { Explicit, NatIntervals, GridIntervals, Cofinite };

/// A finite partition of `target` by pairwise-disjoint nonempty members.
/// Blocks are kept in canonical order (ascending by smallest element), so a
/// set of blocks has exactly one representation. The empty member has exactly
/// one partition: the empty block list.
struct Partition {
  MemberId target;
  std::vector<MemberId> blocks;
};

/// A member of the ring generated by the semi-ring: a canonical finite
/// disjoint union of members. The empty list denotes the empty set.
struct RingMember {
  std::vector<MemberId> blocks;
};

struct PartitionOptions {
  /// Cap on the number of blocks; enumeration is complete up to this bound.
  std::optional<std::size_t> max_blocks;
  /// For members with infinitely many partitions (cofinite backend): finite
  /// blocks are drawn from the first `element_horizon` elements of the target.
  std::optional<std::size_t> element_horizon;
};

struct EnumerationStatus {
  bool complete = true;
};

/// The semi-ring presentation every backend provides: the empty set is a
/// member, intersections are members, and differences decompose into finite
/// disjoint unions of members.
class SemiRingBackend {
public:
  virtual ~SemiRingBackend() = default;

  virtual BackendKind kind() const = 0;
  virtual std::string describe() const = 0;

  virtual MemberId empty_member() const = 0;
  virtual bool is_empty(MemberId a) const = 0;
  virtual MemberId intersect(MemberId a, MemberId b) const = 0;

  /// Pairwise-disjoint members whose union is exactly a \ b, in canonical
  /// order. Empty when a is a subset of b.
  virtual std::vector<MemberId> difference_decomposition(MemberId a, MemberId b) const = 0;

  virtual bool is_subset(MemberId a, MemberId b) const = 0;
  bool disjoint(MemberId a, MemberId b) const { return is_empty(intersect(a, b)); }

  /// Sort key giving the canonical block order (position of the smallest
  /// element; an all-but-finite block sorts last).
  virtual std::uint64_t block_order_key(MemberId a) const = 0;

  /// True iff the union of the (pairwise-disjoint) blocks equals target.
  virtual bool union_equals(std::span<const MemberId> blocks, MemberId target) const = 0;

  virtual std::string member_name(MemberId a) const = 0;

  /// Enumerates members in a fixed monotone order; `bound` caps the number
  /// emitted. Finite backends are complete whenever the bound allows.
  virtual EnumerationStatus for_each_member(std::optional<std::size_t> bound,
                                            const std::function<bool(MemberId)>& visit) const = 0;
  virtual std::optional<std::size_t> member_count() const = 0;

  /// Enumerates the finite partitions of `a`, each exactly once, in a fixed
  /// canonical order. The visitor returns false to stop early.
  virtual EnumerationStatus for_each_partition(MemberId a, const PartitionOptions& opts,
                                               const std::function<bool(const Partition&)>& visit) const = 0;
};

/// Validates blocks (nonempty, pairwise disjoint, union = target) and returns
/// the canonical Partition; nullopt when the blocks do not partition target.
std::optional<Partition> make_partition(const SemiRingBackend& backend, MemberId target,
                                        std::vector<MemberId> blocks);

/// The common refinement: all nonempty pairwise intersections. Requires
/// p.target = q.target.
Partition common_refinement(const SemiRingBackend& backend, const Partition& p, const Partition& q);

/// Finite ordered ground set for the explicit backend.
struct GroundSet {
  std::vector<std::string> labels;

  std::size_t size() const { return labels.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;
};

struct SemiRingViolation {
  enum class Kind { MissingEmpty, IntersectionNotMember, DifferenceNotDecomposable };
  Kind kind;
  std::string witness_a;
  std::string witness_b;

  std::string message() const;
};

struct ValidateSemiringResult;

/// Explicit finite backend: members are bitsets over the ground ordering, so
/// disjointness tests during exact-cover search are single mask operations.
class ExplicitBackend final : public SemiRingBackend {
public:
  using Mask = std::uint32_t;

  static constexpr std::size_t kMaxGround = 20;

  BackendKind kind() const override { return BackendKind::Explicit; }
  std::string describe() const override;

  MemberId empty_member() const override { return MemberId{0}; }
  bool is_empty(MemberId a) const override { return mask_of(a) == 0; }
  MemberId intersect(MemberId a, MemberId b) const override;
  std::vector<MemberId> difference_decomposition(MemberId a, MemberId b) const override;
  bool is_subset(MemberId a, MemberId b) const override {
    return (mask_of(a) & ~mask_of(b)) == 0;
  }
  std::uint64_t block_order_key(MemberId a) const override;
  bool union_equals(std::span<const MemberId> blocks, MemberId target) const override;
  std::string member_name(MemberId a) const override;
  EnumerationStatus for_each_member(std::optional<std::size_t> bound,
                                    const std::function<bool(MemberId)>& visit) const override;
  std::optional<std::size_t> member_count() const override { return members_.size(); }
  EnumerationStatus for_each_partition(MemberId a, const PartitionOptions& opts,
                                       const std::function<bool(const Partition&)>& visit) const override;

  const GroundSet& ground() const { return ground_; }
  Mask mask_of(MemberId a) const { return members_.at(a.index); }
  std::optional<MemberId> find_member(Mask mask) const;
  MemberId member_from_labels(std::span<const std::string> labels) const;
  std::string mask_name(Mask mask) const;
  Mask full_mask() const { return full_mask_; }

  /// Canonical disjoint decomposition of `subset` into members, or nullopt
  /// when `subset` is not in the generated ring.
  std::optional<RingMember> ring_membership(Mask subset) const;

  /// Every member of the generated ring, in ascending mask order.
  std::vector<RingMember> generate_ring() const;

  Mask union_mask(const RingMember& r) const;
  std::string ring_member_name(const RingMember& r) const;

private:
  friend ValidateSemiringResult validate_semiring(GroundSet ground, std::vector<Mask> family);

  ExplicitBackend(GroundSet ground, std::vector<Mask> members);

  /// First exact cover of `uncovered` by members contained in it, under the
  /// pivot rule (each block holds the smallest uncovered element). Nullopt
  /// when no cover exists.
  std::optional<std::vector<MemberId>> first_exact_cover(Mask uncovered) const;

  GroundSet ground_;
  std::vector<Mask> members_;  // ascending; index 0 is the empty set
  std::vector<std::uint32_t> mask_to_index_;
  Mask full_mask_ = 0;
};

struct ValidateSemiringResult {
  std::shared_ptr<const ExplicitBackend> backend;  // null when invalid
  std::optional<SemiRingViolation> violation;

  bool ok() const { return backend != nullptr; }
};

/// Checks the three semi-ring axioms exhaustively over all member pairs and
/// returns a backend, or a report naming the violated axiom and witness pair.
/// Duplicate subsets in the family are merged.
ValidateSemiringResult validate_semiring(GroundSet ground,
                                         const std::vector<std::vector<std::string>>& family);
ValidateSemiringResult validate_semiring(GroundSet ground, std::vector<ExplicitBackend::Mask> family);

std::shared_ptr<const ExplicitBackend> make_power_set_backend(GroundSet ground);

}  // namespace chargelat
