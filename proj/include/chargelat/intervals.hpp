#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "chargelat/setsys.hpp"
#include "chargelat/xreal.hpp"

namespace chargelat {

class Charge;

/// Semi-ring of half-open runs {k : lo <= k < hi} of naturals, all starting
/// at or above a fixed minimum element. Members are unbounded in number, so
/// handles are interned on demand.
class NatIntervalBackend final : public SemiRingBackend {
public:
  explicit NatIntervalBackend(std::uint64_t min_element = 0);

  BackendKind kind() const override { return BackendKind::NatIntervals; }
  std::string describe() const override;

  MemberId empty_member() const override { return MemberId{0}; }
  bool is_empty(MemberId a) const override;
  MemberId intersect(MemberId a, MemberId b) const override;
  std::vector<MemberId> difference_decomposition(MemberId a, MemberId b) const override;
  bool is_subset(MemberId a, MemberId b) const override;
  std::uint64_t block_order_key(MemberId a) const override;
  bool union_equals(std::span<const MemberId> blocks, MemberId target) const override;
  std::string member_name(MemberId a) const override;
  EnumerationStatus for_each_member(std::optional<std::size_t> bound,
                                    const std::function<bool(MemberId)>& visit) const override;
  std::optional<std::size_t> member_count() const override { return std::nullopt; }
  EnumerationStatus for_each_partition(MemberId a, const PartitionOptions& opts,
                                       const std::function<bool(const Partition&)>& visit) const override;

  std::uint64_t min_element() const { return min_element_; }
  /// Interns [lo,hi); any empty range maps to the canonical empty member.
  MemberId interval(std::uint64_t lo, std::uint64_t hi) const;
  std::pair<std::uint64_t, std::uint64_t> bounds(MemberId a) const;

  /// Canonical maximal-run decomposition of a finite set of naturals.
  RingMember ring_membership(std::vector<std::uint64_t> elements) const;

private:
  std::uint64_t min_element_;
  mutable std::mutex mutex_;
  mutable std::vector<std::pair<std::uint64_t, std::uint64_t>> table_;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> index_;
};

/// Strictly increasing rational endpoints; members of the grid backend are
/// the half-open intervals between grid points.
struct EndpointGrid {
  std::vector<Rational> points;

  std::size_t cell_count() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Semi-ring {[a,b) : a <= b, both on the grid}. Finite, fully enumerable.
class GridIntervalBackend final : public SemiRingBackend {
public:
  explicit GridIntervalBackend(EndpointGrid grid);

  BackendKind kind() const override { return BackendKind::GridIntervals; }
  std::string describe() const override;

  MemberId empty_member() const override { return MemberId{0}; }
  bool is_empty(MemberId a) const override;
  MemberId intersect(MemberId a, MemberId b) const override;
  std::vector<MemberId> difference_decomposition(MemberId a, MemberId b) const override;
  bool is_subset(MemberId a, MemberId b) const override;
  std::uint64_t block_order_key(MemberId a) const override;
  bool union_equals(std::span<const MemberId> blocks, MemberId target) const override;
  std::string member_name(MemberId a) const override;
  EnumerationStatus for_each_member(std::optional<std::size_t> bound,
                                    const std::function<bool(MemberId)>& visit) const override;
  std::optional<std::size_t> member_count() const override;
  EnumerationStatus for_each_partition(MemberId a, const PartitionOptions& opts,
                                       const std::function<bool(const Partition&)>& visit) const override;

  const EndpointGrid& grid() const { return grid_; }
  /// Member [points[i], points[j]); any i >= j maps to the empty member.
  MemberId cell_span(std::size_t i, std::size_t j) const;
  std::pair<std::size_t, std::size_t> span_of(MemberId a) const;
  MemberId member_from_endpoints(const Rational& lo, const Rational& hi) const;

  RingMember ring_membership(const std::vector<bool>& cells) const;

private:
  EndpointGrid grid_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> table_;
  std::vector<std::vector<std::uint32_t>> span_index_;  // [i][j] -> member index
};

/// Exact split-point optimisation over all chains lo = t0 < t1 < ... < tk = hi:
/// optimum of sum(block_value(t_i, t_{i+1})). With maximize=false the minimum
/// is computed. The witness chain is the lexicographically first optimum.
/// This turns exponential partition enumeration into a quadratic pass.
struct IntervalDpResult {
  ExtReal value;
  std::vector<std::uint64_t> chain;
};
IntervalDpResult interval_chain_optimum(
    std::uint64_t lo, std::uint64_t hi, bool maximize,
    const std::function<ExtReal(std::uint64_t, std::uint64_t)>& block_value);

/// Constructive supremum of a charge family at an interval member, computed
/// by the split-point recurrence. Agrees with exhaustive composition
/// enumeration; exact. Charges must live on the same interval backend.
ExtReal sup_interval_dp(const std::vector<Charge>& family, MemberId a);

}  // namespace chargelat
