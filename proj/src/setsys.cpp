#include "chargelat/setsys.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>

namespace chargelat {

std::optional<std::size_t> GroundSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

std::optional<Partition> make_partition(const SemiRingBackend& backend, MemberId target,
                                        std::vector<MemberId> blocks) {
  for (MemberId b : blocks) {
    if (backend.is_empty(b)) return std::nullopt;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (!backend.disjoint(blocks[i], blocks[j])) return std::nullopt;
    }
  }
  if (!backend.union_equals(blocks, target)) return std::nullopt;
  std::sort(blocks.begin(), blocks.end(), [&](MemberId a, MemberId b) {
    return backend.block_order_key(a) < backend.block_order_key(b);
  });
  return Partition{target, std::move(blocks)};
}

Partition common_refinement(const SemiRingBackend& backend, const Partition& p, const Partition& q) {
  if (p.target != q.target) throw std::invalid_argument("common_refinement: partitions of different targets");
  std::vector<MemberId> blocks;
  for (MemberId a : p.blocks) {
    for (MemberId b : q.blocks) {
      MemberId c = backend.intersect(a, b);
      if (!backend.is_empty(c)) blocks.push_back(c);
    }
  }
  auto refined = make_partition(backend, p.target, std::move(blocks));
  if (!refined) throw std::logic_error("common_refinement: intersections do not cover the target");
  return *std::move(refined);
}

std::string SemiRingViolation::message() const {
  switch (kind) {
    case Kind::MissingEmpty:
      return "not a semi-ring: the empty set is not a member";
    case Kind::IntersectionNotMember:
      return "not a semi-ring: " + witness_a + " and " + witness_b +
             " intersect outside the family";
    case Kind::DifferenceNotDecomposable:
      return "not a semi-ring: " + witness_a + " \\ " + witness_b +
             " is not a finite disjoint union of members";
  }
  return "not a semi-ring";
}

ExplicitBackend::ExplicitBackend(GroundSet ground, std::vector<Mask> members)
    : ground_(std::move(ground)), members_(std::move(members)) {
  mask_to_index_.assign(std::size_t{1} << ground_.size(), UINT32_MAX);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    mask_to_index_[members_[i]] = static_cast<std::uint32_t>(i);
    full_mask_ |= members_[i];
  }
}

std::string ExplicitBackend::describe() const {
  std::ostringstream os;
  os << "explicit ground={";
  for (std::size_t i = 0; i < ground_.size(); ++i) {
    if (i) os << ',';
    os << ground_.labels[i];
  }
  os << "} members=" << members_.size();
  return os.str();
}

std::optional<MemberId> ExplicitBackend::find_member(Mask mask) const {
  if (mask >= mask_to_index_.size()) return std::nullopt;
  std::uint32_t idx = mask_to_index_[mask];
  if (idx == UINT32_MAX) return std::nullopt;
  return MemberId{idx};
}

MemberId ExplicitBackend::member_from_labels(std::span<const std::string> labels) const {
  Mask mask = 0;
  for (const std::string& label : labels) {
    auto pos = ground_.index_of(label);
    if (!pos) throw std::invalid_argument("unknown ground element: " + label);
    mask |= Mask{1} << *pos;
  }
  auto m = find_member(mask);
  if (!m) throw std::invalid_argument("not a member of the semi-ring: " + mask_name(mask));
  return *m;
}

MemberId ExplicitBackend::intersect(MemberId a, MemberId b) const {
  auto m = find_member(mask_of(a) & mask_of(b));
  if (!m) throw std::logic_error("explicit backend: intersection escaped the family");
  return *m;
}

std::optional<std::vector<MemberId>> ExplicitBackend::first_exact_cover(Mask uncovered) const {
  if (uncovered == 0) return std::vector<MemberId>{};
  const int pivot = std::countr_zero(uncovered);
  const Mask pivot_bit = Mask{1} << pivot;
  // Members ascend by mask, so the first cover found is the canonical one.
  for (std::size_t i = 1; i < members_.size(); ++i) {
    const Mask m = members_[i];
    if ((m & pivot_bit) == 0 || (m & ~uncovered) != 0) continue;
    auto rest = first_exact_cover(uncovered & ~m);
    if (rest) {
      rest->insert(rest->begin(), MemberId{static_cast<std::uint32_t>(i)});
      return rest;
    }
  }
  return std::nullopt;
}

std::vector<MemberId> ExplicitBackend::difference_decomposition(MemberId a, MemberId b) const {
  auto cover = first_exact_cover(mask_of(a) & ~mask_of(b));
  if (!cover) throw std::logic_error("explicit backend: difference escaped the generated ring");
  return *std::move(cover);
}

std::uint64_t ExplicitBackend::block_order_key(MemberId a) const {
  const Mask m = mask_of(a);
  return m == 0 ? UINT64_MAX : static_cast<std::uint64_t>(std::countr_zero(m));
}

bool ExplicitBackend::union_equals(std::span<const MemberId> blocks, MemberId target) const {
  Mask acc = 0;
  for (MemberId b : blocks) acc |= mask_of(b);
  return acc == mask_of(target);
}

std::string ExplicitBackend::mask_name(Mask mask) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < ground_.size(); ++i) {
    if (mask & (Mask{1} << i)) {
      if (!first) os << ',';
      os << ground_.labels[i];
      first = false;
    }
  }
  os << '}';
  return os.str();
}

std::string ExplicitBackend::member_name(MemberId a) const { return mask_name(mask_of(a)); }

EnumerationStatus ExplicitBackend::for_each_member(std::optional<std::size_t> bound,
                                                   const std::function<bool(MemberId)>& visit) const {
  std::size_t limit = bound.value_or(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i >= limit) return EnumerationStatus{false};
    if (!visit(MemberId{static_cast<std::uint32_t>(i)})) return EnumerationStatus{false};
  }
  return EnumerationStatus{true};
}

namespace {

bool explicit_partitions_rec(const ExplicitBackend& backend, const std::vector<ExplicitBackend::Mask>& members,
                             MemberId target, ExplicitBackend::Mask uncovered,
                             std::optional<std::size_t> max_blocks, std::vector<MemberId>& chosen,
                             bool& pruned, const std::function<bool(const Partition&)>& visit) {
  if (uncovered == 0) {
    return visit(Partition{target, chosen});
  }
  if (max_blocks && chosen.size() >= *max_blocks) {
    pruned = true;  // keep enumerating siblings
    return true;
  }
  const int pivot = std::countr_zero(uncovered);
  const ExplicitBackend::Mask pivot_bit = ExplicitBackend::Mask{1} << pivot;
  for (std::size_t i = 1; i < members.size(); ++i) {
    const ExplicitBackend::Mask m = members[i];
    if ((m & pivot_bit) == 0 || (m & ~uncovered) != 0) continue;
    chosen.push_back(MemberId{static_cast<std::uint32_t>(i)});
    bool keep_going = explicit_partitions_rec(backend, members, target, uncovered & ~m, max_blocks,
                                              chosen, pruned, visit);
    chosen.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

EnumerationStatus ExplicitBackend::for_each_partition(MemberId a, const PartitionOptions& opts,
                                                      const std::function<bool(const Partition&)>& visit) const {
  std::vector<MemberId> chosen;
  bool pruned = false;
  bool finished =
      explicit_partitions_rec(*this, members_, a, mask_of(a), opts.max_blocks, chosen, pruned, visit);
  return EnumerationStatus{finished && !pruned};
}

std::optional<RingMember> ExplicitBackend::ring_membership(Mask subset) const {
  if ((subset & ~full_mask_) != 0) return std::nullopt;
  auto cover = first_exact_cover(subset);
  if (!cover) return std::nullopt;
  return RingMember{*std::move(cover)};
}

std::vector<RingMember> ExplicitBackend::generate_ring() const {
  if (std::popcount(full_mask_) > 16) {
    throw std::invalid_argument("ring generation over more than 16 covered elements");
  }
  std::vector<RingMember> ring;
  // Iterate subsets of the covered ground in ascending mask order.
  Mask sub = 0;
  while (true) {
    if (auto r = ring_membership(sub)) ring.push_back(*std::move(r));
    if (sub == full_mask_) break;
    sub = (sub - full_mask_) & full_mask_;  // next subset of full_mask_
  }
  return ring;
}

ExplicitBackend::Mask ExplicitBackend::union_mask(const RingMember& r) const {
  Mask acc = 0;
  for (MemberId b : r.blocks) acc |= mask_of(b);
  return acc;
}

std::string ExplicitBackend::ring_member_name(const RingMember& r) const {
  return mask_name(union_mask(r));
}

ValidateSemiringResult validate_semiring(GroundSet ground, std::vector<ExplicitBackend::Mask> family) {
  if (ground.size() > ExplicitBackend::kMaxGround) {
    throw std::invalid_argument("explicit ground sets are limited to 20 elements");
  }
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());

  auto violation = [&](SemiRingViolation v) {
    return ValidateSemiringResult{nullptr, std::move(v)};
  };

  // The backend is built first so its canonical decomposition search can
  // drive the axiom checks; it is discarded on violation.
  if (family.empty() || family.front() != 0) {
    return violation({SemiRingViolation::Kind::MissingEmpty, "", ""});
  }
  std::shared_ptr<ExplicitBackend> backend(new ExplicitBackend(std::move(ground), family));
  for (ExplicitBackend::Mask a : family) {
    for (ExplicitBackend::Mask b : family) {
      if (!backend->find_member(a & b)) {
        return violation({SemiRingViolation::Kind::IntersectionNotMember, backend->mask_name(a),
                          backend->mask_name(b)});
      }
      if (!backend->ring_membership(a & ~b)) {
        return violation({SemiRingViolation::Kind::DifferenceNotDecomposable, backend->mask_name(a),
                          backend->mask_name(b)});
      }
    }
  }
  return ValidateSemiringResult{std::move(backend), std::nullopt};
}

ValidateSemiringResult validate_semiring(GroundSet ground,
                                         const std::vector<std::vector<std::string>>& family) {
  std::vector<ExplicitBackend::Mask> masks;
  masks.reserve(family.size());
  for (const auto& subset : family) {
    ExplicitBackend::Mask mask = 0;
    for (const std::string& label : subset) {
      auto pos = ground.index_of(label);
      if (!pos) throw std::invalid_argument("unknown ground element: " + label);
      mask |= ExplicitBackend::Mask{1} << *pos;
    }
    masks.push_back(mask);
  }
  return validate_semiring(std::move(ground), std::move(masks));
}

std::shared_ptr<const ExplicitBackend> make_power_set_backend(GroundSet ground) {
  if (ground.size() > 16) throw std::invalid_argument("power set backend over more than 16 elements");
  std::vector<ExplicitBackend::Mask> family;
  family.reserve(std::size_t{1} << ground.size());
  for (ExplicitBackend::Mask m = 0; m < (ExplicitBackend::Mask{1} << ground.size()); ++m) {
    family.push_back(m);
  }
  auto result = validate_semiring(std::move(ground), std::move(family));
  return result.backend;
}

}  // namespace chargelat
