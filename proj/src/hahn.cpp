#include "chargelat/hahn.hpp"

#include <algorithm>
#include <sstream>

namespace chargelat {

namespace {

HahnCertificate certificate_from_partition(const Charge& pos, const Charge& neg, MemberId a,
                                           const Rational& epsilon, const Partition& partition) {
  HahnCertificate cert;
  cert.target = a;
  cert.epsilon = epsilon;
  cert.source = partition;
  for (std::size_t i = 0; i < partition.blocks.size(); ++i) {
    MemberId c = partition.blocks[i];
    if (pos.value(c) <= neg.value(c)) {
      cert.h.blocks.push_back(c);
      cert.h_block_indices.push_back(i);
    } else {
      cert.complement.blocks.push_back(c);
    }
  }
  return cert;
}

ExtReal partition_min_sum(const Charge& pos, const Charge& neg, const Partition& p) {
  std::vector<ExtReal> terms;
  terms.reserve(p.blocks.size());
  for (MemberId c : p.blocks) terms.push_back(min(pos.value(c), neg.value(c)));
  return sum(terms);
}

}  // namespace

HahnOutcome epsilon_hahn(const Charge& mu, MemberId a, const Rational& epsilon,
                         const SupOptions& options) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  JordanParts parts = jordan(mu, options);
  const ExtReal pos_a = parts.pos.value(a);
  const ExtReal neg_a = parts.neg.value(a);
  if (pos_a.is_pos_inf() && neg_a.is_pos_inf()) {
    std::ostringstream os;
    os << "both parts are infinite on " << mu.backend()->member_name(a)
       << ", so the block-minimum sum of every partition is infinite";
    return {HahnOutcome::Status::Impossible, std::nullopt, os.str()};
  }

  const ExtReal bound{epsilon};
  const SemiRingBackend& backend = *mu.backend();
  switch (backend.kind()) {
    case BackendKind::NatIntervals:
    case BackendKind::GridIntervals: {
      // Minimise the block-minimum sum over split chains; the optimum is 0.
      auto [lo, hi] = interval_span(parts.pos, a);
      const bool is_nat = backend.kind() == BackendKind::NatIntervals;
      auto block = [&](std::uint64_t s, std::uint64_t t) {
        return is_nat ? static_cast<const NatIntervalBackend&>(backend).interval(s, t)
                      : static_cast<const GridIntervalBackend&>(backend).cell_span(
                            static_cast<std::size_t>(s), static_cast<std::size_t>(t));
      };
      IntervalDpResult dp = interval_chain_optimum(lo, hi, /*maximize=*/false, [&](std::uint64_t s, std::uint64_t t) {
        return min(interval_value(parts.pos, s, t), interval_value(parts.neg, s, t));
      });
      if (!(dp.value < bound)) {
        return {HahnOutcome::Status::SearchExhausted, std::nullopt,
                "best split chain reaches only " + to_string(dp.value)};
      }
      std::vector<MemberId> blocks;
      for (std::size_t i = 0; i + 1 < dp.chain.size(); ++i) {
        blocks.push_back(block(dp.chain[i], dp.chain[i + 1]));
      }
      if (lo >= hi) blocks.clear();
      Partition partition{a, std::move(blocks)};
      return {HahnOutcome::Status::Found,
              certificate_from_partition(parts.pos, parts.neg, a, epsilon, partition), ""};
    }
    case BackendKind::Explicit:
    case BackendKind::Cofinite: {
      // First partition whose block-minimum sum is under epsilon.
      std::optional<HahnCertificate> found;
      PartitionOptions popts;
      popts.element_horizon = options.cofinite_horizon;
      EnumerationStatus status = backend.for_each_partition(a, popts, [&](const Partition& p) {
        if (partition_min_sum(parts.pos, parts.neg, p) < bound) {
          found = certificate_from_partition(parts.pos, parts.neg, a, epsilon, p);
          return false;
        }
        return true;
      });
      if (found) return {HahnOutcome::Status::Found, std::move(found), ""};
      if (status.complete) {
        // Complete enumeration without a hit contradicts the dichotomy.
        throw std::logic_error("no epsilon-good partition found despite a finite part");
      }
      return {HahnOutcome::Status::SearchExhausted, std::nullopt,
              "no partition within the truncation reaches the bound"};
    }
  }
  throw std::logic_error("unknown backend kind");
}

HahnVerification verify_hahn(const Charge& mu, const HahnCertificate& cert, const SupOptions& options) {
  const SemiRingBackend& backend = *mu.backend();

  // Well-formedness: the two halves together partition the target.
  std::vector<MemberId> all_blocks = cert.h.blocks;
  all_blocks.insert(all_blocks.end(), cert.complement.blocks.begin(), cert.complement.blocks.end());
  for (std::size_t i = 0; i < all_blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < all_blocks.size(); ++j) {
      if (!backend.disjoint(all_blocks[i], all_blocks[j])) {
        return {false, backend.member_name(all_blocks[i]), "certificate halves overlap"};
      }
    }
  }
  if (!backend.union_equals(all_blocks, cert.target)) {
    return {false, backend.member_name(cert.target), "certificate halves do not cover the target"};
  }

  const ExtReal bound{cert.epsilon};
  if (backend.kind() == BackendKind::Explicit) {
    const auto& explicit_backend = static_cast<const ExplicitBackend&>(backend);
    auto scan = [&](const RingMember& half, bool upper) -> std::optional<HahnVerification> {
      ExplicitBackend::Mask half_mask = explicit_backend.union_mask(half);
      ExplicitBackend::Mask sub = 0;
      while (true) {  // every subset of the half that lies in the ring
        if (auto decomposition = explicit_backend.ring_membership(sub)) {
          ExtReal v = ring_value(mu, *decomposition);
          if (upper ? !(v <= bound) : !(neg(bound) <= v)) {
            std::ostringstream os;
            os << "mu = " << v << (upper ? " exceeds " : " undershoots -") << to_string(cert.epsilon);
            return HahnVerification{false, explicit_backend.mask_name(sub), os.str()};
          }
        }
        if (sub == half_mask) break;
        sub = (sub - half_mask) & half_mask;
      }
      return std::nullopt;
    };
    if (auto fail = scan(cert.h, /*upper=*/true)) return *fail;
    if (auto fail = scan(cert.complement, /*upper=*/false)) return *fail;
    return {};
  }

  // Structured backends: the per-block bounds from the source partition are
  // sufficient, since any ring subset of a half meets each block inside it.
  JordanParts parts = jordan(mu, options);
  std::vector<ExtReal> pos_terms, neg_terms;
  for (MemberId c : cert.h.blocks) pos_terms.push_back(parts.pos.value(c));
  for (MemberId c : cert.complement.blocks) neg_terms.push_back(parts.neg.value(c));
  ExtReal pos_sum = sum(pos_terms), neg_sum = sum(neg_terms);
  if (!(pos_sum <= bound)) {
    return {false, "h", "blockwise pos sum " + to_string(pos_sum) + " exceeds epsilon"};
  }
  if (!(neg_sum <= bound)) {
    return {false, "complement", "blockwise neg sum " + to_string(neg_sum) + " exceeds epsilon"};
  }
  return {};
}

}  // namespace chargelat
