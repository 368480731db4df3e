#pragma once

#include <optional>
#include <string>

#include "chargelat/lattice.hpp"

namespace chargelat {

/// A two-block split (H, A\H) of a ring member, built from a partition whose
/// blocks were classified by comparing the two decomposition parts.
struct HahnCertificate {
  MemberId target;
  Rational epsilon;
  RingMember h;           // union of the blocks with pos <= neg
  RingMember complement;  // union of the remaining blocks
  Partition source;
  std::vector<std::size_t> h_block_indices;  // positions in source.blocks belonging to h
};

struct HahnOutcome {
  enum class Status { Found, Impossible, SearchExhausted };

  Status status = Status::Found;
  std::optional<HahnCertificate> certificate;
  std::string detail;
};

/// Builds an epsilon-Hahn decomposition on `a` from a partition with block
/// sum of min(pos, neg) under epsilon. When both parts are infinite at `a`,
/// no such decomposition exists for small epsilon and Impossible is returned
/// with the dichotomy witness; a truncated search that merely failed reports
/// SearchExhausted instead.
HahnOutcome epsilon_hahn(const Charge& mu, MemberId a, const Rational& epsilon,
                         const SupOptions& options = {});

struct HahnVerification {
  bool verified = true;
  std::string violating_subset;
  std::string detail;
};

/// Checks the two defining inequalities: mu <= epsilon on ring subsets of h,
/// mu >= -epsilon on ring subsets of the complement. Exhaustive over all ring
/// subsets on explicit backends; on structured backends the per-block bounds
/// from the underlying partition are checked (they imply the inequalities).
HahnVerification verify_hahn(const Charge& mu, const HahnCertificate& cert,
                             const SupOptions& options = {});

}  // namespace chargelat
