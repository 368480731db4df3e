#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "chargelat/charge.hpp"

namespace chargelat {

/// Exactness of a reported value. Unbounded backends answer some queries only
/// up to truncation; those values carry the search depth. Duality turns a
/// truncated lower bound into an upper bound.
struct Exactness {
  enum class Kind { Exact, LowerBound, UpperBound };
  Kind kind = Kind::Exact;
  std::size_t depth = 0;

  bool is_exact() const { return kind == Kind::Exact; }
  static Exactness exact() { return {}; }
  static Exactness lower_bound(std::size_t depth) { return {Kind::LowerBound, depth}; }
  Exactness dual() const;
};

std::string to_string(const Exactness& e);

struct LatticeValue {
  ExtReal value;
  Exactness exactness;
  /// The lexicographically first optimal partition, where the computation
  /// tracks one (explicit enumeration and interval chains do).
  std::optional<Partition> witness;
};

/// A set function produced by a lattice operation, queried member by member.
class LatticeResult {
public:
  LatticeResult(std::shared_ptr<const SemiRingBackend> backend,
                std::function<LatticeValue(MemberId)> eval,
                std::function<Charge(std::string)> materialize = nullptr);

  const std::shared_ptr<const SemiRingBackend>& backend() const { return backend_; }
  LatticeValue at(MemberId a) const { return eval_(a); }

  /// Whether the result is available as a validated Charge (true for charge
  /// families on explicit and interval backends, and for the catalogued
  /// closed forms on the cofinite backend).
  bool has_charge_form() const { return materialize_ != nullptr; }
  Charge as_charge(std::string name) const;
  LatticeResult negated() const;

private:
  std::shared_ptr<const SemiRingBackend> backend_;
  std::function<LatticeValue(MemberId)> eval_;
  std::function<Charge(std::string)> materialize_;
};

struct SupOptions {
  /// Truncation for cofinite lower-bound searches: finite blocks are drawn
  /// from this many leading elements of the queried member.
  std::size_t cofinite_horizon = 4;
};

/// The constructive supremum: best partition sum of pointwise suprema. On
/// explicit backends every partition is enumerated; on interval backends the
/// split-point recurrence gives the same value exactly; on the cofinite
/// backend catalogued closed forms answer exactly and anything else becomes a
/// certified lower bound. For charge families the result is the least upper
/// bound and is itself a charge.
LatticeResult sup_family(const Family& family, const SupOptions& options = {});

/// Raw set functions (no additivity assumed): the result is super-additive
/// but need not be a charge. Explicit backends only.
LatticeResult sup_family(std::span<const SetFunction> family);

/// Infimum by duality: -sup of the negated family.
LatticeResult inf_family(const Family& family, const SupOptions& options = {});

/// Binary lattice operations; two-element family, no special-case path.
Charge sup_charge(const Charge& a, const Charge& b, std::string name = "");
Charge inf_charge(const Charge& a, const Charge& b, std::string name = "");

struct JordanParts {
  Charge pos;               // mu v 0
  Charge neg;               // (-mu) v 0
  LatticeResult variation;  // sup{mu, -mu}
};

JordanParts jordan(const Charge& mu, const SupOptions& options = {});

/// Memberwise decomposition identities, in the form matching the charge's
/// polarity (pos = mu + neg when mu > -inf; pos - mu = neg when mu < +inf;
/// both when finite), plus variation = pos + neg, and, when the variation is
/// finite, mu = pos - neg.
struct JordanIdentityReport {
  bool holds = true;
  std::string detail;
};
JordanIdentityReport check_jordan_identities(const Charge& mu, const JordanParts& parts, MemberId a);

enum class MeetVerdict { Zero, Infinite };

struct MeetReport {
  MeetVerdict verdict;
  ExtReal pos_value;
  ExtReal neg_value;
  ExtReal meet_value;  // directly computed (pos ^ neg)(a)
};

/// Verdict Zero iff one of the parts is finite at `a`; the meet itself is
/// computed independently and always agrees (0 or +inf, the two-case form).
MeetReport meet_dichotomy(const Charge& mu, MemberId a, const SupOptions& options = {});

struct NormOptions {
  /// Starting window for unbounded backends; the window doubles while the
  /// partial variation stays under the divergence threshold.
  std::size_t horizon = 64;
  std::size_t max_horizon = 65536;
  std::optional<Rational> divergence_threshold;
};

struct NormResult {
  ExtReal value;
  Exactness exactness;
  bool diverged = false;  // a certified lower bound crossed the threshold
  std::string witness_member;
};

/// The lattice norm: supremum of the variation over all members. Exact on
/// finite backends; on the nat backend a certified lower bound with a
/// divergence flag.
NormResult ba_norm(const Charge& mu, const NormOptions& options = {});

struct ExtensionReport {
  bool confirmed = true;
  std::string mismatch_member;
  std::string lhs;
  std::string rhs;
};

/// Sup-then-extend equals extend-then-sup on the generated ring, checked
/// memberwise over the whole ring, Jordan parts included. Explicit backends.
ExtensionReport extension_commutes(const Family& family, const SupOptions& options = {});

}  // namespace chargelat
