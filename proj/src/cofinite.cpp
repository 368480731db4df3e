#include "chargelat/cofinite.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace chargelat {

namespace {

std::vector<std::uint64_t> normalized(std::vector<std::uint64_t> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

std::vector<std::uint64_t> merged(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> common(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> removed(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

CofiniteSet CofiniteSet::finite(std::vector<std::uint64_t> elements) {
  return CofiniteSet{Kind::Finite, normalized(std::move(elements))};
}

CofiniteSet CofiniteSet::cofinite(std::vector<std::uint64_t> complement) {
  return CofiniteSet{Kind::Cofinite, normalized(std::move(complement))};
}

bool CofiniteSet::contains(std::uint64_t k) const {
  const bool in_support = std::binary_search(support.begin(), support.end(), k);
  return is_finite() ? in_support : !in_support;
}

ExtReal CofiniteSet::card() const {
  if (is_finite()) return ExtReal(static_cast<long long>(support.size()));
  return ExtReal::pos_inf();
}

std::uint64_t CofiniteSet::min_element() const {
  if (is_finite()) {
    if (support.empty()) throw std::logic_error("min_element of the empty set");
    return support.front();
  }
  // Smallest natural outside the (sorted) complement.
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] != i) return i;
  }
  return support.size();
}

CofiniteSet intersect(const CofiniteSet& a, const CofiniteSet& b) {
  if (a.is_finite() && b.is_finite()) return CofiniteSet{CofiniteSet::Kind::Finite, common(a.support, b.support)};
  if (a.is_finite()) return CofiniteSet{CofiniteSet::Kind::Finite, removed(a.support, b.support)};
  if (b.is_finite()) return CofiniteSet{CofiniteSet::Kind::Finite, removed(b.support, a.support)};
  return CofiniteSet{CofiniteSet::Kind::Cofinite, merged(a.support, b.support)};
}

CofiniteSet unite(const CofiniteSet& a, const CofiniteSet& b) {
  if (a.is_finite() && b.is_finite()) return CofiniteSet{CofiniteSet::Kind::Finite, merged(a.support, b.support)};
  if (a.is_finite()) return CofiniteSet{CofiniteSet::Kind::Cofinite, removed(b.support, a.support)};
  if (b.is_finite()) return CofiniteSet{CofiniteSet::Kind::Cofinite, removed(a.support, b.support)};
  return CofiniteSet{CofiniteSet::Kind::Cofinite, common(a.support, b.support)};
}

CofiniteSet difference(const CofiniteSet& a, const CofiniteSet& b) {
  if (a.is_finite() && b.is_finite()) return CofiniteSet{CofiniteSet::Kind::Finite, removed(a.support, b.support)};
  if (a.is_finite()) return CofiniteSet{CofiniteSet::Kind::Finite, common(a.support, b.support)};
  if (b.is_finite()) return CofiniteSet{CofiniteSet::Kind::Cofinite, merged(a.support, b.support)};
  return CofiniteSet{CofiniteSet::Kind::Finite, removed(b.support, a.support)};
}

bool is_subset(const CofiniteSet& a, const CofiniteSet& b) {
  return difference(a, b).is_empty();
}

std::string to_string(const CofiniteSet& a) {
  std::ostringstream os;
  if (!a.is_finite()) os << "N\\";
  os << '{';
  for (std::size_t i = 0; i < a.support.size(); ++i) {
    if (i) os << ',';
    os << a.support[i];
  }
  os << '}';
  return os.str();
}

MemberId CofiniteBackend::member(CofiniteSet set) const {
  std::lock_guard lock(mutex_);
  if (table_.empty()) {  // seed the canonical empty member at index 0
    table_.push_back(CofiniteSet::finite({}));
    index_[{0, {}}] = 0;
  }
  std::pair<int, std::vector<std::uint64_t>> key{set.is_finite() ? 0 : 1, set.support};
  auto [it, inserted] = index_.try_emplace(std::move(key), static_cast<std::uint32_t>(table_.size()));
  if (inserted) table_.push_back(std::move(set));
  return MemberId{it->second};
}

CofiniteSet CofiniteBackend::set_of(MemberId a) const {
  std::lock_guard lock(mutex_);
  return table_.at(a.index);
}

MemberId CofiniteBackend::empty_member() const { return member(CofiniteSet::finite({})); }
MemberId CofiniteBackend::universe() const { return member(CofiniteSet::cofinite({})); }

MemberId CofiniteBackend::intersect(MemberId a, MemberId b) const {
  return member(chargelat::intersect(set_of(a), set_of(b)));
}

std::vector<MemberId> CofiniteBackend::difference_decomposition(MemberId a, MemberId b) const {
  CofiniteSet d = difference(set_of(a), set_of(b));
  if (d.is_empty()) return {};
  return {member(std::move(d))};
}

bool CofiniteBackend::is_subset(MemberId a, MemberId b) const {
  return chargelat::is_subset(set_of(a), set_of(b));
}

std::uint64_t CofiniteBackend::block_order_key(MemberId a) const {
  CofiniteSet s = set_of(a);
  return s.is_empty() ? UINT64_MAX : s.min_element();
}

bool CofiniteBackend::union_equals(std::span<const MemberId> blocks, MemberId target) const {
  CofiniteSet acc = CofiniteSet::finite({});
  for (MemberId b : blocks) acc = unite(acc, set_of(b));
  return acc == set_of(target);
}

std::string CofiniteBackend::member_name(MemberId a) const { return to_string(set_of(a)); }

EnumerationStatus CofiniteBackend::for_each_member(std::optional<std::size_t> bound,
                                                   const std::function<bool(MemberId)>& visit) const {
  std::size_t emitted = 0;
  auto emit = [&](CofiniteSet s) {
    if (bound && emitted >= *bound) return false;
    ++emitted;
    return visit(member(std::move(s)));
  };
  // Finite/cofinite pairs keyed by the bits of a counter: a fixed monotone
  // order in which every member eventually appears.
  for (std::uint64_t code = 0;; ++code) {
    std::vector<std::uint64_t> elems;
    for (std::uint64_t bit = 0; bit < 64; ++bit) {
      if (code & (std::uint64_t{1} << bit)) elems.push_back(bit);
    }
    if (!emit(CofiniteSet::finite(elems))) return EnumerationStatus{false};
    if (!emit(CofiniteSet::cofinite(elems))) return EnumerationStatus{false};
  }
}

std::vector<std::uint64_t> CofiniteBackend::first_elements(MemberId a, std::size_t n) const {
  CofiniteSet s = set_of(a);
  std::vector<std::uint64_t> out;
  if (s.is_finite()) {
    for (std::size_t i = 0; i < std::min(n, s.support.size()); ++i) out.push_back(s.support[i]);
    return out;
  }
  for (std::uint64_t k = 0; out.size() < n; ++k) {
    if (s.contains(k)) out.push_back(k);
  }
  return out;
}

namespace {

// Set partitions of `elements` by pivot recursion: the block of the smallest
// remaining element is chosen as that element plus any subset of the rest.
bool finite_partitions_rec(const CofiniteBackend& backend, MemberId target,
                           const std::vector<std::uint64_t>& remaining,
                           std::optional<std::size_t> max_blocks, std::vector<MemberId>& chosen,
                           bool& pruned, const std::function<bool(const Partition&)>& visit) {
  if (remaining.empty()) return visit(Partition{target, chosen});
  if (max_blocks && chosen.size() >= *max_blocks) {
    pruned = true;
    return true;
  }
  const std::uint64_t pivot = remaining.front();
  const std::size_t rest_size = remaining.size() - 1;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << rest_size); ++sub) {
    std::vector<std::uint64_t> block{pivot};
    std::vector<std::uint64_t> rest;
    for (std::size_t i = 0; i < rest_size; ++i) {
      if (sub & (std::uint64_t{1} << i)) {
        block.push_back(remaining[i + 1]);
      } else {
        rest.push_back(remaining[i + 1]);
      }
    }
    chosen.push_back(backend.member(CofiniteSet::finite(std::move(block))));
    const bool keep_going =
        finite_partitions_rec(backend, target, rest, max_blocks, chosen, pruned, visit);
    chosen.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

// Partitions of a cofinite member: each of the first `horizon` elements either
// stays in the cofinite remainder or joins a finite block (restricted-growth
// assignment keeps each block set unique).
bool cofinite_partitions_rec(const CofiniteBackend& backend, MemberId target,
                             const std::vector<std::uint64_t>& horizon_elems, std::size_t pos,
                             const CofiniteSet& target_set, std::optional<std::size_t> max_blocks,
                             std::vector<std::vector<std::uint64_t>>& blocks,
                             const std::function<bool(const Partition&)>& visit) {
  if (pos == horizon_elems.size()) {
    std::vector<std::uint64_t> split_off;
    std::vector<MemberId> parts;
    for (const auto& b : blocks) {
      split_off.insert(split_off.end(), b.begin(), b.end());
      parts.push_back(backend.member(CofiniteSet::finite(b)));
    }
    CofiniteSet remainder = difference(target_set, CofiniteSet::finite(std::move(split_off)));
    parts.push_back(backend.member(std::move(remainder)));
    auto partition = make_partition(backend, target, std::move(parts));
    if (!partition) throw std::logic_error("cofinite partition enumeration produced a non-partition");
    return visit(*partition);
  }
  const std::uint64_t element = horizon_elems[pos];
  // Stay in the remainder.
  if (!cofinite_partitions_rec(backend, target, horizon_elems, pos + 1, target_set, max_blocks, blocks,
                               visit)) {
    return false;
  }
  // Join an existing finite block.
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].push_back(element);
    const bool keep_going = cofinite_partitions_rec(backend, target, horizon_elems, pos + 1, target_set,
                                                    max_blocks, blocks, visit);
    blocks[i].pop_back();
    if (!keep_going) return false;
  }
  // Open a new finite block (the remainder always counts as one block).
  if (!max_blocks || blocks.size() + 2 <= *max_blocks) {
    blocks.push_back({element});
    const bool keep_going = cofinite_partitions_rec(backend, target, horizon_elems, pos + 1, target_set,
                                                    max_blocks, blocks, visit);
    blocks.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

EnumerationStatus CofiniteBackend::for_each_partition(MemberId a, const PartitionOptions& opts,
                                                      const std::function<bool(const Partition&)>& visit) const {
  CofiniteSet target = set_of(a);
  if (target.is_empty()) {
    visit(Partition{a, {}});
    return EnumerationStatus{true};
  }
  if (target.is_finite()) {
    if (target.support.size() > 12) {
      throw std::invalid_argument("partition enumeration over more than 12 elements");
    }
    std::vector<MemberId> chosen;
    bool pruned = false;
    bool finished =
        finite_partitions_rec(*this, a, target.support, opts.max_blocks, chosen, pruned, visit);
    return EnumerationStatus{finished && !pruned};
  }
  const std::size_t horizon = opts.element_horizon.value_or(4);
  if (horizon > 10) throw std::invalid_argument("cofinite partition horizon over 10 elements");
  std::vector<std::vector<std::uint64_t>> blocks;
  cofinite_partitions_rec(*this, a, first_elements(a, horizon), 0, target, opts.max_blocks, blocks, visit);
  return EnumerationStatus{false};
}

std::string to_string(CofiniteRule rule) {
  switch (rule) {
    case CofiniteRule::CardCocard: return "card-cocard";
    case CofiniteRule::CardNegInf: return "card-neginf";
    case CofiniteRule::Zero: return "zero";
    case CofiniteRule::CardPosInf: return "card-posinf";
    case CofiniteRule::ZeroPosInf: return "zero-posinf";
  }
  return "?";
}

std::optional<CofiniteRule> parse_cofinite_rule(std::string_view text) {
  if (text == "card-cocard") return CofiniteRule::CardCocard;
  if (text == "card-neginf") return CofiniteRule::CardNegInf;
  if (text == "zero") return CofiniteRule::Zero;
  if (text == "card-posinf") return CofiniteRule::CardPosInf;
  if (text == "zero-posinf") return CofiniteRule::ZeroPosInf;
  return std::nullopt;
}

std::string SymbolicCharge::describe() const {
  std::string out = to_string(rule);
  if (negated) out = "-(" + out + ")";
  if (!perturbation.empty()) out += "+perturbation";
  return out;
}

ExtReal symbolic_value(const SymbolicCharge& charge, const CofiniteSet& a) {
  ExtReal base;
  switch (charge.rule) {
    case CofiniteRule::CardCocard:
      base = a.is_finite() ? a.card() : ExtReal(-static_cast<long long>(a.support.size()));
      break;
    case CofiniteRule::CardNegInf:
      base = a.is_finite() ? a.card() : ExtReal::neg_inf();
      break;
    case CofiniteRule::Zero:
      base = ExtReal(0);
      break;
    case CofiniteRule::CardPosInf:
      base = a.is_finite() ? a.card() : ExtReal::pos_inf();
      break;
    case CofiniteRule::ZeroPosInf:
      base = a.is_finite() ? ExtReal(0) : ExtReal::pos_inf();
      break;
  }
  if (!charge.perturbation.empty()) {
    Rational bump = 0;
    for (const auto& [k, delta] : charge.perturbation) {
      if (a.contains(k)) bump += delta;
    }
    base = add(base, ExtReal(std::move(bump)));
  }
  return charge.negated ? neg(base) : base;
}

SymbolicCharge symbolic_negate(SymbolicCharge charge) {
  charge.negated = !charge.negated;
  return charge;
}

bool symbolic_attains_neg_inf(const SymbolicCharge& charge) {
  if (charge.rule == CofiniteRule::CardNegInf) return !charge.negated;
  if (charge.rule == CofiniteRule::CardPosInf || charge.rule == CofiniteRule::ZeroPosInf) {
    return charge.negated;
  }
  return false;
}

bool symbolic_attains_pos_inf(const SymbolicCharge& charge) {
  if (charge.rule == CofiniteRule::CardNegInf) return charge.negated;
  if (charge.rule == CofiniteRule::CardPosInf || charge.rule == CofiniteRule::ZeroPosInf) {
    return !charge.negated;
  }
  return false;
}

std::pair<SymbolicCharge, SymbolicCharge> jordan_symbolic(const SymbolicCharge& charge) {
  if (!charge.pure()) {
    throw UnsupportedRule("no closed-form decomposition for perturbed symbolic charges");
  }
  auto parts = [&]() -> std::pair<CofiniteRule, CofiniteRule> {
    switch (charge.rule) {
      case CofiniteRule::Zero: return {CofiniteRule::Zero, CofiniteRule::Zero};
      // Splitting off ever larger finite chunks drives both parts to +inf on
      // cofinite members; on finite members the positive part is the count.
      case CofiniteRule::CardCocard:
      case CofiniteRule::CardNegInf:
        return {CofiniteRule::CardPosInf, CofiniteRule::ZeroPosInf};
      case CofiniteRule::CardPosInf: return {CofiniteRule::CardPosInf, CofiniteRule::Zero};
      case CofiniteRule::ZeroPosInf: return {CofiniteRule::ZeroPosInf, CofiniteRule::Zero};
    }
    throw UnsupportedRule("unknown rule");
  }();
  SymbolicCharge pos{parts.first, false, {}};
  SymbolicCharge neg{parts.second, false, {}};
  if (charge.negated) std::swap(pos, neg);
  return {pos, neg};
}

SymbolicCharge symbolic_variation(const SymbolicCharge& charge) {
  auto [pos, negpart] = jordan_symbolic(charge);
  // The catalogued rules pair so that pos + neg is again a single rule.
  if (pos.rule == CofiniteRule::Zero) return negpart;
  if (negpart.rule == CofiniteRule::Zero) return pos;
  if ((pos.rule == CofiniteRule::CardPosInf && negpart.rule == CofiniteRule::ZeroPosInf) ||
      (pos.rule == CofiniteRule::ZeroPosInf && negpart.rule == CofiniteRule::CardPosInf)) {
    return SymbolicCharge{CofiniteRule::CardPosInf, false, {}};
  }
  throw UnsupportedRule("no closed-form variation for " + charge.describe());
}

ExtReal variation_lower_bound(const SymbolicCharge& charge, const CofiniteSet& a, std::size_t depth) {
  if (depth < 1) throw std::invalid_argument("variation_lower_bound needs depth >= 1");
  auto magnitude = [&](const CofiniteSet& block) {
    ExtReal v = symbolic_value(charge, block);
    return max(v, neg(v));
  };
  // Exhaustive over all set partitions when the member is a small finite set.
  if (a.is_finite() && a.support.size() <= 8) {
    CofiniteBackend scratch;
    ExtReal best = ExtReal(0);
    bool any = false;
    scratch.for_each_partition(scratch.member(a), {}, [&](const Partition& p) {
      std::vector<ExtReal> terms;
      terms.reserve(p.blocks.size());
      for (MemberId b : p.blocks) terms.push_back(magnitude(scratch.set_of(b)));
      ExtReal v = sum(terms);
      if (!any || best < v) best = std::move(v);
      any = true;
      return true;
    });
    return best;
  }
  // Prefix policy: split off the m smallest elements, singly or as one block.
  std::vector<std::uint64_t> prefix;
  {
    std::uint64_t k = 0;
    while (prefix.size() < depth) {
      if (a.is_finite() && prefix.size() >= a.support.size()) break;
      if (a.contains(k)) prefix.push_back(k);
      ++k;
    }
  }
  ExtReal best = magnitude(a);  // m = 0: the trivial partition
  for (std::size_t m = 1; m <= prefix.size(); ++m) {
    std::vector<std::uint64_t> head(prefix.begin(), prefix.begin() + m);
    CofiniteSet rest = difference(a, CofiniteSet::finite(head));
    ExtReal tail_term = rest.is_empty() ? ExtReal(0) : magnitude(rest);
    ExtReal singles = tail_term;
    for (std::uint64_t e : head) singles = add(singles, magnitude(CofiniteSet::finite({e})));
    ExtReal block = add(magnitude(CofiniteSet::finite(head)), tail_term);
    best = max(best, max(singles, block));
  }
  return best;
}

}  // namespace chargelat
