#include "chargelat/charge.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace chargelat {

std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Finite: return "finite";
    case Polarity::AvoidsNegInf: return "avoids -inf";
    case Polarity::AvoidsPosInf: return "avoids +inf";
  }
  return "?";
}

SetFunction::SetFunction(std::shared_ptr<const SemiRingBackend> backend,
                         std::function<ExtReal(MemberId)> eval, std::string name)
    : backend_(std::move(backend)), eval_(std::move(eval)), name_(std::move(name)) {
  if (!backend_ || !eval_) throw std::invalid_argument("set function needs a backend and a valuation");
}

SetFunction SetFunction::negated() const {
  auto inner = eval_;
  return SetFunction(backend_, [inner](MemberId a) { return neg(inner(a)); },
                     name_.empty() ? "" : "-" + name_);
}

SetFunction SetFunction::from_table(std::shared_ptr<const ExplicitBackend> backend,
                                    std::vector<ExtReal> values, std::string name) {
  if (values.size() != *backend->member_count()) {
    throw std::invalid_argument("value table does not cover the member list");
  }
  auto table = std::make_shared<std::vector<ExtReal>>(std::move(values));
  return SetFunction(backend, [table](MemberId a) { return table->at(a.index); }, std::move(name));
}

struct Charge::Data {
  std::shared_ptr<const SemiRingBackend> backend;
  Charge::Presentation presentation = Charge::Presentation::Table;
  Polarity polarity = Polarity::Finite;

  std::vector<ExtReal> table;  // Table

  std::function<Rational(std::uint64_t)> nat_weight;  // NatWeights
  mutable std::mutex prefix_mutex;
  mutable std::vector<Rational> nat_prefix;  // nat_prefix[i] = sum of weights over [min, min+i)

  std::vector<Rational> cell_masses;  // GridMasses
  std::vector<Rational> cell_prefix;

  SymbolicCharge symbolic;  // Symbolic
};

class ChargeFactory {
public:
  static Charge make(std::shared_ptr<const Charge::Data> data, std::string name) {
    Charge c;
    c.data_ = std::move(data);
    c.name_ = std::move(name);
    return c;
  }
};

const std::shared_ptr<const SemiRingBackend>& Charge::backend() const { return data_->backend; }

Charge::Presentation Charge::presentation() const { return data_->presentation; }

Polarity Charge::polarity() const {
  if (!negated_ || data_->polarity == Polarity::Finite) return data_->polarity;
  return data_->polarity == Polarity::AvoidsNegInf ? Polarity::AvoidsPosInf : Polarity::AvoidsNegInf;
}

namespace {

Rational nat_prefix_sum(const Charge::Data& data, const NatIntervalBackend& backend, std::uint64_t upto) {
  // upto is relative to the backend minimum.
  std::lock_guard lock(data.prefix_mutex);
  if (data.nat_prefix.empty()) data.nat_prefix.push_back(0);
  while (data.nat_prefix.size() <= upto) {
    const std::uint64_t k = backend.min_element() + data.nat_prefix.size() - 1;
    data.nat_prefix.push_back(data.nat_prefix.back() + data.nat_weight(k));
  }
  return data.nat_prefix[upto];
}

}  // namespace

ExtReal Charge::value(MemberId a) const {
  ExtReal v;
  switch (data_->presentation) {
    case Presentation::Table:
      v = data_->table.at(a.index);
      break;
    case Presentation::NatWeights: {
      const auto& backend = static_cast<const NatIntervalBackend&>(*data_->backend);
      auto [lo, hi] = backend.bounds(a);
      v = ExtReal(nat_prefix_sum(*data_, backend, hi - backend.min_element()) -
                  nat_prefix_sum(*data_, backend, lo - backend.min_element()));
      break;
    }
    case Presentation::GridMasses: {
      const auto& backend = static_cast<const GridIntervalBackend&>(*data_->backend);
      auto [i, j] = backend.span_of(a);
      v = ExtReal(i >= j ? Rational(0) : data_->cell_prefix[j] - data_->cell_prefix[i]);
      break;
    }
    case Presentation::Symbolic: {
      const auto& backend = static_cast<const CofiniteBackend&>(*data_->backend);
      v = symbolic_value(data_->symbolic, backend.set_of(a));
      break;
    }
  }
  return negated_ ? neg(v) : v;
}

Charge Charge::negated() const {
  Charge c = *this;
  c.negated_ = !c.negated_;
  c.name_ = name_.empty() ? "" : "-" + name_;
  return c;
}

Charge Charge::renamed(std::string name) const {
  Charge c = *this;
  c.name_ = std::move(name);
  return c;
}

SetFunction Charge::as_set_function() const {
  Charge self = *this;
  return SetFunction(backend(), [self](MemberId a) { return self.value(a); }, name_);
}

const std::vector<ExtReal>& Charge::table() const {
  if (data_->presentation != Presentation::Table || negated_) {
    throw std::logic_error("table() needs a non-negated table charge");
  }
  return data_->table;
}

SymbolicCharge Charge::effective_symbolic() const {
  if (data_->presentation != Presentation::Symbolic) {
    throw std::logic_error("effective_symbolic() needs a symbolic charge");
  }
  SymbolicCharge rule = data_->symbolic;
  if (negated_) rule.negated = !rule.negated;
  return rule;
}

ExtReal interval_value(const Charge& charge, std::uint64_t from, std::uint64_t to) {
  const auto& data = *charge.data_;
  Rational v;
  if (data.presentation == Charge::Presentation::NatWeights) {
    const auto& backend = static_cast<const NatIntervalBackend&>(*data.backend);
    if (from < backend.min_element()) throw std::invalid_argument("interval below backend minimum");
    if (from >= to) return ExtReal(0);
    v = nat_prefix_sum(data, backend, to - backend.min_element()) -
        nat_prefix_sum(data, backend, from - backend.min_element());
  } else if (data.presentation == Charge::Presentation::GridMasses) {
    if (to > data.cell_masses.size()) throw std::invalid_argument("cell span out of range");
    if (from >= to) return ExtReal(0);
    v = data.cell_prefix[to] - data.cell_prefix[from];
  } else {
    throw std::logic_error("interval_value needs an interval-backed charge");
  }
  if (charge.negated_) v = -v;
  return ExtReal(std::move(v));
}

std::pair<std::uint64_t, std::uint64_t> interval_span(const Charge& charge, MemberId a) {
  const auto& data = *charge.data_;
  if (data.presentation == Charge::Presentation::NatWeights) {
    return static_cast<const NatIntervalBackend&>(*data.backend).bounds(a);
  }
  if (data.presentation == Charge::Presentation::GridMasses) {
    auto [i, j] = static_cast<const GridIntervalBackend&>(*data.backend).span_of(a);
    return {i, j};
  }
  throw std::logic_error("interval_span needs an interval-backed charge");
}

namespace {

Polarity polarity_of_values(const std::vector<ExtReal>& values, std::string* pos_witness,
                            std::string* neg_witness, const ExplicitBackend& backend) {
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_pos_inf() && !has_pos) {
      has_pos = true;
      if (pos_witness) *pos_witness = backend.member_name(MemberId{static_cast<std::uint32_t>(i)});
    }
    if (values[i].is_neg_inf() && !has_neg) {
      has_neg = true;
      if (neg_witness) *neg_witness = backend.member_name(MemberId{static_cast<std::uint32_t>(i)});
    }
  }
  if (has_pos && has_neg) return Polarity::Finite;  // caller reports the violation
  if (has_pos) return Polarity::AvoidsNegInf;
  if (has_neg) return Polarity::AvoidsPosInf;
  return Polarity::Finite;
}

}  // namespace

std::string ChargeViolation::message() const {
  switch (kind) {
    case Kind::ValuationIncomplete:
      return "valuation does not cover every member";
    case Kind::EmptyNotZero:
      return "the empty set must carry value 0";
    case Kind::NotAdditive:
      return "not additive on " + member + ": " + detail;
    case Kind::AttainsBothInfinities:
      return "attains +inf on " + member + " and -inf on " + detail;
  }
  return "invalid charge";
}

ValidateChargeResult validate_charge(std::shared_ptr<const ExplicitBackend> backend,
                                     std::vector<ExtReal> values, std::string name) {
  if (values.size() != *backend->member_count()) {
    return {std::nullopt, ChargeViolation{ChargeViolation::Kind::ValuationIncomplete, "", ""}};
  }
  if (!(values[0] == ExtReal(0))) {
    return {std::nullopt, ChargeViolation{ChargeViolation::Kind::EmptyNotZero, "{}", ""}};
  }
  std::string pos_witness, neg_witness;
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_pos_inf() && !has_pos) {
      has_pos = true;
      pos_witness = backend->member_name(MemberId{static_cast<std::uint32_t>(i)});
    }
    if (values[i].is_neg_inf() && !has_neg) {
      has_neg = true;
      neg_witness = backend->member_name(MemberId{static_cast<std::uint32_t>(i)});
    }
  }
  if (has_pos && has_neg) {
    return {std::nullopt,
            ChargeViolation{ChargeViolation::Kind::AttainsBothInfinities, pos_witness, neg_witness}};
  }

  std::optional<ChargeViolation> violation;
  backend->for_each_member(std::nullopt, [&](MemberId a) {
    backend->for_each_partition(a, {}, [&](const Partition& p) {
      if (p.blocks.size() == 1) return true;  // trivially equal
      std::vector<ExtReal> terms;
      terms.reserve(p.blocks.size());
      for (MemberId b : p.blocks) terms.push_back(values[b.index]);
      ExtReal lhs = sum(terms);
      if (!(lhs == values[a.index])) {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < p.blocks.size(); ++i) {
          if (i) os << " + ";
          os << backend->member_name(p.blocks[i]);
        }
        os << "} sums to " << lhs << " but the member carries " << values[a.index];
        violation = ChargeViolation{ChargeViolation::Kind::NotAdditive, backend->member_name(a), os.str()};
        return false;
      }
      return true;
    });
    return !violation;
  });
  if (violation) return {std::nullopt, violation};

  auto data = std::make_shared<Charge::Data>();
  data->backend = backend;
  data->presentation = Charge::Presentation::Table;
  data->polarity = has_pos ? Polarity::AvoidsNegInf : (has_neg ? Polarity::AvoidsPosInf : Polarity::Finite);
  data->table = std::move(values);
  return {ChargeFactory::make(std::move(data), std::move(name)), std::nullopt};
}

ValidateChargeResult charge_from_point_weights(std::shared_ptr<const ExplicitBackend> backend,
                                               std::vector<ExtReal> point_weights, std::string name) {
  if (point_weights.size() != backend->ground().size()) {
    return {std::nullopt, ChargeViolation{ChargeViolation::Kind::ValuationIncomplete, "", ""}};
  }
  const std::size_t count = *backend->member_count();
  std::vector<ExtReal> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ExplicitBackend::Mask mask = backend->mask_of(MemberId{static_cast<std::uint32_t>(i)});
    ExtReal acc;
    for (std::size_t e = 0; e < point_weights.size(); ++e) {
      if (mask & (ExplicitBackend::Mask{1} << e)) {
        try {
          acc = add(acc, point_weights[e]);
        } catch (const UndefinedSum&) {
          return {std::nullopt,
                  ChargeViolation{ChargeViolation::Kind::AttainsBothInfinities,
                                  backend->member_name(MemberId{static_cast<std::uint32_t>(i)}),
                                  "mixed infinite point weights"}};
        }
      }
    }
    values.push_back(std::move(acc));
  }
  std::string pos_witness, neg_witness;
  Polarity polarity = polarity_of_values(values, &pos_witness, &neg_witness, *backend);
  if (!pos_witness.empty() && !neg_witness.empty()) {
    return {std::nullopt,
            ChargeViolation{ChargeViolation::Kind::AttainsBothInfinities, pos_witness, neg_witness}};
  }
  // Point-weight sums are additive across any disjoint decomposition, so the
  // exhaustive partition check is skipped.
  auto data = std::make_shared<Charge::Data>();
  data->backend = std::move(backend);
  data->presentation = Charge::Presentation::Table;
  data->polarity = polarity;
  data->table = std::move(values);
  return {ChargeFactory::make(std::move(data), std::move(name)), std::nullopt};
}

Charge make_nat_weight_charge(std::shared_ptr<const NatIntervalBackend> backend,
                              std::function<Rational(std::uint64_t)> weight, std::string name) {
  if (!weight) throw std::invalid_argument("weight rule must be callable");
  auto data = std::make_shared<Charge::Data>();
  data->backend = std::move(backend);
  data->presentation = Charge::Presentation::NatWeights;
  data->polarity = Polarity::Finite;
  data->nat_weight = std::move(weight);
  return ChargeFactory::make(std::move(data), std::move(name));
}

Charge make_grid_mass_charge(std::shared_ptr<const GridIntervalBackend> backend,
                             std::vector<Rational> cell_masses, std::string name) {
  if (cell_masses.size() != backend->grid().cell_count()) {
    throw std::invalid_argument("cell mass vector does not match the grid");
  }
  auto data = std::make_shared<Charge::Data>();
  data->backend = std::move(backend);
  data->presentation = Charge::Presentation::GridMasses;
  data->polarity = Polarity::Finite;
  data->cell_prefix.reserve(cell_masses.size() + 1);
  data->cell_prefix.push_back(0);
  for (const Rational& m : cell_masses) data->cell_prefix.push_back(data->cell_prefix.back() + m);
  data->cell_masses = std::move(cell_masses);
  return ChargeFactory::make(std::move(data), std::move(name));
}

ValidateChargeResult validate_symbolic_charge(std::shared_ptr<const CofiniteBackend> backend,
                                              SymbolicCharge rule, std::string name, std::uint64_t seed) {
  // Additivity spot-check on seeded random disjoint unions inside the algebra.
  std::mt19937_64 rng(seed);
  auto random_finite = [&](std::size_t max_size) {
    std::vector<std::uint64_t> elems;
    std::uniform_int_distribution<std::uint64_t> element(0, 15);
    std::uniform_int_distribution<std::size_t> size(0, max_size);
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) elems.push_back(element(rng));
    return CofiniteSet::finite(std::move(elems));
  };
  for (int trial = 0; trial < 64; ++trial) {
    const bool cofinite_target = trial % 2 == 1;
    CofiniteSet target = cofinite_target ? CofiniteSet::cofinite(random_finite(5).support)
                                         : random_finite(6);
    if (target.is_empty()) continue;
    // Split a random finite chunk off the target, possibly in two pieces.
    CofiniteSet chunk = intersect(target, random_finite(6));
    CofiniteSet rest = difference(target, chunk);
    std::vector<CofiniteSet> blocks;
    if (!chunk.is_empty() && chunk.support.size() >= 2) {
      std::vector<std::uint64_t> left(chunk.support.begin(),
                                      chunk.support.begin() + chunk.support.size() / 2);
      std::vector<std::uint64_t> right(chunk.support.begin() + chunk.support.size() / 2,
                                       chunk.support.end());
      blocks.push_back(CofiniteSet::finite(left));
      blocks.push_back(CofiniteSet::finite(right));
    } else if (!chunk.is_empty()) {
      blocks.push_back(chunk);
    }
    if (!rest.is_empty()) blocks.push_back(rest);
    if (blocks.size() < 2) continue;
    std::vector<ExtReal> terms;
    for (const CofiniteSet& b : blocks) terms.push_back(symbolic_value(rule, b));
    if (!(sum(terms) == symbolic_value(rule, target))) {
      return {std::nullopt,
              ChargeViolation{ChargeViolation::Kind::NotAdditive, to_string(target),
                              "closed-form rule " + rule.describe() + " failed a random split"}};
    }
  }
  Polarity polarity = Polarity::Finite;
  if (symbolic_attains_pos_inf(rule)) polarity = Polarity::AvoidsNegInf;
  if (symbolic_attains_neg_inf(rule)) polarity = Polarity::AvoidsPosInf;

  auto data = std::make_shared<Charge::Data>();
  data->backend = std::move(backend);
  data->presentation = Charge::Presentation::Symbolic;
  data->polarity = polarity;
  data->symbolic = std::move(rule);
  return {ChargeFactory::make(std::move(data), std::move(name)), std::nullopt};
}

Charge add_charges(const Charge& a, const Charge& b, std::string name) {
  if (a.backend().get() != b.backend().get()) {
    throw std::invalid_argument("charges live on different backends");
  }
  if (a.presentation() != b.presentation()) {
    throw std::invalid_argument("charge addition needs matching presentations");
  }
  auto data = std::make_shared<Charge::Data>();
  data->backend = a.backend();
  switch (a.presentation()) {
    case Charge::Presentation::Table: {
      const std::size_t count = *a.backend()->member_count();
      data->presentation = Charge::Presentation::Table;
      data->table.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        MemberId m{static_cast<std::uint32_t>(i)};
        data->table.push_back(add(a.value(m), b.value(m)));
      }
      std::string pos, negw;
      data->polarity = polarity_of_values(data->table, &pos, &negw,
                                          static_cast<const ExplicitBackend&>(*data->backend));
      if (!pos.empty() && !negw.empty()) throw UndefinedSum();
      break;
    }
    case Charge::Presentation::NatWeights: {
      data->presentation = Charge::Presentation::NatWeights;
      data->polarity = Polarity::Finite;
      Charge lhs = a, rhs = b;
      data->nat_weight = [lhs, rhs](std::uint64_t k) {
        return interval_value(lhs, k, k + 1).finite_value() +
               interval_value(rhs, k, k + 1).finite_value();
      };
      break;
    }
    case Charge::Presentation::GridMasses: {
      data->presentation = Charge::Presentation::GridMasses;
      data->polarity = Polarity::Finite;
      const std::size_t cells = static_cast<const GridIntervalBackend&>(*data->backend).grid().cell_count();
      data->cell_prefix.push_back(0);
      for (std::size_t i = 0; i < cells; ++i) {
        Rational m = interval_value(a, i, i + 1).finite_value() +
                     interval_value(b, i, i + 1).finite_value();
        data->cell_prefix.push_back(data->cell_prefix.back() + m);
        data->cell_masses.push_back(std::move(m));
      }
      break;
    }
    case Charge::Presentation::Symbolic:
      throw std::invalid_argument("symbolic charges do not support memberwise addition");
  }
  return ChargeFactory::make(std::move(data), std::move(name));
}

Family::Family(std::vector<Charge> charges) : charges_(std::move(charges)) {
  if (charges_.empty()) throw EmptyFamily();
  for (const Charge& c : charges_) {
    if (c.backend().get() != charges_.front().backend().get()) {
      throw std::invalid_argument("family members live on different backends");
    }
  }
}

const std::shared_ptr<const SemiRingBackend>& Family::backend() const {
  return charges_.front().backend();
}

Family Family::negated() const {
  std::vector<Charge> out;
  out.reserve(charges_.size());
  for (const Charge& c : charges_) out.push_back(c.negated());
  return Family(std::move(out));
}

AdmissibilityReport check_admissibility(const Family& family) {
  const SemiRingBackend& backend = *family.backend();
  switch (backend.kind()) {
    case BackendKind::Explicit: {
      AdmissibilityReport report;
      backend.for_each_member(std::nullopt, [&](MemberId a) {
        for (const Charge& c : family.charges()) {
          if (!c.value(a).is_neg_inf()) return true;
        }
        report = {false, backend.member_name(a)};
        return false;
      });
      return report;
    }
    case BackendKind::NatIntervals:
    case BackendKind::GridIntervals:
      return {};  // interval charges take finite values only
    case BackendKind::Cofinite: {
      for (const Charge& c : family.charges()) {
        if (!symbolic_attains_neg_inf(c.effective_symbolic())) return {};
      }
      // Every charge dives to -inf on every cofinite member.
      return {false, static_cast<const CofiniteBackend&>(backend).member_name(
                         static_cast<const CofiniteBackend&>(backend).universe())};
    }
  }
  return {};
}

AdmissibilityReport check_admissibility(std::span<const SetFunction> family) {
  if (family.empty()) throw EmptyFamily();
  const auto& backend = family.front().backend();
  if (backend->kind() != BackendKind::Explicit) {
    throw std::invalid_argument("raw set functions are only supported on explicit backends");
  }
  AdmissibilityReport report;
  backend->for_each_member(std::nullopt, [&](MemberId a) {
    for (const SetFunction& f : family) {
      if (!f.value(a).is_neg_inf()) return true;
    }
    report = {false, backend->member_name(a)};
    return false;
  });
  return report;
}

Charge make_zero_charge(std::shared_ptr<const SemiRingBackend> backend) {
  switch (backend->kind()) {
    case BackendKind::Explicit: {
      auto explicit_backend = std::static_pointer_cast<const ExplicitBackend>(backend);
      std::vector<ExtReal> weights(explicit_backend->ground().size(), ExtReal(0));
      return *charge_from_point_weights(std::move(explicit_backend), std::move(weights), "0").charge;
    }
    case BackendKind::NatIntervals:
      return make_nat_weight_charge(std::static_pointer_cast<const NatIntervalBackend>(backend),
                                    [](std::uint64_t) { return Rational(0); }, "0");
    case BackendKind::GridIntervals: {
      auto grid = std::static_pointer_cast<const GridIntervalBackend>(backend);
      std::vector<Rational> masses(grid->grid().cell_count(), Rational(0));
      return make_grid_mass_charge(std::move(grid), std::move(masses), "0");
    }
    case BackendKind::Cofinite:
      return *validate_symbolic_charge(std::static_pointer_cast<const CofiniteBackend>(backend),
                                       SymbolicCharge{}, "0")
                  .charge;
  }
  throw std::logic_error("unknown backend kind");
}

ExtReal ring_value(const Charge& mu, const RingMember& r) {
  std::vector<ExtReal> terms;
  terms.reserve(r.blocks.size());
  for (MemberId b : r.blocks) terms.push_back(mu.value(b));
  return sum(terms);
}

std::shared_ptr<const ExplicitBackend> generated_ring_backend(const ExplicitBackend& base) {
  std::vector<RingMember> ring = base.generate_ring();
  std::vector<ExplicitBackend::Mask> masks;
  masks.reserve(ring.size());
  for (const RingMember& r : ring) masks.push_back(base.union_mask(r));
  auto validated = validate_semiring(base.ground(), std::move(masks));
  if (!validated.ok()) throw std::logic_error("generated ring fails the semi-ring axioms");
  return validated.backend;
}

Charge extend_charge(const Charge& mu, std::shared_ptr<const ExplicitBackend> ring_backend) {
  if (mu.backend()->kind() != BackendKind::Explicit) {
    throw std::invalid_argument("ring extension to an explicit backend needs an explicit base");
  }
  const auto& base = static_cast<const ExplicitBackend&>(*mu.backend());
  std::vector<ExtReal> values;
  values.reserve(*ring_backend->member_count());
  ring_backend->for_each_member(std::nullopt, [&](MemberId m) {
    auto decomposition = base.ring_membership(ring_backend->mask_of(m));
    if (!decomposition) throw std::invalid_argument("ring backend does not match the base semi-ring");
    values.push_back(ring_value(mu, *decomposition));
    return true;
  });
  auto result = validate_charge(std::move(ring_backend), std::move(values),
                                mu.name().empty() ? "" : mu.name() + "^");
  if (!result.ok()) {
    throw std::logic_error("ring extension lost additivity: " + result.violation->message());
  }
  return *std::move(result.charge);
}

ExplicitRingExtension extend_to_explicit_ring(const Charge& mu) {
  if (mu.backend()->kind() != BackendKind::Explicit) {
    throw std::invalid_argument("ring extension to an explicit backend needs an explicit base");
  }
  auto ring_backend = generated_ring_backend(static_cast<const ExplicitBackend&>(*mu.backend()));
  Charge extended = extend_charge(mu, ring_backend);
  return {std::move(ring_backend), std::move(extended)};
}

WitnessVerdict check_countable_additivity_witness(const Charge& mu, MemberId target,
                                                  std::span<const MemberId> pieces,
                                                  const std::function<ExtReal(std::size_t)>& tail_bound) {
  const SemiRingBackend& backend = *mu.backend();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!backend.is_subset(pieces[i], target)) {
      throw std::invalid_argument("witness piece " + backend.member_name(pieces[i]) +
                                  " is not inside the target");
    }
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (!backend.disjoint(pieces[i], pieces[j])) {
        throw std::invalid_argument("witness pieces overlap: " + backend.member_name(pieces[i]) +
                                    " and " + backend.member_name(pieces[j]));
      }
    }
  }
  const ExtReal target_value = mu.value(target);
  ExtReal partial(0);
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    partial = add(partial, mu.value(pieces[n]));
    ExtReal gap;
    if (target_value.is_infinite() || partial.is_infinite()) {
      gap = target_value == partial ? ExtReal(0) : ExtReal::pos_inf();
    } else {
      gap = abs(sub(target_value, partial));
    }
    const std::size_t truncation = n + 1;
    if (!(gap <= tail_bound(truncation))) {
      std::ostringstream os;
      os << "at N=" << truncation << ": |" << target_value << " - " << partial
         << "| exceeds " << tail_bound(truncation);
      return {false, truncation, os.str()};
    }
  }
  return {};
}

}  // namespace chargelat
