#include "chargelat/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace chargelat {

Exactness Exactness::dual() const {
  switch (kind) {
    case Kind::Exact: return *this;
    case Kind::LowerBound: return {Kind::UpperBound, depth};
    case Kind::UpperBound: return {Kind::LowerBound, depth};
  }
  return *this;
}

std::string to_string(const Exactness& e) {
  switch (e.kind) {
    case Exactness::Kind::Exact: return "exact";
    case Exactness::Kind::LowerBound: return "lower-bound(depth=" + std::to_string(e.depth) + ")";
    case Exactness::Kind::UpperBound: return "upper-bound(depth=" + std::to_string(e.depth) + ")";
  }
  return "?";
}

LatticeResult::LatticeResult(std::shared_ptr<const SemiRingBackend> backend,
                             std::function<LatticeValue(MemberId)> eval,
                             std::function<Charge(std::string)> materialize)
    : backend_(std::move(backend)), eval_(std::move(eval)), materialize_(std::move(materialize)) {}

Charge LatticeResult::as_charge(std::string name) const {
  if (!materialize_) {
    throw std::logic_error("this lattice result has no charge form (raw inputs or truncated search)");
  }
  return materialize_(std::move(name));
}

LatticeResult LatticeResult::negated() const {
  auto inner_eval = eval_;
  std::function<Charge(std::string)> mat;
  if (materialize_) {
    auto inner_mat = materialize_;
    mat = [inner_mat](std::string name) { return inner_mat("").negated().renamed(std::move(name)); };
  }
  return LatticeResult(
      backend_,
      [inner_eval](MemberId a) {
        LatticeValue v = inner_eval(a);
        return LatticeValue{neg(v.value), v.exactness.dual(), std::move(v.witness)};
      },
      std::move(mat));
}

namespace {

// ---- explicit backends: full partition enumeration over pointwise suprema.

struct ExplicitEngine {
  std::shared_ptr<const ExplicitBackend> backend;
  std::vector<ExtReal> pointwise;  // sup over the family, per member

  LatticeValue at(MemberId a) const {
    std::optional<ExtReal> best;
    std::optional<Partition> witness;
    backend->for_each_partition(a, {}, [&](const Partition& p) {
      std::vector<ExtReal> terms;
      terms.reserve(p.blocks.size());
      for (MemberId b : p.blocks) terms.push_back(pointwise[b.index]);
      ExtReal v = sum(terms);
      if (!best || *best < v) {  // strict: keeps the first (lexicographic) optimum
        best = std::move(v);
        witness = p;
      }
      return true;
    });
    return LatticeValue{*best, Exactness::exact(), std::move(witness)};
  }
};

ExplicitEngine make_explicit_engine(const std::shared_ptr<const ExplicitBackend>& backend,
                                    const std::function<ExtReal(MemberId, std::size_t)>& value_of,
                                    std::size_t family_size) {
  ExplicitEngine engine{backend, {}};
  const std::size_t count = *backend->member_count();
  engine.pointwise.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    MemberId m{static_cast<std::uint32_t>(i)};
    std::optional<ExtReal> best;
    for (std::size_t j = 0; j < family_size; ++j) {
      ExtReal v = value_of(m, j);
      if (!best || *best < v) best = std::move(v);
    }
    if (best->is_neg_inf()) throw InadmissibleFamily(backend->member_name(m));
    engine.pointwise.push_back(*std::move(best));
  }
  return engine;
}

LatticeResult explicit_sup(std::shared_ptr<const ExplicitBackend> backend,
                           std::function<ExtReal(MemberId, std::size_t)> value_of,
                           std::size_t family_size, bool charge_inputs) {
  auto engine = std::make_shared<ExplicitEngine>(make_explicit_engine(backend, value_of, family_size));
  std::function<Charge(std::string)> materialize;
  if (charge_inputs) {
    materialize = [engine](std::string name) {
      std::vector<ExtReal> table;
      const std::size_t count = *engine->backend->member_count();
      table.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        table.push_back(engine->at(MemberId{static_cast<std::uint32_t>(i)}).value);
      }
      auto result = validate_charge(engine->backend, std::move(table), std::move(name));
      if (!result.ok()) {
        throw std::logic_error("supremum of a charge family failed validation: " +
                               result.violation->message());
      }
      return *std::move(result.charge);
    };
  }
  return LatticeResult(engine->backend, [engine](MemberId a) { return engine->at(a); },
                       std::move(materialize));
}

// ---- interval backends: the split-point recurrence, exact per query.

LatticeResult interval_sup(const Family& family) {
  auto charges = std::make_shared<std::vector<Charge>>(family.charges());
  auto backend = family.backend();
  const bool is_nat = backend->kind() == BackendKind::NatIntervals;

  auto block_value = [charges](std::uint64_t s, std::uint64_t t) {
    std::optional<ExtReal> best;
    for (const Charge& c : *charges) {
      ExtReal v = interval_value(c, s, t);
      if (!best || *best < v) best = std::move(v);
    }
    return *std::move(best);
  };

  auto eval = [charges, backend, is_nat, block_value](MemberId a) {
    auto [lo, hi] = interval_span(charges->front(), a);
    IntervalDpResult dp = interval_chain_optimum(lo, hi, /*maximize=*/true, block_value);
    std::vector<MemberId> blocks;
    for (std::size_t i = 0; i + 1 < dp.chain.size(); ++i) {
      if (is_nat) {
        blocks.push_back(static_cast<const NatIntervalBackend&>(*backend).interval(dp.chain[i],
                                                                                   dp.chain[i + 1]));
      } else {
        blocks.push_back(static_cast<const GridIntervalBackend&>(*backend).cell_span(
            static_cast<std::size_t>(dp.chain[i]), static_cast<std::size_t>(dp.chain[i + 1])));
      }
    }
    if (lo >= hi) blocks.clear();
    return LatticeValue{std::move(dp.value), Exactness::exact(),
                        Partition{a, std::move(blocks)}};
  };

  // The supremum of a charge family is additive, so per-cell suprema present
  // it exactly in weight form.
  std::function<Charge(std::string)> materialize;
  if (is_nat) {
    materialize = [charges, backend, block_value](std::string name) {
      return make_nat_weight_charge(
          std::static_pointer_cast<const NatIntervalBackend>(backend),
          [block_value](std::uint64_t k) { return block_value(k, k + 1).finite_value(); },
          std::move(name));
    };
  } else {
    materialize = [charges, backend, block_value](std::string name) {
      auto grid = std::static_pointer_cast<const GridIntervalBackend>(backend);
      std::vector<Rational> masses;
      masses.reserve(grid->grid().cell_count());
      for (std::size_t i = 0; i < grid->grid().cell_count(); ++i) {
        masses.push_back(block_value(i, i + 1).finite_value());
      }
      return make_grid_mass_charge(std::move(grid), std::move(masses), std::move(name));
    };
  }
  return LatticeResult(backend, std::move(eval), std::move(materialize));
}

// ---- cofinite backend: catalogued closed forms, else truncated search.

bool is_zero_rule(const SymbolicCharge& s) {
  return s.rule == CofiniteRule::Zero && s.perturbation.empty();
}

LatticeResult cofinite_closed_form(const std::shared_ptr<const SemiRingBackend>& backend,
                                   SymbolicCharge closed) {
  auto cof = std::static_pointer_cast<const CofiniteBackend>(backend);
  auto eval = [cof, closed](MemberId a) {
    return LatticeValue{symbolic_value(closed, cof->set_of(a)), Exactness::exact(), std::nullopt};
  };
  auto materialize = [cof, closed](std::string name) {
    auto result = validate_symbolic_charge(cof, closed, std::move(name));
    if (!result.ok()) throw std::logic_error("catalogued closed form failed validation");
    return *std::move(result.charge);
  };
  return LatticeResult(backend, std::move(eval), std::move(materialize));
}

LatticeResult cofinite_sup(const Family& family, const SupOptions& options) {
  auto cof = std::static_pointer_cast<const CofiniteBackend>(family.backend());
  std::vector<SymbolicCharge> rules;
  rules.reserve(family.charges().size());
  for (const Charge& c : family.charges()) rules.push_back(c.effective_symbolic());

  // Catalogued shapes answered in closed form.
  if (rules.size() == 1) {
    return cofinite_closed_form(family.backend(), rules[0]);
  }
  if (rules.size() == 2) {
    for (int i = 0; i < 2; ++i) {
      const SymbolicCharge& s = rules[i];
      const SymbolicCharge& other = rules[1 - i];
      if (is_zero_rule(other) && s.pure()) {
        if (is_zero_rule(s)) return cofinite_closed_form(family.backend(), s);
        return cofinite_closed_form(family.backend(), jordan_symbolic(s).first);
      }
    }
    if (rules[0].pure() && symbolic_negate(rules[0]) == rules[1]) {
      return cofinite_closed_form(family.backend(), symbolic_variation(rules[0]));
    }
  }

  // Lower-bound search: best partition found within the truncation.
  auto charges = std::make_shared<std::vector<Charge>>(family.charges());
  const std::size_t horizon = options.cofinite_horizon;
  auto eval = [cof, charges, horizon](MemberId a) {
    auto pointwise = [&](MemberId b) {
      std::optional<ExtReal> best;
      for (const Charge& c : *charges) {
        ExtReal v = c.value(b);
        if (!best || *best < v) best = std::move(v);
      }
      return *best;
    };
    std::optional<ExtReal> best;
    std::optional<Partition> witness;
    PartitionOptions popts;
    popts.element_horizon = horizon;
    EnumerationStatus status = cof->for_each_partition(a, popts, [&](const Partition& p) {
      std::vector<ExtReal> terms;
      terms.reserve(p.blocks.size());
      for (MemberId b : p.blocks) terms.push_back(pointwise(b));
      ExtReal v = sum(terms);
      if (!best || *best < v) {
        best = std::move(v);
        witness = p;
      }
      return true;
    });
    Exactness tag = status.complete ? Exactness::exact() : Exactness::lower_bound(horizon);
    return LatticeValue{*best, tag, std::move(witness)};
  };
  return LatticeResult(family.backend(), std::move(eval), nullptr);
}

}  // namespace

LatticeResult sup_family(const Family& family, const SupOptions& options) {
  AdmissibilityReport admissible = check_admissibility(family);
  if (!admissible.ok) throw InadmissibleFamily(admissible.witness);

  switch (family.backend()->kind()) {
    case BackendKind::Explicit: {
      auto backend = std::static_pointer_cast<const ExplicitBackend>(family.backend());
      auto charges = std::make_shared<std::vector<Charge>>(family.charges());
      return explicit_sup(
          backend, [charges](MemberId m, std::size_t j) { return (*charges)[j].value(m); },
          charges->size(), /*charge_inputs=*/true);
    }
    case BackendKind::NatIntervals:
    case BackendKind::GridIntervals:
      return interval_sup(family);
    case BackendKind::Cofinite:
      return cofinite_sup(family, options);
  }
  throw std::logic_error("unknown backend kind");
}

LatticeResult sup_family(std::span<const SetFunction> family) {
  AdmissibilityReport admissible = check_admissibility(family);
  if (!admissible.ok) throw InadmissibleFamily(admissible.witness);
  auto backend = std::static_pointer_cast<const ExplicitBackend>(family.front().backend());
  auto fns = std::make_shared<std::vector<SetFunction>>(family.begin(), family.end());
  return explicit_sup(
      backend, [fns](MemberId m, std::size_t j) { return (*fns)[j].value(m); }, fns->size(),
      /*charge_inputs=*/false);
}

LatticeResult inf_family(const Family& family, const SupOptions& options) {
  return sup_family(family.negated(), options).negated();
}

Charge sup_charge(const Charge& a, const Charge& b, std::string name) {
  return sup_family(Family({a, b})).as_charge(std::move(name));
}

Charge inf_charge(const Charge& a, const Charge& b, std::string name) {
  return inf_family(Family({a, b})).as_charge(std::move(name));
}

JordanParts jordan(const Charge& mu, const SupOptions& options) {
  const std::string base = mu.name().empty() ? "mu" : mu.name();
  Charge zero = make_zero_charge(mu.backend());
  Charge pos = sup_family(Family({mu, zero}), options).as_charge(base + "+");
  Charge neg = sup_family(Family({mu.negated(), zero}), options).as_charge(base + "-");
  LatticeResult variation = sup_family(Family({mu, mu.negated()}), options);
  return JordanParts{std::move(pos), std::move(neg), std::move(variation)};
}

JordanIdentityReport check_jordan_identities(const Charge& mu, const JordanParts& parts, MemberId a) {
  const ExtReal mu_v = mu.value(a);
  const ExtReal pos_v = parts.pos.value(a);
  const ExtReal neg_v = parts.neg.value(a);
  std::ostringstream os;
  bool holds = true;

  auto expect = [&](const char* label, const ExtReal& lhs, const ExtReal& rhs) {
    if (!(lhs == rhs)) {
      holds = false;
      os << label << ": " << lhs << " != " << rhs << "; ";
    }
  };

  const Polarity polarity = mu.polarity();
  if (polarity != Polarity::AvoidsPosInf) {  // mu > -inf: pos = mu + neg
    expect("pos = mu + neg", pos_v, add(mu_v, neg_v));
  }
  if (polarity != Polarity::AvoidsNegInf) {  // mu < +inf: pos - mu = neg
    expect("pos - mu = neg", add(pos_v, neg(mu_v)), neg_v);
  }
  const LatticeValue var = parts.variation.at(a);
  if (var.exactness.is_exact()) {
    expect("variation = pos + neg", var.value, add(pos_v, neg_v));
    if (var.value.is_finite()) {
      expect("mu = pos - neg", mu_v, sub(pos_v, neg_v));
    }
  }
  return JordanIdentityReport{holds, os.str()};
}

namespace {

// The meet by its displayed formula: the infimum over partitions of the
// blockwise-minimum sum. Works even where the duality route is unavailable
// (both parts infinite somewhere breaks the dual admissibility condition).
// Exact on explicit and interval backends. On the cofinite backend every
// partition of a cofinite member keeps one cofinite block, so the truncated
// enumeration still determines the value of the nonnegative part pairs.
ExtReal direct_meet_value(const Charge& pos, const Charge& neg, MemberId a,
                          const SupOptions& options) {
  const SemiRingBackend& backend = *pos.backend();
  switch (backend.kind()) {
    case BackendKind::NatIntervals:
    case BackendKind::GridIntervals: {
      auto [lo, hi] = interval_span(pos, a);
      return interval_chain_optimum(lo, hi, /*maximize=*/false,
                                    [&](std::uint64_t s, std::uint64_t t) {
                                      return min(interval_value(pos, s, t), interval_value(neg, s, t));
                                    })
          .value;
    }
    case BackendKind::Explicit:
    case BackendKind::Cofinite: {
      PartitionOptions popts;
      popts.element_horizon = options.cofinite_horizon;
      std::optional<ExtReal> best;
      backend.for_each_partition(a, popts, [&](const Partition& p) {
        std::vector<ExtReal> terms;
        terms.reserve(p.blocks.size());
        for (MemberId c : p.blocks) terms.push_back(min(pos.value(c), neg.value(c)));
        ExtReal v = sum(terms);
        if (!best || v < *best) best = std::move(v);
        return true;
      });
      return *best;
    }
  }
  throw std::logic_error("unknown backend kind");
}

}  // namespace

MeetReport meet_dichotomy(const Charge& mu, MemberId a, const SupOptions& options) {
  JordanParts parts = jordan(mu, options);
  const ExtReal pos_v = parts.pos.value(a);
  const ExtReal neg_v = parts.neg.value(a);
  const bool zero = pos_v.is_finite() || neg_v.is_finite();
  const ExtReal expected = zero ? ExtReal(0) : ExtReal::pos_inf();

  const ExtReal meet = direct_meet_value(parts.pos, parts.neg, a, options);
  if (!(meet == expected)) {
    throw std::logic_error("meet dichotomy mismatch at " + mu.backend()->member_name(a) + ": meet " +
                           to_string(meet) + " vs dichotomy " + to_string(expected));
  }
  return MeetReport{zero ? MeetVerdict::Zero : MeetVerdict::Infinite, pos_v, neg_v, expected};
}

NormResult ba_norm(const Charge& mu, const NormOptions& options) {
  LatticeResult variation = sup_family(Family({mu, mu.negated()}));
  const SemiRingBackend& backend = *mu.backend();
  switch (backend.kind()) {
    case BackendKind::Explicit: {
      NormResult out{ExtReal(0), Exactness::exact(), false, ""};
      bool first = true;
      backend.for_each_member(std::nullopt, [&](MemberId m) {
        ExtReal v = variation.at(m).value;
        if (first || out.value < v) {
          out.value = std::move(v);
          out.witness_member = backend.member_name(m);
          first = false;
        }
        return true;
      });
      return out;
    }
    case BackendKind::GridIntervals: {
      // The variation has nonnegative cell masses, so the full span attains
      // the supremum over members.
      const auto& grid = static_cast<const GridIntervalBackend&>(backend);
      MemberId full = grid.cell_span(0, grid.grid().points.size() - 1);
      return NormResult{variation.at(full).value, Exactness::exact(), false, grid.member_name(full)};
    }
    case BackendKind::NatIntervals: {
      const auto& nat = static_cast<const NatIntervalBackend&>(backend);
      Charge var_weights = variation.as_charge(mu.name() + "|.|");
      std::size_t window = std::max<std::size_t>(options.horizon, 1);
      NormResult out;
      while (true) {
        MemberId m = nat.interval(nat.min_element(), nat.min_element() + window);
        out.value = var_weights.value(m);
        out.exactness = Exactness::lower_bound(window);
        out.witness_member = nat.member_name(m);
        out.diverged = options.divergence_threshold &&
                       ExtReal(*options.divergence_threshold) <= out.value;
        if (out.diverged || window >= options.max_horizon || !options.divergence_threshold) break;
        window *= 2;
      }
      return out;
    }
    case BackendKind::Cofinite: {
      const auto& cof = static_cast<const CofiniteBackend&>(backend);
      const SymbolicCharge rule = mu.effective_symbolic();
      if (rule.pure()) {
        ExtReal value = symbolic_value(symbolic_variation(rule), cof.set_of(cof.universe()));
        return NormResult{value, Exactness::exact(), value.is_pos_inf(),
                          cof.member_name(cof.universe())};
      }
      ExtReal value = variation_lower_bound(rule, cof.set_of(cof.universe()), options.horizon);
      return NormResult{std::move(value), Exactness::lower_bound(options.horizon), false,
                        cof.member_name(cof.universe())};
    }
  }
  throw std::logic_error("unknown backend kind");
}

ExtensionReport extension_commutes(const Family& family, const SupOptions& options) {
  if (family.backend()->kind() != BackendKind::Explicit) {
    throw std::invalid_argument("extension_commutes needs an explicit backend");
  }
  const auto& base = static_cast<const ExplicitBackend&>(*family.backend());
  auto ring_backend = generated_ring_backend(base);

  std::vector<Charge> extended;
  extended.reserve(family.charges().size());
  for (const Charge& c : family.charges()) extended.push_back(extend_charge(c, ring_backend));

  Charge sup_then_extend = extend_charge(sup_family(family, options).as_charge("sup"), ring_backend);
  LatticeResult extend_then_sup = sup_family(Family(extended), options);

  ExtensionReport report;
  auto compare = [&](const char* label, const std::function<ExtReal(MemberId)>& lhs,
                     const std::function<ExtReal(MemberId)>& rhs) {
    ring_backend->for_each_member(std::nullopt, [&](MemberId m) {
      ExtReal l = lhs(m), r = rhs(m);
      if (!(l == r)) {
        report = ExtensionReport{false, std::string(label) + " at " + ring_backend->member_name(m),
                                 to_string(l), to_string(r)};
        return false;
      }
      return true;
    });
    return report.confirmed;
  };

  if (!compare("sup", [&](MemberId m) { return sup_then_extend.value(m); },
               [&](MemberId m) { return extend_then_sup.at(m).value; })) {
    return report;
  }
  // Jordan parts commute with the extension as well.
  for (std::size_t j = 0; j < family.charges().size(); ++j) {
    JordanParts on_base = jordan(family.charges()[j], options);
    JordanParts on_ring = jordan(extended[j], options);
    Charge pos_extended = extend_charge(on_base.pos, ring_backend);
    Charge neg_extended = extend_charge(on_base.neg, ring_backend);
    if (!compare("pos", [&](MemberId m) { return pos_extended.value(m); },
                 [&](MemberId m) { return on_ring.pos.value(m); })) {
      return report;
    }
    if (!compare("neg", [&](MemberId m) { return neg_extended.value(m); },
                 [&](MemberId m) { return on_ring.neg.value(m); })) {
      return report;
    }
  }
  return report;
}

}  // namespace chargelat
