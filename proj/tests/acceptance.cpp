// Acceptance suite: one line per criterion, exact arithmetic throughout
// (every comparison is exact equality of rationals / extended rationals).

#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "chargelat/catalog.hpp"
#include "chargelat/cofinite.hpp"
#include "chargelat/density.hpp"
#include "chargelat/hahn.hpp"
#include "chargelat/lattice.hpp"
#include "oracle.hpp"

using namespace chargelat;

namespace {

struct Criterion {
  int id;
  std::string label;
  bool pass = true;
  std::string detail;

  Criterion(int id_, std::string label_) : id(id_), label(std::move(label_)) {}

  void require(bool condition, const std::string& message) {
    if (!condition && pass) {
      pass = false;
      detail = message;
    }
  }
};

// 1. Alternating weights on runs of naturals: the variation of [1,n) is the
//    harmonic sum H(n-1) for n <= 100, and the norm diverges past thresholds.
Criterion criterion1() {
  Criterion c{1, "interval variation equals harmonic sums (n <= 100) and the norm diverges"};
  auto backend = std::make_shared<NatIntervalBackend>(1);
  Charge mu = fixtures::alternating_nat_charge(backend);
  JordanParts parts = jordan(mu);
  Rational h = 0;
  for (std::uint64_t n = 1; n <= 100; ++n) {
    if (n > 1) h += Rational(1, n - 1);
    LatticeValue v = parts.variation.at(backend->interval(1, n));
    c.require(v.exactness.is_exact(), "variation tagged inexact at n=" + std::to_string(n));
    c.require(v.value == ExtReal(h), "variation mismatch at n=" + std::to_string(n));
  }
  for (int threshold : {1, 3, 6}) {
    NormOptions options;
    options.divergence_threshold = Rational(threshold);
    NormResult norm = ba_norm(mu, options);
    c.require(norm.diverged, "no divergence at threshold " + std::to_string(threshold));
    c.require(ExtReal(Rational(threshold)) <= norm.value, "lower bound under the threshold");
  }
  return c;
}

// 2. Counting charge on the cofinite algebra: the worked value -2 with a
//    countable-additivity failure, variation lower bounds reaching 2n, and
//    the two-case meet verdicts.
Criterion criterion2() {
  Criterion c{2, "cofinite example: -2 witness failure, 2n lower bounds, two-case dichotomy"};
  auto backend = std::make_shared<CofiniteBackend>();
  Charge mu = *validate_symbolic_charge(backend, SymbolicCharge{CofiniteRule::CardCocard, false, {}},
                                        "mu")
                   .charge;
  MemberId tail = backend->member(CofiniteSet::cofinite({1, 2}));
  c.require(mu.value(tail) == ExtReal(-2), "value at the complement of {1,2}");

  std::vector<MemberId> pieces;
  for (std::uint64_t n = 3; n <= 20; ++n) pieces.push_back(backend->member(CofiniteSet::finite({n})));
  WitnessVerdict verdict = check_countable_additivity_witness(
      mu, tail, pieces, [](std::size_t n) { return ExtReal(Rational(1, n)); });
  c.require(!verdict.confirmed, "the singleton split must fail countable additivity");

  CofiniteSet everything = CofiniteSet::cofinite({});
  for (std::size_t n = 1; n <= 50; ++n) {
    c.require(variation_lower_bound(mu.effective_symbolic(), everything, n) ==
                  ExtReal(static_cast<long long>(2 * n)),
              "variation lower bound at depth " + std::to_string(n));
  }

  c.require(meet_dichotomy(mu, backend->member(CofiniteSet::finite({1, 2, 3}))).verdict ==
                MeetVerdict::Zero,
            "finite members must be Zero");
  c.require(meet_dichotomy(mu, backend->member(CofiniteSet::finite({}))).verdict == MeetVerdict::Zero,
            "the empty member must be Zero");
  c.require(meet_dichotomy(mu, backend->universe()).verdict == MeetVerdict::Infinite,
            "the naturals must be Infinite");
  c.require(meet_dichotomy(mu, tail).verdict == MeetVerdict::Infinite, "cofinite members must be Infinite");
  return c;
}

// 3. Grid example: the parts carry the odd/even harmonic partial sums for
//    n <= 30 (the even sums with their exact index ranges at both endpoints).
Criterion criterion3() {
  Criterion c{3, "grid decomposition carries the odd/even harmonic partial sums (n <= 30)"};
  auto backend = fixtures::reciprocal_grid(61);
  Charge mu = fixtures::alternating_grid_charge(backend);
  JordanParts parts = jordan(mu);
  for (std::size_t n = 1; n <= 30; ++n) {
    MemberId even_endpoint = backend->member_from_endpoints(Rational(1, 2 * n), Rational(1));
    c.require(parts.pos.value(even_endpoint) == ExtReal(fixtures::odd_harmonic(n)),
              "positive part at [1/" + std::to_string(2 * n) + ",1)");
    c.require(parts.neg.value(even_endpoint) == ExtReal(fixtures::even_harmonic(n - 1)),
              "negative part at [1/" + std::to_string(2 * n) + ",1)");
    MemberId odd_endpoint = backend->member_from_endpoints(Rational(1, 2 * n + 1), Rational(1));
    c.require(parts.neg.value(odd_endpoint) == ExtReal(fixtures::even_harmonic(n)),
              "negative part at [1/" + std::to_string(2 * n + 1) + ",1)");
    LatticeValue var = parts.variation.at(even_endpoint);
    c.require(var.value == ExtReal(fixtures::odd_harmonic(n) + fixtures::even_harmonic(n - 1)),
              "variation at [1/" + std::to_string(2 * n) + ",1)");
  }
  return c;
}

// 4. The constructive supremum equals the exhaustive partition maximum on
//    sampled semi-rings over grounds of size <= 5 (>= 200 charge families),
//    and stays super-additive on >= 200 raw non-additive families.
Criterion criterion4() {
  Criterion c{4, "sup equals brute force (>= 200 charge families); super-additivity (>= 200 raw)"};
  std::mt19937_64 rng(1004);
  int charge_trials = 0, raw_trials = 0;
  while (charge_trials < 200 || raw_trials < 200) {
    auto backend = oracle::random_semiring(rng);
    std::vector<ExplicitBackend::Mask> masks;
    backend->for_each_member(std::nullopt, [&](MemberId m) {
      masks.push_back(backend->mask_of(m));
      return true;
    });
    if (charge_trials < 200) {
      ++charge_trials;
      std::vector<Charge> family;
      const int size = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < size; ++j) family.push_back(oracle::random_charge(rng, backend, "f"));
      LatticeResult sup = sup_family(Family(family));
      std::vector<std::vector<ExtReal>> tables;
      for (const Charge& f : family) {
        std::vector<ExtReal> t;
        backend->for_each_member(std::nullopt, [&](MemberId m) {
          t.push_back(f.value(m));
          return true;
        });
        tables.push_back(std::move(t));
      }
      backend->for_each_member(std::nullopt, [&](MemberId m) {
        c.require(sup.at(m).value == oracle::sup_value(masks, backend->mask_of(m), tables),
                  "charge-family supremum mismatch");
        return true;
      });
    }
    if (raw_trials < 200) {
      ++raw_trials;
      std::vector<SetFunction> family;
      const int size = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < size; ++j) family.push_back(oracle::random_set_function(rng, backend, "g"));
      LatticeResult sup = sup_family(family);
      backend->for_each_member(std::nullopt, [&](MemberId a) {
        const ExtReal whole = sup.at(a).value;
        backend->for_each_partition(a, {}, [&](const Partition& p) {
          std::vector<ExtReal> blocks;
          for (MemberId b : p.blocks) blocks.push_back(sup.at(b).value);
          c.require(sum(blocks) <= whole, "super-additivity violated");
          return c.pass;
        });
        return c.pass;
      });
    }
    if (!c.pass) break;
  }
  return c;
}

// 5. Least-upper-bound property over >= 200 families, with dominating charges
//    generated both as sup + nonnegative and as filtered random charges, plus
//    the binary lattice identities.
Criterion criterion5() {
  Criterion c{5, "least upper bound (>= 200 families, both generators); binary lattice identities"};
  std::mt19937_64 rng(1005);
  int trials = 0, filtered_used = 0;
  while (trials < 200) {
    ++trials;
    auto backend = oracle::random_semiring(rng);
    std::vector<Charge> family;
    const int size = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < size; ++j) family.push_back(oracle::random_charge(rng, backend, "f"));
    Charge sup = sup_family(Family(family)).as_charge("sup");

    backend->for_each_member(std::nullopt, [&](MemberId m) {
      for (const Charge& f : family) c.require(f.value(m) <= sup.value(m), "sup is not an upper bound");
      return true;
    });

    // Mode A: sup plus a nonnegative charge.
    Charge lambda_a = add_charges(sup, oracle::random_nonneg_charge(rng, backend, "pad"), "lambdaA");
    // Mode B: an independently random charge kept only when it dominates.
    std::optional<Charge> lambda_b;
    for (int attempt = 0; attempt < 12 && !lambda_b; ++attempt) {
      std::vector<ExtReal> weights;
      std::uniform_int_distribution<int> num(3, 12);
      for (std::size_t i = 0; i < backend->ground().size(); ++i) {
        weights.emplace_back(Rational(num(rng), 1));
      }
      Charge candidate =
          *charge_from_point_weights(backend, std::move(weights), "lambdaB").charge;
      bool dominates = true;
      backend->for_each_member(std::nullopt, [&](MemberId m) {
        for (const Charge& f : family) dominates = dominates && f.value(m) <= candidate.value(m);
        return dominates;
      });
      if (dominates) lambda_b = candidate;
    }
    if (lambda_b) ++filtered_used;

    backend->for_each_member(std::nullopt, [&](MemberId m) {
      c.require(sup.value(m) <= lambda_a.value(m), "sup exceeds a dominating charge (mode A)");
      if (lambda_b) c.require(sup.value(m) <= lambda_b->value(m), "sup exceeds a dominating charge (mode B)");
      return true;
    });

    if (trials <= 60) {  // binary identities on a subset of the trials
      Charge a = family.front();
      Charge b = oracle::random_charge(rng, backend, "b");
      Charge avb = sup_charge(a, b, "avb");
      Charge bva = sup_charge(b, a, "bva");
      Charge meet = inf_charge(a, b, "anb");
      Charge absorbed = sup_charge(a, meet, "absorb");
      Charge meet_absorbed = inf_charge(a, avb, "absorb2");
      backend->for_each_member(std::nullopt, [&](MemberId m) {
        c.require(avb.value(m) == bva.value(m), "commutativity failed");
        c.require(absorbed.value(m) == a.value(m), "absorption (join over meet) failed");
        c.require(meet_absorbed.value(m) == a.value(m), "absorption (meet over join) failed");
        return true;
      });
    }
    if (!c.pass) break;
  }
  c.require(filtered_used >= 50, "too few filtered dominating charges exercised");
  return c;
}

// 6. Jordan suite: the decomposition identities hold exactly on >= 200 random
//    finite-variation charges, and on the infinite-valued closed forms in
//    every defined case.
Criterion criterion6() {
  Criterion c{6, "Jordan identities (>= 200 random charges; infinite closed forms)"};
  std::mt19937_64 rng(1006);
  for (int trial = 0; trial < 200 && c.pass; ++trial) {
    auto backend = oracle::random_semiring(rng);
    Charge mu = oracle::random_charge(rng, backend, "mu");
    JordanParts parts = jordan(mu);
    LatticeResult meet = inf_family(Family({parts.pos, parts.neg}));
    backend->for_each_member(std::nullopt, [&](MemberId m) {
      c.require(mu.value(m) == sub(parts.pos.value(m), parts.neg.value(m)), "mu != pos - neg");
      c.require(parts.variation.at(m).value == add(parts.pos.value(m), parts.neg.value(m)),
                "variation != pos + neg");
      c.require(meet.at(m).value == ExtReal(0), "pos ^ neg != 0");
      return c.pass;
    });
  }

  auto backend = std::make_shared<CofiniteBackend>();
  for (CofiniteRule rule : {CofiniteRule::CardCocard, CofiniteRule::CardNegInf}) {
    Charge mu = *validate_symbolic_charge(backend, SymbolicCharge{rule, false, {}}, "mu").charge;
    JordanParts parts = jordan(mu);
    std::vector<MemberId> samples{
        backend->member(CofiniteSet::finite({})),      backend->member(CofiniteSet::finite({0})),
        backend->member(CofiniteSet::finite({2, 5})),  backend->member(CofiniteSet::finite({1, 2, 3, 4})),
        backend->member(CofiniteSet::cofinite({})),    backend->member(CofiniteSet::cofinite({1, 2})),
        backend->member(CofiniteSet::cofinite({0, 7}))};
    for (MemberId m : samples) {
      JordanIdentityReport report = check_jordan_identities(mu, parts, m);
      c.require(report.holds, "infinite-case identity failed: " + report.detail);
    }
  }
  return c;
}

// 7. The split-point recurrence equals exhaustive composition enumeration on
//    intervals of width up to 12, over >= 100 random families.
Criterion criterion7() {
  Criterion c{7, "interval recurrence equals exhaustive compositions (width <= 12, >= 100 families)"};
  std::mt19937_64 rng(1007);
  auto backend = std::make_shared<NatIntervalBackend>(0);
  for (int trial = 0; trial < 100 && c.pass; ++trial) {
    std::vector<Charge> family;
    const int size = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < size; ++j) {
      auto weights = std::make_shared<std::vector<Rational>>();
      for (int k = 0; k < 18; ++k) weights->push_back(oracle::random_rational(rng));
      family.push_back(make_nat_weight_charge(
          backend,
          [weights](std::uint64_t k) { return k < weights->size() ? (*weights)[k] : Rational(0); },
          "f"));
    }
    const std::uint64_t lo = rng() % 3;
    const std::uint64_t width = trial % 2 == 0 ? 12 : 1 + rng() % 12;
    auto block_value = [&](std::uint64_t s, std::uint64_t t) {
      ExtReal best = interval_value(family[0], s, t);
      for (const Charge& f : family) best = max(best, interval_value(f, s, t));
      return best;
    };
    ExtReal dp = sup_interval_dp(family, backend->interval(lo, lo + width));
    ExtReal brute = oracle::best_composition_value(lo, lo + width, true, block_value);
    c.require(dp == brute, "recurrence mismatch at width " + std::to_string(width));
  }
  return c;
}

// 8. epsilon-Hahn: certificates verify exhaustively on explicit instances
//    with |ground| <= 5 for epsilon in {1, 1/2, 1/10}; Impossible appears
//    exactly where the meet verdict is Infinite.
Criterion criterion8() {
  Criterion c{8, "epsilon-Hahn certificates verify; Impossible iff the meet is Infinite"};
  std::mt19937_64 rng(1008);
  const std::vector<Rational> epsilons{Rational(1), Rational(1, 2), Rational(1, 10)};
  for (int trial = 0; trial < 40 && c.pass; ++trial) {
    auto backend = oracle::random_semiring(rng);
    Charge mu = oracle::random_charge(rng, backend, "mu");
    backend->for_each_member(std::nullopt, [&](MemberId a) {
      for (const Rational& epsilon : epsilons) {
        HahnOutcome outcome = epsilon_hahn(mu, a, epsilon);
        if (outcome.status != HahnOutcome::Status::Found) {
          c.require(false, "no decomposition on a finite charge");
          return false;
        }
        HahnVerification v = verify_hahn(mu, *outcome.certificate);
        c.require(v.verified, "certificate failed: " + v.violating_subset + " " + v.detail);
      }
      return c.pass;
    });
  }

  auto cof = std::make_shared<CofiniteBackend>();
  Charge counting = *validate_symbolic_charge(cof, SymbolicCharge{CofiniteRule::CardCocard, false, {}},
                                              "mu")
                         .charge;
  for (MemberId m : {cof->member(CofiniteSet::finite({1, 2, 3})), cof->universe(),
                     cof->member(CofiniteSet::cofinite({4}))}) {
    HahnOutcome outcome = epsilon_hahn(counting, m, Rational(1, 10));
    const bool impossible = outcome.status == HahnOutcome::Status::Impossible;
    const bool infinite = meet_dichotomy(counting, m).verdict == MeetVerdict::Infinite;
    c.require(impossible == infinite, "Impossible must coincide with the Infinite verdict");
    if (outcome.status == HahnOutcome::Status::Found) {
      c.require(verify_hahn(counting, *outcome.certificate).verified, "cofinite certificate failed");
    }
  }
  return c;
}

// 9. Extension lemma: sup-then-extend equals extend-then-sup on the generated
//    ring for >= 100 random instances, Jordan parts included.
Criterion criterion9() {
  Criterion c{9, "sup and Jordan parts commute with the ring extension (>= 100 instances)"};
  std::mt19937_64 rng(1009);
  for (int trial = 0; trial < 100 && c.pass; ++trial) {
    auto backend = oracle::random_semiring(rng);
    std::vector<Charge> charges{oracle::random_charge(rng, backend, "a")};
    if (trial % 2 == 0) charges.push_back(oracle::random_charge(rng, backend, "b"));
    ExtensionReport report = extension_commutes(Family(charges));
    c.require(report.confirmed,
              "mismatch " + report.mismatch_member + ": " + report.lhs + " vs " + report.rhs);
  }
  return c;
}

// 10. Density theorem: the partition supremum equals the integral of the
//     pointwise supremum on >= 200 random families (<= 10 points, <= 6
//     densities), plus the 64-cell closing example.
Criterion criterion10() {
  Criterion c{10, "density supremum theorem (>= 200 families); 64-cell closing example"};
  std::mt19937_64 rng(1010);
  for (int trial = 0; trial < 200 && c.pass; ++trial) {
    // Mostly small spaces; a few at the full 10 points.
    std::size_t n = 3 + rng() % 6;
    if (trial % 50 == 0) n = 10;
    std::vector<std::string> points;
    std::vector<Rational> weights;
    std::uniform_int_distribution<int> weight(0, 5);
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back("p" + std::to_string(i));
      weights.emplace_back(weight(rng));
    }
    DensitySpace space = make_density_space(points, weights);
    std::vector<Density> family;
    const std::size_t size = 1 + rng() % 6;
    for (std::size_t j = 0; j < size; ++j) {
      std::vector<ExtReal> values;
      for (std::size_t i = 0; i < n; ++i) {
        if (rng() % 16 == 0) {
          values.push_back(ExtReal::pos_inf());
        } else {
          values.push_back(ExtReal(oracle::random_rational(rng)));
        }
      }
      family.push_back(validate_density(space, std::move(values), "f"));
    }
    const PointSet subset =
        trial % 3 == 0 ? all_points(space) : static_cast<PointSet>(rng() % (1u << n));
    ExtReal by_partitions = sup_density_measures(space, family, subset);
    ExtReal by_integral = measure_of_density(space, pointwise_sup(space, family), subset);
    c.require(by_partitions == by_integral, "the two routes disagree");
  }

  // Closing example: piecewise-constant density on 64 equal cells.
  std::vector<std::string> points;
  std::vector<Rational> weights;
  std::vector<ExtReal> values;
  Rational expected = 0;
  for (int i = 0; i < 64; ++i) {
    points.push_back("c" + std::to_string(i));
    weights.emplace_back(1, 64);
    Rational level(i + 1, 4);
    values.emplace_back(i % 2 == 0 ? level : -level);
    expected += level / 64;
  }
  DensitySpace space = make_density_space(points, weights);
  Density f = validate_density(space, values, "f");
  DensityVariation v = variation_of_density(space, f, all_points(space));
  c.require(v.var == ExtReal(expected), "closing-example variation mismatch");

  EndpointGrid grid;
  for (int j = 0; j <= 64; ++j) grid.points.emplace_back(j, 64);
  auto backend = std::make_shared<GridIntervalBackend>(std::move(grid));
  std::vector<Rational> masses;
  for (int i = 0; i < 64; ++i) masses.push_back(f.values[i].finite_value() * space.weights[i]);
  Charge mu = make_grid_mass_charge(backend, std::move(masses), "mu");
  JordanParts parts = jordan(mu);
  c.require(parts.variation.at(backend->cell_span(0, 64)).value == ExtReal(expected),
            "grid realization of the closing example mismatch");
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results{criterion1(), criterion2(), criterion3(), criterion4(),
                                 criterion5(), criterion6(), criterion7(), criterion8(),
                                 criterion9(), criterion10()};
  int passed = 0;
  for (const Criterion& c : results) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.label;
    if (!c.pass) std::cout << " -- " << c.detail;
    std::cout << '\n';
    passed += c.pass ? 1 : 0;
  }
  std::cout << "ACCEPTANCE: " << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
