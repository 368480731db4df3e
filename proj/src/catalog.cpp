#include "chargelat/catalog.hpp"

#include <sstream>

#include "chargelat/cofinite.hpp"
#include "chargelat/density.hpp"
#include "chargelat/hahn.hpp"
#include "chargelat/lattice.hpp"

namespace chargelat {

namespace fixtures {

Charge alternating_nat_charge(std::shared_ptr<const NatIntervalBackend> backend) {
  return make_nat_weight_charge(
      std::move(backend),
      [](std::uint64_t k) {
        Rational w(1, k);
        return k % 2 == 0 ? w : -w;
      },
      "mu");
}

std::shared_ptr<const GridIntervalBackend> reciprocal_grid(std::size_t max_denominator) {
  EndpointGrid grid;
  for (std::size_t m = max_denominator; m >= 1; --m) grid.points.emplace_back(1, m);
  return std::make_shared<GridIntervalBackend>(std::move(grid));
}

Charge alternating_grid_charge(std::shared_ptr<const GridIntervalBackend> backend) {
  const std::size_t cells = backend->grid().cell_count();
  std::vector<Rational> masses;
  masses.reserve(cells);
  // Ascending cell j is [1/(m+1), 1/m) with m = cells - j; its mass is the
  // signed density (-1)^(m+1) (m+1) times the cell length 1/(m(m+1)).
  for (std::size_t j = 0; j < cells; ++j) {
    const std::size_t m = cells - j;
    Rational mass(1, m);
    masses.push_back(m % 2 == 1 ? mass : -mass);
  }
  return make_grid_mass_charge(std::move(backend), std::move(masses), "mu");
}

FourPoint four_point() {
  auto backend = make_power_set_backend(GroundSet{{"1", "2", "3", "4"}});
  auto result = charge_from_point_weights(
      backend, {ExtReal(2), ExtReal(-3), ExtReal(1), ExtReal(-1)}, "mu");
  return {backend, *std::move(result.charge)};
}

Rational harmonic(std::size_t n) {
  Rational acc = 0;
  for (std::size_t k = 1; k <= n; ++k) acc += Rational(1, k);
  return acc;
}

Rational odd_harmonic(std::size_t n) {
  Rational acc = 0;
  for (std::size_t k = 1; k <= n; ++k) acc += Rational(1, 2 * k - 1);
  return acc;
}

Rational even_harmonic(std::size_t n) {
  Rational acc = 0;
  for (std::size_t k = 1; k <= n; ++k) acc += Rational(1, 2 * k);
  return acc;
}

}  // namespace fixtures

namespace {

using fixtures::even_harmonic;
using fixtures::harmonic;
using fixtures::odd_harmonic;

std::string verdict_name(MeetVerdict v) { return v == MeetVerdict::Zero ? "zero" : "infinite"; }

Fixture fixture_four_point() {
  Fixture f{"four-point",
            "power set of {1,2,3,4} with point masses 2,-3,1,-1: decomposition, norm, meet, "
            "epsilon-Hahn",
            {}};
  auto make = [] { return fixtures::four_point(); };
  f.queries.push_back(
      {"jordan parts and variation at {1,2,3,4}",
       "positive masses sum to 3, negative to 4, so |mu| there is 7",
       [make] {
         auto fx = make();
         JordanParts parts = jordan(fx.mu);
         MemberId omega = fx.backend->member_from_labels(std::vector<std::string>{"1", "2", "3", "4"});
         std::ostringstream os;
         os << parts.pos.value(omega) << ',' << parts.neg.value(omega) << ','
            << parts.variation.at(omega).value;
         return os.str();
       },
       "3,4,7"});
  f.queries.push_back({"lattice norm",
                       "the variation is largest on the whole ground set: 2+3+1+1",
                       [make] {
                         auto fx = make();
                         NormResult r = ba_norm(fx.mu);
                         return to_string(r.value) + " at " + r.witness_member + " [" +
                                to_string(r.exactness) + "]";
                       },
                       "7 at {1,2,3,4} [exact]"});
  f.queries.push_back({"meet of the parts at {1,2,3,4}",
                       "the two parts are disjoint in the lattice sense",
                       [make] {
                         auto fx = make();
                         MemberId omega =
                             fx.backend->member_from_labels(std::vector<std::string>{"1", "2", "3", "4"});
                         MeetReport r = meet_dichotomy(fx.mu, omega);
                         return verdict_name(r.verdict) + "," + to_string(r.meet_value);
                       },
                       "zero,0"});
  f.queries.push_back({"epsilon-Hahn at epsilon 1/2",
                       "splitting off the negative-mass points leaves all ring subsets within 1/2",
                       [make] {
                         auto fx = make();
                         MemberId omega =
                             fx.backend->member_from_labels(std::vector<std::string>{"1", "2", "3", "4"});
                         HahnOutcome r = epsilon_hahn(fx.mu, omega, Rational(1, 2));
                         if (r.status != HahnOutcome::Status::Found) return std::string("not found");
                         HahnVerification v = verify_hahn(fx.mu, *r.certificate);
                         return fx.backend->ring_member_name(r.certificate->h) + " " +
                                (v.verified ? "verified" : "violated");
                       },
                       "{2,4} verified"});
  f.queries.push_back(
      {"finite countable-additivity witness",
       "a finite decomposition reaches the exact value, so the final tail bound is zero",
       [make] {
         auto fx = make();
         MemberId omega = fx.backend->member_from_labels(std::vector<std::string>{"1", "2", "3", "4"});
         std::vector<MemberId> pieces;
         for (std::string label : {"1", "2", "3", "4"}) {
           pieces.push_back(fx.backend->member_from_labels(std::vector<std::string>{label}));
         }
         WitnessVerdict v = check_countable_additivity_witness(
             fx.mu, omega, pieces,
             [&](std::size_t n) { return n < 4 ? ExtReal::pos_inf() : ExtReal(0); });
         return std::string(v.confirmed ? "confirmed" : "failed");
       },
       "confirmed"});
  return f;
}

Fixture fixture_partition_semiring() {
  Fixture f{"partition-semiring",
            "the semi-ring {0,{1,2},{3,4}}: each member admits only the trivial partition, so the "
            "supremum is the pointwise supremum",
            {}};
  auto make = [] {
    auto validated = validate_semiring(GroundSet{{"1", "2", "3", "4"}},
                                       {{}, {"1", "2"}, {"3", "4"}});
    auto backend = validated.backend;
    Charge a = *charge_from_point_weights(backend, {ExtReal(1), ExtReal(1), ExtReal(-2), ExtReal(0)},
                                          "a")
                    .charge;
    Charge b = *charge_from_point_weights(backend, {ExtReal(0), ExtReal(0), ExtReal(1), ExtReal(1)},
                                          "b")
                    .charge;
    return std::tuple{backend, a, b};
  };
  f.queries.push_back({"partitions of {1,2}",
                       "no member splits another, so only the trivial partition exists",
                       [make] {
                         auto [backend, a, b] = make();
                         std::size_t count = 0;
                         backend->for_each_partition(
                             backend->member_from_labels(std::vector<std::string>{"1", "2"}), {},
                             [&](const Partition&) {
                               ++count;
                               return true;
                             });
                         return std::to_string(count);
                       },
                       "1"});
  f.queries.push_back({"supremum values on {1,2} and {3,4}",
                       "with trivial partitions only, sup of {a,b} is max(a,b) memberwise",
                       [make] {
                         auto [backend, a, b] = make();
                         LatticeResult sup = sup_family(Family({a, b}));
                         std::ostringstream os;
                         os << sup.at(backend->member_from_labels(std::vector<std::string>{"1", "2"})).value
                            << ','
                            << sup.at(backend->member_from_labels(std::vector<std::string>{"3", "4"})).value;
                         return os.str();
                       },
                       "2,2"});
  return f;
}

Fixture fixture_interval_alternating() {
  Fixture f{"interval-alternating",
            "weights (-1)^k/k on runs of naturals: a bounded charge whose variation is the "
            "harmonic sum, finite on every member yet unbounded",
            {}};
  auto make = [] {
    auto backend = std::make_shared<NatIntervalBackend>(1);
    return std::pair{backend, fixtures::alternating_nat_charge(backend)};
  };
  f.queries.push_back({"variation on [1,5) and [1,10)",
                       "the variation weight at k is 1/k, so [1,n) carries harmonic(n-1)",
                       [make] {
                         auto [backend, mu] = make();
                         JordanParts parts = jordan(mu);
                         std::ostringstream os;
                         os << parts.variation.at(backend->interval(1, 5)).value << ','
                            << parts.variation.at(backend->interval(1, 10)).value;
                         return os.str();
                       },
                       to_string(harmonic(4)) + "," + to_string(harmonic(9))});
  f.queries.push_back({"ring extension of [1,3) with [5,6)",
                       "(-1 + 1/2) + (-1/5) = -7/10",
                       [make] {
                         auto [backend, mu] = make();
                         RingMember r = backend->ring_membership({1, 2, 5});
                         return to_string(ring_value(mu, r));
                       },
                       "-7/10"});
  f.queries.push_back({"countable-additivity witness on [1,50)",
                       "the tail of the alternating series past N is at most 1/(N+1)",
                       [make] {
                         auto [backend, mu] = make();
                         std::vector<MemberId> pieces;
                         for (std::uint64_t k = 1; k < 50; ++k) pieces.push_back(backend->interval(k, k + 1));
                         WitnessVerdict v = check_countable_additivity_witness(
                             mu, backend->interval(1, 50), pieces,
                             [](std::size_t n) { return ExtReal(Rational(1, n)); });
                         return std::string(v.confirmed ? "confirmed" : "failed");
                       },
                       "confirmed"});
  f.queries.push_back({"norm divergence past threshold 5",
                       "harmonic partial sums exceed any threshold",
                       [make] {
                         auto [backend, mu] = make();
                         NormOptions options;
                         options.divergence_threshold = Rational(5);
                         NormResult r = ba_norm(mu, options);
                         return std::string(r.diverged ? "diverged" : "bounded");
                       },
                       "diverged"});
  return f;
}

Fixture fixture_cofinite_card(bool neg_inf_variant) {
  const std::string id = neg_inf_variant ? "cofinite-card-neginf" : "cofinite-card";
  Fixture f{id,
            neg_inf_variant
                ? "counting charge that is -inf on cofinite sets: decomposition with an "
                  "infinite-valued charge"
                : "counting charge, negative co-counting on cofinite sets: finite but of no "
                  "finite variation",
            {}};
  const CofiniteRule rule = neg_inf_variant ? CofiniteRule::CardNegInf : CofiniteRule::CardCocard;
  auto make = [rule] {
    auto backend = std::make_shared<CofiniteBackend>();
    Charge mu = *validate_symbolic_charge(backend, SymbolicCharge{rule, false, {}}, "mu").charge;
    return std::pair{backend, mu};
  };
  f.queries.push_back({"values at {1,2,3} and at the complement of {1,2}",
                       neg_inf_variant ? "count on finite sets, -inf beyond"
                                       : "count on finite sets, negative complement count beyond",
                       [make, neg_inf_variant] {
                         auto [backend, mu] = make();
                         std::ostringstream os;
                         os << mu.value(backend->member(CofiniteSet::finite({1, 2, 3}))) << ','
                            << mu.value(backend->member(CofiniteSet::cofinite({1, 2})));
                         return os.str();
                       },
                       neg_inf_variant ? "3,-inf" : "3,-2"});
  if (!neg_inf_variant) {
    f.queries.push_back(
        {"countable-additivity witness failure on the complement of {1,2}",
         "splitting into singletons gives partial sums 1,2,3,... while the whole carries -2",
         [make] {
           auto [backend, mu] = make();
           std::vector<MemberId> pieces;
           for (std::uint64_t n = 3; n <= 12; ++n) pieces.push_back(backend->member(CofiniteSet::finite({n})));
           WitnessVerdict v = check_countable_additivity_witness(
               mu, backend->member(CofiniteSet::cofinite({1, 2})), pieces,
               [](std::size_t n) { return ExtReal(Rational(1, n)); });
           std::ostringstream os;
           os << (v.confirmed ? "confirmed" : "failed at N=") << (v.confirmed ? "" : std::to_string(*v.failure_index));
           return os.str();
         },
         "failed at N=1"});
    f.queries.push_back({"variation lower bounds at depths 5, 20, 50",
                         "splitting {1..n} off the naturals gives n + n = 2n",
                         [make] {
                           auto [backend, mu] = make();
                           CofiniteSet everything = CofiniteSet::cofinite({});
                           std::ostringstream os;
                           os << variation_lower_bound(mu.effective_symbolic(), everything, 5) << ','
                              << variation_lower_bound(mu.effective_symbolic(), everything, 20) << ','
                              << variation_lower_bound(mu.effective_symbolic(), everything, 50);
                           return os.str();
                         },
                         "10,40,100"});
  }
  f.queries.push_back({"jordan parts at {5} and at the naturals",
                       "on finite sets the parts are (count, 0); on cofinite sets both are +inf",
                       [make] {
                         auto [backend, mu] = make();
                         JordanParts parts = jordan(mu);
                         MemberId five = backend->member(CofiniteSet::finite({5}));
                         MemberId all = backend->universe();
                         std::ostringstream os;
                         os << parts.pos.value(five) << ',' << parts.neg.value(five) << ','
                            << parts.pos.value(all) << ',' << parts.neg.value(all);
                         return os.str();
                       },
                       "1,0,+inf,+inf"});
  f.queries.push_back({"decomposition identity on the complement of {1,2}",
                       neg_inf_variant ? "pos - mu = neg reads +inf - (-inf) = +inf"
                                       : "pos = mu + neg reads +inf = -2 + inf",
                       [make] {
                         auto [backend, mu] = make();
                         JordanParts parts = jordan(mu);
                         JordanIdentityReport r = check_jordan_identities(
                             mu, parts, backend->member(CofiniteSet::cofinite({1, 2})));
                         return std::string(r.holds ? "holds" : r.detail);
                       },
                       "holds"});
  f.queries.push_back({"meet dichotomy on {1,2,3} and on the naturals",
                       "zero when a part is finite, infinite when both parts are infinite",
                       [make] {
                         auto [backend, mu] = make();
                         MeetReport fin = meet_dichotomy(mu, backend->member(CofiniteSet::finite({1, 2, 3})));
                         MeetReport all = meet_dichotomy(mu, backend->universe());
                         return verdict_name(fin.verdict) + "," + verdict_name(all.verdict);
                       },
                       "zero,infinite"});
  f.queries.push_back({"epsilon-Hahn on the naturals at epsilon 1/10",
                       "with both parts infinite no epsilon-Hahn decomposition exists",
                       [make] {
                         auto [backend, mu] = make();
                         HahnOutcome r = epsilon_hahn(mu, backend->universe(), Rational(1, 10));
                         switch (r.status) {
                           case HahnOutcome::Status::Found: return std::string("found");
                           case HahnOutcome::Status::Impossible: return std::string("impossible");
                           case HahnOutcome::Status::SearchExhausted: return std::string("exhausted");
                         }
                         return std::string("?");
                       },
                       "impossible"});
  return f;
}

Fixture fixture_grid_alternating() {
  Fixture f{"grid-alternating",
            "alternating reciprocal masses on a grid over (0,1]: bounded with finite unbounded "
            "variation; the parts carry the odd and even harmonic sums",
            {}};
  auto make = [] {
    auto backend = fixtures::reciprocal_grid(61);
    return std::pair{backend, fixtures::alternating_grid_charge(backend)};
  };
  f.queries.push_back(
      {"positive part at [1/2,1), [1/4,1), [1/6,1)",
       "the positive cells inside [1/(2n),1) carry 1, 1/3, ..., 1/(2n-1)",
       [make] {
         auto [backend, mu] = make();
         JordanParts parts = jordan(mu);
         std::ostringstream os;
         for (std::size_t n = 1; n <= 3; ++n) {
           if (n > 1) os << ';';
           os << parts.pos.value(backend->member_from_endpoints(Rational(1, 2 * n), Rational(1)));
         }
         return os.str();
       },
       to_string(odd_harmonic(1)) + ";" + to_string(odd_harmonic(2)) + ";" + to_string(odd_harmonic(3))});
  f.queries.push_back(
      {"negative part at [1/3,1), [1/5,1), [1/7,1)",
       "the negative cells inside [1/(2n+1),1) carry 1/2, 1/4, ..., 1/(2n)",
       [make] {
         auto [backend, mu] = make();
         JordanParts parts = jordan(mu);
         std::ostringstream os;
         for (std::size_t n = 1; n <= 3; ++n) {
           if (n > 1) os << ';';
           os << parts.neg.value(backend->member_from_endpoints(Rational(1, 2 * n + 1), Rational(1)));
         }
         return os.str();
       },
       to_string(even_harmonic(1)) + ";" + to_string(even_harmonic(2)) + ";" + to_string(even_harmonic(3))});
  f.queries.push_back({"negative part at [1/4,1)",
                       "the negative cells inside [1/(2n),1) stop at 1/(2n-2): here just 1/2",
                       [make] {
                         auto [backend, mu] = make();
                         JordanParts parts = jordan(mu);
                         return to_string(
                             parts.neg.value(backend->member_from_endpoints(Rational(1, 4), Rational(1))));
                       },
                       to_string(even_harmonic(1))});
  f.queries.push_back({"bounded values, growing variation",
                       "member values stay within [-1/2, 1] while |mu|([1/61,1)) is harmonic(60)",
                       [make] {
                         auto [backend, mu] = make();
                         JordanParts parts = jordan(mu);
                         MemberId all = backend->member_from_endpoints(Rational(1, 61), Rational(1));
                         return to_string(parts.variation.at(all).value);
                       },
                       to_string(harmonic(60))});
  return f;
}

Fixture fixture_alpha_family() {
  Fixture f{"alpha-family",
            "length on the nonnegative half minus length of a growing negative window, on an "
            "integer grid over [-4,4): a decreasing family whose supremum is its first element",
            {}};
  auto make = [] {
    EndpointGrid grid;
    for (int c = -4; c <= 4; ++c) grid.points.emplace_back(c);
    auto backend = std::make_shared<GridIntervalBackend>(std::move(grid));
    std::vector<Charge> family;
    for (int n = 1; n <= 4; ++n) {
      std::vector<Rational> masses;
      for (int c = -4; c < 4; ++c) {
        if (c >= 0) {
          masses.emplace_back(1);
        } else if (c >= -n) {
          masses.emplace_back(-1);
        } else {
          masses.emplace_back(0);
        }
      }
      family.push_back(make_grid_mass_charge(backend, std::move(masses), "alpha" + std::to_string(n)));
    }
    return std::pair{backend, family};
  };
  f.queries.push_back({"supremum equals the first member everywhere",
                       "the family decreases in n, so its supremum is alpha1 on every member",
                       [make] {
                         auto [backend, family] = make();
                         LatticeResult sup = sup_family(Family(family));
                         std::size_t mismatches = 0;
                         backend->for_each_member(std::nullopt, [&](MemberId m) {
                           if (!(sup.at(m).value == family[0].value(m))) ++mismatches;
                           return true;
                         });
                         return mismatches == 0 ? std::string("confirmed")
                                                : std::to_string(mismatches) + " mismatches";
                       },
                       "confirmed"});
  return f;
}

Fixture fixture_density_closing() {
  Fixture f{"density-closing",
            "piecewise-constant density on a 64-cell grid over [0,1): the variation is the "
            "integral of |f|, cell by cell",
            {}};
  auto make = [] {
    std::vector<std::string> points;
    std::vector<Rational> weights;
    std::vector<ExtReal> values;
    for (int i = 0; i < 64; ++i) {
      points.push_back("c" + std::to_string(i));
      weights.emplace_back(1, 64);  // cell length
      Rational level(i + 1, 4);
      values.emplace_back(i % 2 == 0 ? level : -level);
    }
    DensitySpace space = make_density_space(points, weights);
    Density density = validate_density(space, values, "f");
    return std::pair{space, density};
  };
  f.queries.push_back({"variation over the whole grid",
                       "sum of |f| times cell length: (1/256) * (64*65/2) = 65/8",
                       [make] {
                         auto [space, density] = make();
                         DensityVariation v = variation_of_density(space, density, all_points(space));
                         return to_string(v.var);
                       },
                       "65/8"});
  f.queries.push_back({"grid realization agrees",
                       "the induced grid charge has |mass| = |f| * length per cell, and its "
                       "variation over [0,1) is the same 65/8",
                       [make] {
                         auto [space, density] = make();
                         EndpointGrid grid;
                         for (int j = 0; j <= 64; ++j) grid.points.emplace_back(j, 64);
                         auto backend = std::make_shared<GridIntervalBackend>(std::move(grid));
                         std::vector<Rational> masses;
                         for (int i = 0; i < 64; ++i) {
                           masses.push_back(density.values[i].finite_value() * space.weights[i]);
                         }
                         Charge mu = make_grid_mass_charge(backend, std::move(masses), "mu");
                         JordanParts parts = jordan(mu);
                         return to_string(parts.variation.at(backend->cell_span(0, 64)).value);
                       },
                       "65/8"});
  return f;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  return {"four-point",    "partition-semiring", "interval-alternating", "cofinite-card",
          "cofinite-card-neginf", "grid-alternating",   "alpha-family",         "density-closing"};
}

Fixture build_fixture(const std::string& id) {
  if (id == "four-point") return fixture_four_point();
  if (id == "partition-semiring") return fixture_partition_semiring();
  if (id == "interval-alternating") return fixture_interval_alternating();
  if (id == "cofinite-card") return fixture_cofinite_card(false);
  if (id == "cofinite-card-neginf") return fixture_cofinite_card(true);
  if (id == "grid-alternating") return fixture_grid_alternating();
  if (id == "alpha-family") return fixture_alpha_family();
  if (id == "density-closing") return fixture_density_closing();
  throw UnknownFixture(id);
}

FixtureReport run_fixture(const Fixture& fixture) {
  FixtureReport report{fixture.id, {}, true};
  for (const FixtureQuery& q : fixture.queries) {
    std::string actual;
    try {
      actual = q.compute();
    } catch (const std::exception& e) {
      actual = std::string("exception: ") + e.what();
    }
    const bool pass = actual == q.expected;
    report.checks.push_back({q.description, q.expected, actual, pass});
    report.all_pass = report.all_pass && pass;
  }
  return report;
}

}  // namespace chargelat
