#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rnforge/error.hpp"
#include "rnforge/radon_nikodym.hpp"
#include "support.hpp"

using namespace rnforge;
using namespace rnforge::testing;

namespace {

struct Example {
  SpaceHandle space = abc();
  Measure nu{space, {Rational(1, 2), Rational(1, 4), Rational(1, 4)}};
  Measure lambda{space, {Rational(1, 4), Rational(1, 2), Rational(1, 4)}};
  FiniteAlgebra atomic = FiniteAlgebra::atomic(space);
};

SimpleDensity on_atoms(const SpaceHandle& s, Weights values) {
  return SimpleDensity(FiniteAlgebra::atomic(s), std::move(values));
}

}  // namespace

TEST_CASE("SimpleDensity validates its values") {
  const auto s = abc();
  CHECK_THROWS_AS(SimpleDensity(FiniteAlgebra::atomic(s), {1, 2}), PreconditionError);
  CHECK_THROWS_AS(SimpleDensity(FiniteAlgebra::atomic(s), {1, -1, 2}), PreconditionError);
  const FiniteAlgebra two(s, {MeasurableSet::of(s, {0, 2}), MeasurableSet::of(s, {1})});
  const SimpleDensity f(two, {Rational(3), Rational(5)});
  CHECK(f.at_atom(2) == 3);
  CHECK(f.at_atom(1) == 5);
}

TEST_CASE("RefinementChain checks refinement and an atomic last level") {
  const auto s = abc();
  const FiniteAlgebra ab_c(s, {MeasurableSet::of(s, {0, 1}), MeasurableSet::of(s, {2})});
  const FiniteAlgebra a_bc(s, {MeasurableSet::of(s, {0}), MeasurableSet::of(s, {1, 2})});
  CHECK_NOTHROW(RefinementChain({ab_c, FiniteAlgebra::atomic(s)}));
  CHECK_THROWS_AS(RefinementChain({ab_c, a_bc, FiniteAlgebra::atomic(s)}), InputError);
  CHECK_THROWS_AS(RefinementChain({FiniteAlgebra::atomic(s), ab_c}), InputError);
  CHECK_THROWS_AS(RefinementChain({}), InputError);
}

TEST_CASE("atom_density") {
  Example ex;
  CHECK(atom_density(ex.nu, ex.nu, ex.atomic).values() == Weights{1, 1, 1});
  CHECK(atom_density(ex.lambda, ex.nu, ex.atomic).values() == Weights{Rational(1, 2), 2, 1});

  const Measure nu0(ex.space, {Rational(1), Rational(0), Rational(1)});
  const Measure lam0(ex.space, {Rational(2), Rational(0), Rational(1)});
  CHECK(atom_density(lam0, nu0, ex.atomic).at_atom(1) == 0);

  const Measure bad(ex.space, {Rational(1), Rational(1, 3), Rational(1)});
  try {
    atom_density(bad, nu0, ex.atomic);
    FAIL("expected NotAbsolutelyContinuous");
  } catch (const NotAbsolutelyContinuous& e) {
    CHECK(e.label() == "b");
  }
}

TEST_CASE("integrate") {
  Example ex;
  const auto one = SimpleDensity::constant(ex.atomic, 1);
  CHECK(integrate(one, ex.nu, MeasurableSet::full(ex.space)) == ex.nu.total());
  CHECK(integrate(one, ex.nu, MeasurableSet(ex.space)) == 0);

  const auto f = atom_density(ex.lambda, ex.nu, ex.atomic);
  for (std::uint64_t m = 0; m < 8; ++m) {
    const auto s = MeasurableSet::from_mask(ex.space, m);
    CHECK(integrate(f, ex.nu, s) == ex.lambda(s));
  }

  const FiniteAlgebra ab_c(ex.space, {MeasurableSet::of(ex.space, {0, 1}), MeasurableSet::of(ex.space, {2})});
  const auto coarse = SimpleDensity::constant(ab_c, 1);
  CHECK_THROWS_AS(integrate(coarse, ex.nu, MeasurableSet::of(ex.space, {0})), PreconditionError);
}

TEST_CASE("level sets and bands") {
  const auto s = abc();
  const auto f = on_atoms(s, {Rational(1, 2), 2, 1});
  CHECK(level_set(f, 1).sorted_labels() == std::vector<std::string>{"b", "c"});
  CHECK(level_set(f, 0) == MeasurableSet::full(s));
  CHECK(level_set(f, 3).empty());
  CHECK(level_band(f, Rational(1, 2), Rational(3, 2)).sorted_labels() == std::vector<std::string>{"a", "c"});
  CHECK(level_band(f, 0, 100) == MeasurableSet::full(s));
  CHECK_THROWS_AS(level_band(f, 1, 1), PreconditionError);
  CHECK_THROWS_AS(level_band(f, 2, 1), PreconditionError);
}

TEST_CASE("level sets match Hahn sets up to a null set") {
  Example ex;
  const auto one = atom_density(ex.nu, ex.nu, ex.atomic);
  const auto c = hahn_level_correspondence(ex.nu, ex.nu, one, 1);
  CHECK(c.nu_mass == 0);
  CHECK(c.mu_mass == 0);

  const auto f = atom_density(ex.lambda, ex.nu, ex.atomic);
  const auto neg = hahn_level_correspondence(ex.lambda, ex.nu, f, -1);
  CHECK(neg.nu_mass == 0);
  CHECK(neg.difference.empty());

  Random rng(707);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    const Measure nu(space, v);
    const Measure lambda(space, rng.dominated_weights(v));
    const auto g = atom_density(lambda, nu, FiniteAlgebra::atomic(space));
    // Thresholds drawn from the density's own values hit the ties.
    const Rational a = rng.chance(50) ? g.value(rng.below(n)) : rng.rational(-2, 12, 4);
    const auto r = hahn_level_correspondence(lambda, nu, g, a);
    CHECK(r.nu_mass == 0);
    CHECK(r.mu_mass == 0);
  }
}

TEST_CASE("dyadic_approximation") {
  const auto s = abc();
  const auto one = on_atoms(s, {1, 1, 1});
  CHECK(dyadic_approximation(one, 1).values() == Weights{0, 0, 0});
  CHECK(dyadic_approximation(one, 2).values() == Weights{1, 1, 1});
  CHECK(dyadic_approximation(on_atoms(s, {Rational(3, 10), 0, 5}), 2).values() == Weights{Rational(1, 4), 0, 0});
  CHECK_THROWS_AS(dyadic_approximation(one, 0), PreconditionError);
}

TEST_CASE("approximation_report") {
  const auto s = make_space({"a", "b"});
  const Measure nu(s, {Rational(1, 2), Rational(1, 2)});
  const auto one = on_atoms(s, {1, 1});

  const auto r2 = approximation_report(one, nu, 2);
  CHECK(r2.l1_error == 0);
  CHECK(r2.tail_mass == 0);
  CHECK(r2.bound == Rational(1, 4));
  CHECK(r2.converged);

  const auto r1 = approximation_report(one, nu, 1);
  CHECK(r1.l1_error == 1);
  CHECK(r1.tail_mass == 1);
  CHECK(r1.bound == Rational(3, 2));
  CHECK_FALSE(r1.converged);
}

TEST_CASE("dyadic approximants increase to f within the bound") {
  Random rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    const Weights fv = [&] {
      Weights w;
      for (std::size_t i = 0; i < n; ++i) w.push_back(rng.rational(0, 40, 7));
      return w;
    }();
    const Measure nu(space, v);
    const auto f = on_atoms(space, fv);
    for (unsigned k = 1; k <= 8; ++k) {
      const auto fk = dyadic_approximation(f, k);
      const auto next = dyadic_approximation(f, k + 1);
      // Reference values, computed blockwise by hand.
      Rational l1 = 0, tail = 0;
      const Rational scale = Rational(1) / Rational(Integer(1) << k);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(fk.value(i) <= next.value(i));
        CHECK(next.value(i) <= fv[i]);
        if (fv[i] < k) {
          CHECK(fv[i] - fk.value(i) <= scale);
        } else {
          tail += fv[i] * v[i];
        }
        l1 += (fv[i] - fk.value(i)) * v[i];
      }
      const auto rep = approximation_report(f, nu, k);
      CHECK(rep.l1_error == l1);
      CHECK(rep.tail_mass == tail);
      CHECK(rep.bound == tail + nu.total() * scale);
      CHECK(rep.l1_error <= rep.bound);
    }
  }
}

TEST_CASE("Markov tail bound") {
  Random rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const auto space = space_of(n);
    const Measure nu(space, rng.nu_weights(n));
    const Measure lambda(space, rng.dominated_weights(nu.weights()));
    const auto f = atom_density(lambda, nu, FiniteAlgebra::atomic(space));
    const Rational k = rng.rational(1, 20, 4);
    CHECK(nu(level_set(f, k)) <= lambda.total() / k);
  }
}

TEST_CASE("rn_derive on the three-atom example") {
  Example ex;
  const FiniteAlgebra ab_c(ex.space, {MeasurableSet::of(ex.space, {0, 1}), MeasurableSet::of(ex.space, {2})});
  const auto d = rn_derive(ex.lambda, ex.nu, RefinementChain({ab_c, ex.atomic}));
  CHECK(d.density.values() == Weights{Rational(1, 2), 2, 1});
  REQUIRE(d.level_densities.size() == 2);
  CHECK(d.level_densities[0].values() == Weights{1, 1});
  REQUIRE(d.levels.size() == 2);
  CHECK(d.levels[0].l1_to_final == Rational(1, 2));
  CHECK(d.levels[1].l1_to_final == 0);
  CHECK_FALSE(d.degenerate);

  const auto same = rn_derive(ex.nu, ex.nu, RefinementChain({ab_c, ex.atomic}));
  CHECK(same.density.values() == Weights{1, 1, 1});
  for (const auto& lv : same.levels) CHECK(lv.l1_to_final == 0);
}

TEST_CASE("rn_derive flags a null reference measure") {
  const auto s = abc();
  const auto d = rn_derive(Measure::zero(s), Measure::zero(s), RefinementChain({FiniteAlgebra::atomic(s)}));
  CHECK(d.degenerate);
  CHECK(d.density.values() == Weights{0, 0, 0});
}

TEST_CASE("rn_derive rejects a measure that is not absolutely continuous") {
  const auto s = abc();
  const Measure nu(s, {Rational(1), Rational(0), Rational(1)});
  const Measure lambda(s, {Rational(1), Rational(1, 3), Rational(1)});
  CHECK_THROWS_AS(rn_derive(lambda, nu, RefinementChain({FiniteAlgebra::atomic(s)})), NotAbsolutelyContinuous);
}

TEST_CASE("rn_derive reproduces lambda and is a tower of block averages") {
  Random rng(1001);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    const Weights l = rng.dominated_weights(v);
    const Measure nu(space, v);
    const Measure lambda(space, l);
    const auto chain = random_chain(rng, space);
    const auto d = rn_derive(lambda, nu, chain);

    CHECK(d.density.values() == ratio(l, v));
    CHECK(verify_density(lambda, nu, d.density).max == 0);
    CHECK(d.levels.back().l1_to_final == 0);

    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      const auto& coarse = d.level_densities[k];
      const auto& fine = d.level_densities[k + 1];
      for (std::size_t b = 0; b < coarse.algebra().block_count(); ++b) {
        Rational mass = 0, weighted = 0;
        for (auto atom : coarse.algebra().blocks()[b].members()) {
          mass += v[atom];
          weighted += fine.at_atom(atom) * v[atom];
        }
        CHECK(coarse.value(b) == (mass == 0 ? Rational(0) : Rational(weighted / mass)));
      }
    }
  }
}

TEST_CASE("verify_density") {
  Example ex;
  const auto f = atom_density(ex.lambda, ex.nu, ex.atomic);
  const auto ok = verify_density(ex.lambda, ex.nu, f);
  CHECK(ok.max == 0);
  CHECK(ok.exhaustive);
  CHECK(ok.sets_examined == 8);
  CHECK(verify_density(ex.nu, ex.nu, SimpleDensity::constant(ex.atomic, 1)).max == 0);

  const auto off = on_atoms(ex.space, {Rational(1, 2), 3, 1});
  const auto bad = verify_density(ex.lambda, ex.nu, off);
  CHECK(bad.max == Rational(1, 4));
  CHECK(bad.witness.sorted_labels() == std::vector<std::string>{"b"});

  const FiniteAlgebra ab_c(ex.space, {MeasurableSet::of(ex.space, {0, 1}), MeasurableSet::of(ex.space, {2})});
  CHECK_THROWS_AS(verify_density(ex.lambda, ex.nu, SimpleDensity::constant(ab_c, 1)), PreconditionError);

  const auto big = space_of(21);
  const Measure c = Measure::counting(big);
  CHECK_THROWS_AS(verify_density(c, c, SimpleDensity::constant(FiniteAlgebra::atomic(big), 1)), SizeGuardError);
}

TEST_CASE("sampled verification is labelled and reproducible") {
  const auto big = space_of(24);
  Random rng(1102);
  const Weights v = rng.nu_weights(24);
  const Measure nu(big, v);
  const Measure lambda(big, rng.dominated_weights(v));
  const auto f = atom_density(lambda, nu, FiniteAlgebra::atomic(big));
  const auto a = verify_density_sampled(lambda, nu, f, 2000, 7);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.sets_examined == 2000);
  CHECK(a.max == 0);

  Weights off = f.values();
  const std::size_t hit = std::find_if(v.begin(), v.end(), [](const Rational& w) { return w > 0; }) - v.begin();
  off[hit] += 1;
  const auto b1 = verify_density_sampled(lambda, nu, SimpleDensity(FiniteAlgebra::atomic(big), off), 2000, 7);
  const auto b2 = verify_density_sampled(lambda, nu, SimpleDensity(FiniteAlgebra::atomic(big), off), 2000, 7);
  CHECK(b1.max > 0);
  CHECK(b1.max == b2.max);
  CHECK(b1.witness == b2.witness);
}
