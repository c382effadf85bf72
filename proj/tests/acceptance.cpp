// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance <path-to-rnforge-binary>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "rnforge/hyperreal.hpp"
#include "rnforge/measure.hpp"
#include "rnforge/oracle.hpp"
#include "rnforge/radon_nikodym.hpp"
#include "rnforge/riemann_stieltjes.hpp"
#include "support.hpp"

using namespace rnforge;
using namespace rnforge::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Instance {
  SpaceHandle space;
  Weights nu, lambda, mu;
};

// The shared instances for the first two criteria.
std::vector<Instance> instances(std::size_t count, std::uint64_t seed) {
  Random rng(seed);
  std::vector<Instance> out;
  while (out.size() < count) {
    const std::size_t n = 3 + rng.below(10);
    Instance in{space_of(n), rng.nu_weights(n), {}, rng.signed_weights(n)};
    in.lambda = rng.dominated_weights(in.nu);
    out.push_back(std::move(in));
  }
  return out;
}

Result ac1_identity() {
  Result r;
  const auto start = Clock::now();
  Random rng(11);
  std::uint64_t sets = 0;
  for (const auto& in : instances(200, 1)) {
    const Measure nu(in.space, in.nu);
    const Measure lambda(in.space, in.lambda);
    const auto d = rn_derive(lambda, nu, random_chain(rng, in.space));
    Weights f;
    for (std::size_t i = 0; i < in.space->size(); ++i) f.push_back(d.density.at_atom(i));
    // Independent sweep: lambda(S) against sum over S of f * nu.
    Weights fnu;
    for (std::size_t i = 0; i < f.size(); ++i) fnu.push_back(f[i] * in.nu[i]);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << f.size()); ++m, ++sets) {
      if (mask_sum(in.lambda, m) != mask_sum(fnu, m)) {
        r.require(false, "identity broken on mask " + std::to_string(m));
        break;
      }
    }
    r.require(verify_density(lambda, nu, d.density).max == 0, "verify_density reported a discrepancy");
  }
  const double t = seconds_since(start);
  r.require(t < 10, "over the 10 s budget");
  if (r.pass) r.detail = std::to_string(sets) + " subsets, zero discrepancy, " + std::to_string(t) + " s";
  return r;
}

Result ac2_hahn() {
  Result r;
  std::size_t maximizers = 0;
  for (const auto& in : instances(200, 1)) {
    const SignedMeasure mu(in.space, in.mu);
    const Measure nu(in.space, in.nu);
    const auto h = hahn_decomposition(mu, nu);
    const auto best = oracle::max_measure_subset(mu, nu);
    r.require(best.value == mu(h.positive), "Hahn value differs from the exhaustive maximum");
    r.require(best.set == h.positive, "Hahn set differs from the oracle's nu-maximal maximizer");
    r.require(brute_max(in.mu) == mu(h.positive), "Hahn value differs from brute force");
    for (const auto t : brute_maximizers(in.mu)) {
      ++maximizers;
      r.require(nu(h.positive) >= mask_sum(in.nu, t), "a maximizer outweighs M+ under nu");
    }
  }
  if (r.pass) r.detail = "200 instances, " + std::to_string(maximizers) + " maximizers checked";
  return r;
}

Result ac3_positive_subset() {
  Result r;
  Random rng(3);
  int done = 0;
  while (done < 100) {
    const std::size_t n = 3 + rng.below(10);
    const auto space = space_of(n);
    const Weights w = rng.signed_weights(n);
    const SignedMeasure mu(space, w);
    const auto p0 = MeasurableSet::from_mask(space, rng.mask(n));
    if (mu(p0) <= 0) continue;
    ++done;
    const auto p = construct_positive_subset(mu, p0);
    r.require(p.is_subset_of(p0) && mu(p) > 0, "P is not a positive-mass subset of P0");
    const auto mask = mask_of(p);
    for (std::uint64_t sub = mask;; sub = (sub - 1) & mask) {
      if (mask_sum(w, sub) < 0) r.require(false, "a subset of P has negative measure");
      if (sub == 0) break;
    }
  }
  if (r.pass) r.detail = "100 instances, every subset of P nonnegative";
  return r;
}

Result ac4_level_hahn() {
  Result r;
  Random rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(10);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    const Measure nu(space, v);
    const Measure lambda(space, rng.dominated_weights(v));
    const auto f = atom_density(lambda, nu, FiniteAlgebra::atomic(space));
    const Rational a = rng.chance(50) ? f.value(rng.below(n)) : rng.rational(-2, 12, 4);
    const auto c = hahn_level_correspondence(lambda, nu, f, a);
    r.require(c.nu_mass == 0, "nonzero nu-mass of the symmetric difference");
    r.require(c.mu_mass == 0, "nonzero (lambda - a nu)-mass of the symmetric difference");
  }
  if (r.pass) r.detail = "100 triples, both masses exactly 0";
  return r;
}

Result ac5_dyadic() {
  Result r;
  Random rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(10);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    Weights fv;
    for (std::size_t i = 0; i < n; ++i) fv.push_back(rng.rational(0, 40, 7));
    const Measure nu(space, v);
    const SimpleDensity f(FiniteAlgebra::atomic(space), fv);
    for (unsigned k = 1; k <= 8; ++k) {
      const auto fk = dyadic_approximation(f, k);
      const auto next = dyadic_approximation(f, k + 1);
      Rational l1 = 0, tail = 0;
      for (std::size_t i = 0; i < n; ++i) {
        r.require(fk.value(i) <= next.value(i) && next.value(i) <= fv[i], "approximants not monotone below f");
        l1 += abs(fv[i] - fk.value(i)) * v[i];
        if (fv[i] >= k) tail += fv[i] * v[i];
      }
      const Rational bound = tail + nu.total() / pow2(k);
      r.require(l1 <= bound, "L1 error above its bound");
      const auto rep = approximation_report(f, nu, k);
      r.require(rep.l1_error == l1 && rep.bound == bound, "report disagrees with the blockwise computation");
    }
  }
  if (r.pass) r.detail = "100 densities, n = 1..8";
  return r;
}

Result ac6_tower() {
  Result r;
  Random rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(10);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    const Measure nu(space, v);
    const Measure lambda(space, rng.dominated_weights(v));
    const auto chain = random_chain(rng, space);
    const auto d = rn_derive(lambda, nu, chain);
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      const auto& coarse = d.level_densities[k];
      const auto& fine = d.level_densities[k + 1];
      for (std::size_t b = 0; b < coarse.algebra().block_count(); ++b) {
        Rational mass = 0, weighted = 0;
        for (auto atom : coarse.algebra().blocks()[b].members()) {
          mass += v[atom];
          weighted += fine.at_atom(atom) * v[atom];
        }
        const Rational expected = mass == 0 ? Rational(0) : Rational(weighted / mass);
        r.require(coarse.value(b) == expected, "coarse density is not the nu-average of the finer one");
      }
    }
    r.require(d.levels.back().l1_to_final == 0, "nonzero L1 distance at the finest level");
  }
  if (r.pass) r.detail = "100 three-level chains";
  return r;
}

Result ac7_borel_cantelli() {
  Result r;
  Random rng(7);
  int done = 0, nontrivial = 0;
  while (done < 100) {
    const std::size_t n = 3 + rng.below(10);
    const auto space = space_of(n);
    const Weights v = rng.nu_weights(n);
    Rational m = -1;
    for (const auto& w : v) {
      if (w > 0 && (m < 0 || w < m)) m = w;
    }
    if (m < 0) continue;
    const Measure nu(space, v);
    std::vector<MeasurableSet> prefix, cycle;
    for (std::uint64_t i = rng.below(4); i > 0; --i) prefix.push_back(MeasurableSet::from_mask(space, rng.mask(n)));
    const std::uint64_t length = 1 + rng.below(4);
    while (cycle.size() < length) {
      const auto s = MeasurableSet::from_mask(space, rng.mask(n));
      if (nu(s) < m) cycle.push_back(s);
    }
    ++done;
    const auto limsup = limsup_sets(SetSequenceSpec(prefix, cycle));
    if (!limsup.empty()) ++nontrivial;
    r.require(nu(limsup) == 0, "limsup carries positive nu-mass");
  }
  if (r.pass) r.detail = "100 specs (" + std::to_string(nontrivial) + " with nonempty limsup), nu(limsup) = 0";
  return r;
}

Result ac8_hyperreal() {
  using namespace rnforge::hyper;
  Result r;
  const auto start = Clock::now();
  std::ostringstream detail;

  const auto omega = HyperReal::omega();
  const auto one = HyperReal::constant(1);
  const Rational nano(1, 1000000000);
  const auto st = standard_part(one + one / omega, nano, 10000000000ull);
  r.require(st && *st == 1, "st(1 + 1/omega) is not 1 at 1e-9");

  const Rational micro(1, 1000000);
  const Index points = Index{1} << 16;
  const RealRule id = [](const Rational& x) { return x; };
  const RealRule square = [](const Rational& x) { return Rational(x * x); };
  const auto dyadic = PartitionSequence::uniform(2);
  const auto half = rs_integral(id, id, dyadic, micro, points);
  r.require(half && abs(*half - Rational(1, 2)) < micro, "integral of x dx not within 1e-6 of 1/2");
  const auto third = rs_integral(square, id, dyadic, micro, points);
  r.require(third && abs(*third - Rational(1, 3)) < micro, "integral of x^2 dx not within 1e-6 of 1/3");

  const auto agree = partition_agreement(id, id, dyadic, PartitionSequence::uniform(3), micro, Index{1} << 14);
  r.require(agree.verdict.outcome == Outcome::holds, "dyadic and thirds sums not certified to agree");

  const Generator alternating = [](Index n) { return Rational(n % 2 == 0 ? 1 : -1); };
  const HyperReal alt(alternating);
  const auto zero = HyperReal::constant(0);
  int horizons = 0;
  for (Index h = 1; h <= 10000000000ull; h = h * 3 + 1, ++horizons) {
    r.require(infinitely_close(alt, zero, h).outcome != Outcome::holds, "(-1)^n certified close to 0");
    r.require(check_limit(alternating, 0, {h}).outcome == Outcome::unknown, "(-1)^n limit verdict not unknown");
  }

  const double t = seconds_since(start);
  r.require(t < 5, "over the 5 s budget");
  if (r.pass) {
    detail << "st = 1, integrals " << to_string(*half) << " and " << approx(*third) << ", agreement holds, "
           << "(-1)^n unknown at " << horizons << " horizons, " << t << " s";
    r.detail = detail.str();
  }
  return r;
}

struct Run {
  int code = -1;
  std::string out;
};

Run execute(const std::string& command) {
  Run run;
  FILE* pipe = ::popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return run;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) run.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

Result ac9_cli(const std::string& binary) {
  Result r;
  const fs::path dir = fs::temp_directory_path() / ("rnforge_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto emit = execute(quoted(binary) + " emit-examples " + quoted(dir.string()));
  r.require(emit.code == 0, "emit-examples failed");

  const std::string derive = quoted(binary) + " rn-derive " + quoted((dir / "three_atom.json").string()) +
                             " --num lam --den nu --chain c1 --verify";
  const auto first = execute(derive);
  const auto second = execute(derive);
  r.require(first.code == 0, "rn-derive exit code " + std::to_string(first.code));
  try {
    auto a = nlohmann::json::parse(first.out);
    auto b = nlohmann::json::parse(second.out);
    const nlohmann::json expected = {{"a", "1/2"}, {"b", "2/1"}, {"c", "1/1"}};
    r.require(a["results"]["density"] == expected, "density is not (1/2, 2, 1)");
    r.require(a["verification"]["density"]["exact"] == true, "verification not exact");
    a.erase("timing");
    b.erase("timing");
    r.require(a.dump(2) == b.dump(2), "reports differ between runs");
  } catch (const nlohmann::json::exception& e) {
    r.require(false, std::string("unparseable report: ") + e.what());
  }
  const auto stable = execute(quoted(binary) + " --no-timing rn-derive " + quoted((dir / "three_atom.json").string()) +
                              " --num lam --den nu --chain c1 --verify");
  r.require(stable.out == execute(quoted(binary) + " --no-timing rn-derive " +
                                  quoted((dir / "three_atom.json").string()) + " --num lam --den nu --chain c1 --verify")
                             .out,
            "untimed reports are not byte-identical");

  const auto ac = execute(quoted(binary) + " check-ac " + quoted((dir / "null_atom.json").string()) +
                          " --num lam --den nu");
  r.require(ac.code == 1, "check-ac on the null-atom example exited " + std::to_string(ac.code));
  try {
    r.require(nlohmann::json::parse(ac.out)["results"]["witness"] == "b", "witness is not \"b\"");
  } catch (const nlohmann::json::exception& e) {
    r.require(false, std::string("unparseable report: ") + e.what());
  }
  fs::remove_all(dir);
  if (r.pass) r.detail = "density (1/2, 2, 1), exit 0, byte-stable; null-atom example exit 1 with witness b";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-rnforge>\n";
    return 2;
  }
  const std::string binary = argv[1];
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"AC1 Radon-Nikodym identity on 200 random spaces", ac1_identity},
      {"AC2 Hahn optimality and nu-maximality", ac2_hahn},
      {"AC3 positive subsets are positive", ac3_positive_subset},
      {"AC4 level sets match Hahn sets up to null sets", ac4_level_hahn},
      {"AC5 dyadic L1 bound and monotone approximants", ac5_dyadic},
      {"AC6 tower property along refinement chains", ac6_tower},
      {"AC7 null limsup for small recurring sets", ac7_borel_cantelli},
      {"AC8 hyperreal standard parts, integrals and verdicts", ac8_hyperreal},
      {"AC9 command-line end to end", [&] { return ac9_cli(binary); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (!r.pass) ++failures;
    std::cout << (r.pass ? "PASS " : "FAIL ") << name << " -- " << r.detail << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
