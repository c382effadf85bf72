#include "rnforge/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "rnforge/error.hpp"
#include "rnforge/hyperreal.hpp"
#include "rnforge/measure.hpp"
#include "rnforge/oracle.hpp"
#include "rnforge/radon_nikodym.hpp"
#include "rnforge/riemann_stieltjes.hpp"

namespace rnforge::cli {
namespace {

using nlohmann::ordered_json;

// Thrown by a command to finish with exit code 1 after its report is built.
struct VerificationFailed {
  std::string message;
};

ordered_json labels_json(const MeasurableSet& s) { return s.sorted_labels(); }

ordered_json weights_json(const SignedMeasure& mu) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < mu.weights().size(); ++i) out[mu.space()->label(i)] = to_string(mu.weight(i));
  return out;
}

ordered_json density_json(const SimpleDensity& f) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < f.space()->size(); ++i) out[f.space()->label(i)] = to_string(f.at_atom(i));
  return out;
}

ordered_json optional_rational(const std::optional<Rational>& q) {
  return q ? ordered_json(to_string(*q)) : ordered_json(nullptr);
}

ordered_json verdict_json(const hyper::Verdict& v) {
  ordered_json out;
  out["verdict"] = hyper::to_string(v.outcome);
  out["window"] = v.window ? ordered_json{v.window->first, v.window->second} : ordered_json(nullptr);
  out["points"] = v.points ? ordered_json{to_string(v.points->first), to_string(v.points->second)}
                           : ordered_json(nullptr);
  out["reason"] = v.reason;
  return out;
}

std::uint64_t sampling_seed() {
  const char* raw = std::getenv(kSeedVariable);
  if (!raw || !*raw) return 0;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return seed;
  } catch (const std::exception&) {
    throw InputError(std::string(kSeedVariable) + " must be a nonnegative integer");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  std::string digest;
  Workspace workspace;
};

Loaded load(const std::string& path) {
  const std::string text = read_file(path);
  Workspace ws(parse_space_file(text));
  return {sha256_hex(text), std::move(ws)};
}

// Verification block comparing a density against lambda on every subset
// (or on sampled subsets beyond the exhaustive limit).
ordered_json verify_block(const Measure& lambda, const Measure& nu, const SimpleDensity& f, bool& ok) {
  ordered_json v;
  const auto oracle_density = oracle::direct_density(lambda, nu);
  const bool matches = oracle_density.values() == f.values();
  Discrepancy d = f.space()->size() <= kExhaustiveAtomLimit
                      ? verify_density(lambda, nu, f)
                      : verify_density_sampled(lambda, nu, f, kSampledSubsets, sampling_seed());
  v["mode"] = d.exhaustive ? "exhaustive" : "sampled";
  if (!d.exhaustive) v["seed"] = sampling_seed();
  v["sets_examined"] = d.sets_examined;
  v["max_discrepancy"] = to_string(d.max);
  v["witness"] = d.max == 0 ? ordered_json(nullptr) : labels_json(d.witness);
  v["oracle_density_matches"] = matches;
  v["exact"] = d.max == 0 && matches;
  ok = ok && d.max == 0 && matches;
  return v;
}

// --- commands ----------------------------------------------------------------

struct Options {
  std::string input;
  std::string measure;
  std::string tiebreak;
  std::string num;
  std::string den;
  std::string chain;
  std::string sequence;
  std::string at;
  std::string band;
  std::string directory;
  std::string demo;
  std::string tolerance;
  unsigned levels = 0;
  unsigned grid = 8;
  std::uint64_t horizon = 0;
  bool verify = false;
  bool no_timing = false;
};

void cmd_hahn(const Options& o, ordered_json& r, ordered_json& verification) {
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const SignedMeasure mu = ws.signed_measure(o.measure);
  const Measure nu = o.tiebreak.empty() ? Measure::counting(ws.space()) : ws.measure(o.tiebreak);
  const auto hahn = hahn_decomposition(mu, nu);

  r["measure"] = o.measure;
  r["tiebreak"] = o.tiebreak.empty() ? ordered_json(nullptr) : ordered_json(o.tiebreak);
  r["positive"] = labels_json(hahn.positive);
  r["negative"] = labels_json(hahn.negative);
  r["value"] = to_string(mu(hahn.positive));
  if (!o.tiebreak.empty()) r["tiebreak_mass"] = to_string(nu(hahn.positive));

  if (ws.space()->size() <= oracle::kMaxAtoms) {
    const auto best = oracle::max_measure_subset(mu, o.tiebreak.empty() ? std::nullopt : std::optional<Measure>(nu));
    const bool value_ok = best.value == mu(hahn.positive);
    const bool set_ok = best.set == hahn.positive;
    verification["oracle"] = "exhaustive";
    verification["value_matches"] = value_ok;
    verification["set_matches"] = set_ok;
    if (!value_ok || !set_ok) {
      r["oracle_positive"] = labels_json(best.set);
      r["oracle_value"] = to_string(best.value);
      throw VerificationFailed{"Hahn decomposition disagrees with the exhaustive oracle"};
    }
  } else {
    verification["oracle"] = "skipped: space exceeds exhaustive limit";
  }
}

void cmd_jordan(const Options& o, ordered_json& r, ordered_json& verification) {
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const SignedMeasure mu = ws.signed_measure(o.measure);
  const auto hahn = hahn_decomposition(mu, Measure::counting(ws.space()));
  const auto jordan = jordan_decomposition(mu, Measure::counting(ws.space()));

  r["measure"] = o.measure;
  r["positive_set"] = labels_json(hahn.positive);
  r["negative_set"] = labels_json(hahn.negative);
  r["positive"] = weights_json(jordan.positive);
  r["negative"] = weights_json(jordan.negative);

  bool reconstructs = true;
  for (std::size_t i = 0; i < mu.weights().size(); ++i) {
    if (jordan.positive.weight(i) - jordan.negative.weight(i) != mu.weight(i)) reconstructs = false;
  }
  const bool singular = jordan.positive(hahn.negative) == 0 && jordan.negative(hahn.positive) == 0;
  verification["reconstructs"] = reconstructs;
  verification["mutually_singular"] = singular;
  if (!reconstructs || !singular) throw VerificationFailed{"Jordan decomposition is inconsistent"};
}

void cmd_check_ac(const Options& o, ordered_json& r, ordered_json& verification) {
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const Measure lambda = ws.measure(o.num);
  const Measure nu = ws.measure(o.den);
  const auto ac = is_absolutely_continuous(lambda, nu);

  r["num"] = o.num;
  r["den"] = o.den;
  r["absolutely_continuous"] = ac.holds;
  r["witness"] = ac.witness ? ordered_json(ws.space()->label(*ac.witness)) : ordered_json(nullptr);
  if (ws.space()->size() <= oracle::kMaxAtoms) {
    verification["oracle"] = "exhaustive";
    verification["oracle_matches"] = oracle::exhaustive_absolute_continuity(lambda, nu) == ac.holds;
  } else {
    verification["oracle"] = "skipped: space exceeds exhaustive limit";
  }
  if (!ac.holds) {
    throw VerificationFailed{"not absolutely continuous; witness atom \"" + ws.space()->label(*ac.witness) + "\""};
  }
}

ordered_json derivation_json(const RnDerivation& d) {
  ordered_json levels = ordered_json::array();
  for (const auto& lv : d.levels) {
    levels.push_back({{"level", lv.level}, {"blocks", lv.block_count}, {"l1_to_final", to_string(lv.l1_to_final)}});
  }
  return ordered_json{{"density", density_json(d.density)}, {"levels", levels}, {"degenerate", d.degenerate}};
}

void cmd_rn_derive(const Options& o, ordered_json& r, ordered_json& verification) {
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const SignedMeasure lambda = ws.signed_measure(o.num);
  const Measure nu = ws.measure(o.den);
  const RefinementChain chain = ws.chain(o.chain);

  r["num"] = o.num;
  r["den"] = o.den;
  r["chain"] = o.chain;

  const bool is_signed = std::any_of(lambda.weights().begin(), lambda.weights().end(),
                                     [](const Rational& w) { return w < 0; });
  std::vector<std::pair<std::string, Measure>> parts;
  if (is_signed) {
    auto jordan = jordan_decomposition(lambda, nu);
    parts.emplace_back("positive", std::move(jordan.positive));
    parts.emplace_back("negative", std::move(jordan.negative));
  } else {
    parts.emplace_back("", Measure(lambda));
  }
  r["signed"] = is_signed;

  // Absolute continuity first so that a failure reports its witness.
  for (const auto& [part, m] : parts) {
    const auto ac = is_absolutely_continuous(m, nu);
    if (!ac.holds) {
      r["absolutely_continuous"] = false;
      r["witness"] = ws.space()->label(*ac.witness);
      throw VerificationFailed{"not absolutely continuous; witness atom \"" + ws.space()->label(*ac.witness) + "\""};
    }
  }
  r["absolutely_continuous"] = true;

  bool ok = true;
  for (const auto& [part, m] : parts) {
    const auto d = rn_derive(m, nu, chain);
    const std::string key = part.empty() ? "density" : "density_" + part;
    const ordered_json body = derivation_json(d);
    r[key] = body["density"];
    r[part.empty() ? "levels" : "levels_" + part] = body["levels"];
    r[part.empty() ? "degenerate" : "degenerate_" + part] = d.degenerate;
    if (o.verify) verification[part.empty() ? "density" : key] = verify_block(m, nu, d.density, ok);
  }
  if (!o.verify) verification["skipped"] = "pass --verify to check the identity";
  if (!ok) throw VerificationFailed{"density does not reproduce lambda on every set"};
}

void cmd_approx(const Options& o, ordered_json& r, ordered_json& verification) {
  if (o.levels == 0) throw InputError("--levels must be at least 1");
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const Measure lambda = ws.measure(o.num);
  const Measure nu = ws.measure(o.den);
  const auto f = atom_density(lambda, nu, FiniteAlgebra::atomic(ws.space()));

  r["num"] = o.num;
  r["den"] = o.den;
  r["density"] = density_json(f);
  ordered_json reports = ordered_json::array();
  bool within = true;
  bool monotone = true;
  std::optional<SimpleDensity> previous;
  for (unsigned n = 1; n <= o.levels; ++n) {
    const auto rep = approximation_report(f, nu, n);
    const auto fn = dyadic_approximation(f, n);
    reports.push_back({{"level", n},
                       {"approximant", density_json(fn)},
                       {"l1_error", to_string(rep.l1_error)},
                       {"tail_mass", to_string(rep.tail_mass)},
                       {"bound", to_string(rep.bound)},
                       {"converged", rep.converged}});
    within = within && rep.l1_error <= rep.bound;
    for (std::size_t i = 0; i < fn.values().size(); ++i) {
      if (fn.value(i) > f.value(i) || (previous && previous->value(i) > fn.value(i))) monotone = false;
    }
    previous = fn;
  }
  r["reports"] = reports;
  verification["l1_within_bound"] = within;
  verification["monotone_approximants"] = monotone;
  if (!within || !monotone) throw VerificationFailed{"dyadic approximation violates its bound"};
}

void cmd_levelset(const Options& o, ordered_json& r, ordered_json& verification) {
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const Measure lambda = ws.measure(o.num);
  const Measure nu = ws.measure(o.den);
  const Rational a = parse_rational(o.at);
  const auto f = atom_density(lambda, nu, FiniteAlgebra::atomic(ws.space()));

  r["num"] = o.num;
  r["den"] = o.den;
  r["at"] = to_string(a);
  if (!o.band.empty()) {
    const Rational b = parse_rational(o.band);
    if (!(a < b)) throw InputError("--band must be greater than --at");
    r["band"] = to_string(b);
    r["set"] = labels_json(level_band(f, a, b));
  } else {
    r["band"] = nullptr;
    r["set"] = labels_json(level_set(f, a));
  }
  const auto c = hahn_level_correspondence(lambda, nu, f, a);
  r["hahn_difference"] = labels_json(c.difference);
  r["hahn_difference_nu"] = to_string(c.nu_mass);
  r["hahn_difference_mu"] = to_string(c.mu_mass);
  const bool null_difference = c.nu_mass == 0 && c.mu_mass == 0;
  verification["null_difference"] = null_difference;
  if (!null_difference) throw VerificationFailed{"level set and Hahn set differ on a non-null set"};
}

void cmd_limsup(const Options& o, ordered_json& r, ordered_json&) {
  const auto loaded = load(o.input);
  const auto& ws = loaded.workspace;
  const auto spec = ws.sequence(o.sequence);
  const auto limsup = limsup_sets(spec);
  r["sequence"] = o.sequence;
  r["limsup"] = labels_json(limsup);
  ordered_json masses = ordered_json::object();
  for (const auto& [name, _] : ws.file().measures) masses[name] = to_string(ws.signed_measure(name)(limsup));
  r["masses"] = masses;
}

ordered_json demo_st(const Rational& tol, hyper::Index horizon) {
  using hyper::HyperReal;
  const HyperReal omega = HyperReal::omega();
  const HyperReal one = HyperReal::constant(1);
  const HyperReal alternating([](hyper::Index n) { return Rational(n % 2 == 0 ? 1 : -1); });
  const std::vector<std::pair<std::string, HyperReal>> items = {
      {"omega", omega}, {"1/omega", one / omega}, {"1 + 1/omega", one + one / omega}, {"(-1)^n", alternating}};
  ordered_json out = ordered_json::array();
  for (const auto& [name, x] : items) {
    const auto m = hyper::classify(x, horizon);
    ordered_json item{{"expression", name}, {"classification", hyper::to_string(m)}};
    if (m == hyper::Magnitude::infinite) {
      item["standard_part"] = nullptr;
      item["note"] = "infinite: no standard part";
    } else {
      item["standard_part"] = optional_rational(hyper::standard_part(x, tol, horizon));
    }
    out.push_back(std::move(item));
  }
  return out;
}

ordered_json demo_limit(hyper::Index horizon) {
  using hyper::HyperReal;
  hyper::Hints h;
  h.monotone = hyper::Monotonicity::decreasing;
  h.limit = hyper::Limit::finite(0);
  const HyperReal harmonic([](hyper::Index n) { return Rational(1 / from_index(n + 1)); }, h);
  const hyper::Generator alternating = [](hyper::Index n) { return Rational(n % 2 == 0 ? 1 : -1); };
  ordered_json out = ordered_json::array();
  auto add = [&](const std::string& seq, const Rational& a, const hyper::Verdict& v) {
    ordered_json item{{"sequence", seq}, {"target", to_string(a)}};
    item.update(verdict_json(v));
    out.push_back(std::move(item));
  };
  add("1/(n+1)", 0, hyper::check_limit(harmonic, 0, {horizon}));
  add("1/(n+1)", 1, hyper::check_limit(harmonic, 1, {horizon}));
  add("(-1)^n", 0, hyper::check_limit(alternating, 0, {horizon}));
  return out;
}

ordered_json demo_ucont(unsigned grid, hyper::Index horizon) {
  const hyper::RealRule square = [](const Rational& x) { return Rational(x * x); };
  const hyper::RealRule step = [](const Rational& x) { return Rational(x >= Rational(1, 2) ? 1 : 0); };
  const hyper::DeltaModulus half = [](const Rational& eps) { return Rational(eps / 2); };
  ordered_json out = ordered_json::array();
  auto add = [&](const std::string& f, const std::string& modulus, const hyper::Verdict& v) {
    ordered_json item{{"f", f}, {"modulus", modulus.empty() ? ordered_json(nullptr) : ordered_json(modulus)}};
    item.update(verdict_json(v));
    out.push_back(std::move(item));
  };
  add("x^2", "eps/2", hyper::check_uniform_continuity(square, grid, horizon, half));
  add("step at 1/2", "", hyper::check_uniform_continuity(step, grid, horizon));
  add("x^2", "", hyper::check_uniform_continuity(square, grid, horizon));
  return out;
}

ordered_json demo_rs(const Rational& tol, hyper::Index horizon, bool& ok) {
  using hyper::PartitionSequence;
  const hyper::RealRule id = [](const Rational& x) { return x; };
  const hyper::RealRule square = [](const Rational& x) { return Rational(x * x); };
  const hyper::RealRule cube = [](const Rational& x) { return Rational(x * x * x); };
  const hyper::RealRule one = [](const Rational&) { return Rational(1); };
  const auto dyadic = PartitionSequence::uniform(2);
  const auto thirds = PartitionSequence::uniform(3);

  ordered_json integrals = ordered_json::array();
  auto add = [&](const std::string& f, const std::string& g, const hyper::RealRule& fr, const hyper::RealRule& gr,
                 const Rational& closed_form) {
    const auto est = hyper::rs_estimate(fr, gr, dyadic, tol, horizon);
    ordered_json item{{"f", f},
                      {"g", g},
                      {"partitions", dyadic.name()},
                      {"levels", est.levels.size()},
                      {"value", optional_rational(est.value)},
                      {"oscillation", optional_rational(est.oscillation)},
                      {"closed_form", to_string(closed_form)}};
    if (est.value) {
      const bool agrees = abs(*est.value - closed_form) < tol;
      item["within_tolerance"] = agrees;
      ok = ok && agrees;
    } else {
      item["within_tolerance"] = nullptr;
    }
    integrals.push_back(std::move(item));
  };
  add("x", "x", id, id, Rational(1, 2));
  add("x^2", "x", square, id, Rational(1, 3));
  add("1", "x^3", one, cube, Rational(1));

  const auto agreement = hyper::partition_agreement(id, id, dyadic, thirds, tol, horizon);
  ordered_json agree{{"f", "x"}, {"g", "x"}, {"first", dyadic.name()}, {"second", thirds.name()},
                     {"first_value", optional_rational(agreement.first_value)},
                     {"second_value", optional_rational(agreement.second_value)}};
  agree.update(verdict_json(agreement.verdict));
  return ordered_json{{"integrals", integrals}, {"agreement", agree}};
}

void cmd_hyper_demo(const Options& o, ordered_json& r, ordered_json& verification) {
  if (o.horizon == 0) throw InputError("--horizon must be at least 1");
  const Rational tol = parse_rational_or_decimal(o.tolerance);
  if (tol <= 0) throw InputError("--tolerance must be positive");
  r["demo"] = o.demo;
  r["horizon"] = o.horizon;
  r["tolerance"] = to_string(tol);
  if (o.demo == "st") {
    r["items"] = demo_st(tol, o.horizon);
  } else if (o.demo == "limit") {
    r["items"] = demo_limit(o.horizon);
  } else if (o.demo == "ucont") {
    r["grid"] = o.grid;
    r["items"] = demo_ucont(o.grid, o.horizon);
  } else {
    bool ok = true;
    r["items"] = demo_rs(tol, o.horizon, ok);
    verification["closed_forms_agree"] = ok;
    if (!ok) throw VerificationFailed{"a certified integral disagrees with its closed form"};
  }
}

std::string command_echo(const std::vector<std::string>& args) {
  std::string out = "rnforge";
  for (const auto& a : args) out += " " + a;
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Radon-Nikodym derivatives on finite measure spaces", "rnforge"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--no-timing", o.no_timing, "Omit the timing block from reports");

  auto with_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Measure-space JSON file")->required();
  };
  auto* hahn = app.add_subcommand("hahn", "Hahn decomposition of a signed measure");
  with_input(hahn);
  hahn->add_option("--measure", o.measure)->required();
  hahn->add_option("--tiebreak", o.tiebreak, "Measure maximized among the maximizers");

  auto* jordan = app.add_subcommand("jordan", "Jordan decomposition of a signed measure");
  with_input(jordan);
  jordan->add_option("--measure", o.measure)->required();

  auto* check_ac = app.add_subcommand("check-ac", "Absolute continuity of --num with respect to --den");
  with_input(check_ac);
  check_ac->add_option("--num", o.num)->required();
  check_ac->add_option("--den", o.den)->required();

  auto* derive = app.add_subcommand("rn-derive", "Radon-Nikodym derivative along a refinement chain");
  with_input(derive);
  derive->add_option("--num", o.num)->required();
  derive->add_option("--den", o.den)->required();
  derive->add_option("--chain", o.chain)->required();
  derive->add_flag("--verify", o.verify, "Check the identity on every subset");

  auto* approx = app.add_subcommand("approx", "Dyadic approximants and their L1 bounds");
  with_input(approx);
  approx->add_option("--num", o.num)->required();
  approx->add_option("--den", o.den)->required();
  approx->add_option("--levels", o.levels)->required();

  auto* levelset = app.add_subcommand("levelset", "Level set {f >= a} or band {a <= f < b}");
  with_input(levelset);
  levelset->add_option("--num", o.num)->required();
  levelset->add_option("--den", o.den)->required();
  levelset->add_option("--at", o.at, "Threshold a as p/q")->required();
  levelset->add_option("--band", o.band, "Upper threshold b as p/q");

  auto* limsup = app.add_subcommand("limsup", "limsup of an eventually periodic set sequence");
  with_input(limsup);
  limsup->add_option("--sequence", o.sequence)->required();

  auto* demo = app.add_subcommand("hyper-demo", "Hyperreal demonstrations");
  demo->add_option("demo", o.demo)->required()->check(CLI::IsMember({"st", "limit", "ucont", "rs"}));
  demo->add_option("--horizon", o.horizon)->required();
  demo->add_option("--tolerance", o.tolerance)->required();
  demo->add_option("--grid", o.grid, "Base grid for ucont")->check(CLI::Range(2u, 1000000u));

  auto* emit = app.add_subcommand("emit-examples", "Write the bundled example files");
  emit->add_option("directory", o.directory)->required();

  std::vector<const char*> argv{"rnforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kExitOk : kExitInputError;
  }

  const auto start = std::chrono::steady_clock::now();
  ordered_json report;
  report["command"] = command_echo(args);
  ordered_json verification = ordered_json::object();
  int code = kExitOk;
  try {
    if (emit->parsed()) {
      ordered_json files = ordered_json::array();
      for (const auto& p : emit_example_files(o.directory)) files.push_back(p.filename().string());
      report["results"] = ordered_json{{"directory", o.directory}, {"files", files}};
    } else {
      if (!o.input.empty()) {
        const std::string digest = sha256_hex(read_file(o.input));
        report["input"] = {{"path", o.input}, {"sha256", digest}};
      }
      ordered_json results;
      try {
        if (hahn->parsed()) cmd_hahn(o, results, verification);
        if (jordan->parsed()) cmd_jordan(o, results, verification);
        if (check_ac->parsed()) cmd_check_ac(o, results, verification);
        if (derive->parsed()) cmd_rn_derive(o, results, verification);
        if (approx->parsed()) cmd_approx(o, results, verification);
        if (levelset->parsed()) cmd_levelset(o, results, verification);
        if (limsup->parsed()) cmd_limsup(o, results, verification);
        if (demo->parsed()) cmd_hyper_demo(o, results, verification);
      } catch (const VerificationFailed& failure) {
        err << "verification failed: " << failure.message << "\n";
        verification["failure"] = failure.message;
        code = kExitVerificationFailed;
      }
      report["results"] = results;
    }
  } catch (const NotAbsolutelyContinuous& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  report["verification"] = verification;
  if (!o.no_timing) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["timing"] = {{"elapsed_us", std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count()}};
  }
  out << report.dump(2) << "\n";
  return code;
}

}  // namespace rnforge::cli
