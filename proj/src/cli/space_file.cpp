#include "rnforge/cli/space_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rnforge/error.hpp"

namespace rnforge::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// 1-based line of the first occurrence of "needle" (quoted), 0 if absent.
std::size_t line_of(std::string_view text, const std::string& needle) {
  const std::string quoted = "\"" + needle + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what, const std::string& anchor) const {
    const auto line = line_of(text_, anchor);
    std::string message = what;
    if (line) message = "line " + std::to_string(line) + ": " + what;
    throw InputError(message);
  }

  LabelSet labels(const json& node, const std::string& where) const {
    if (!node.is_array()) fail(where + " must be a list of labels", where);
    LabelSet out;
    for (const auto& item : node) {
      if (!item.is_string()) fail(where + " must contain only label strings", where);
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  std::vector<LabelSet> label_sets(const json& node, const std::string& where) const {
    if (!node.is_array()) fail(where + " must be a list of label lists", where);
    std::vector<LabelSet> out;
    for (const auto& item : node) out.push_back(labels(item, where));
    return out;
  }

  void check_known(const LabelSet& labels, const std::set<std::string>& known, const std::string& where) const {
    for (const auto& l : labels) {
      if (!known.count(l)) fail("unknown atom label \"" + l + "\" in " + where, l);
    }
  }

  SpaceFile parse() const {
    json root;
    try {
      root = json::parse(text_);
    } catch (const json::parse_error& e) {
      throw InputError(e.what());
    }
    if (!root.is_object()) throw InputError("line 1: space file must be a JSON object");
    for (const auto& [key, _] : root.items()) {
      if (key != "atoms" && key != "measures" && key != "chains" && key != "sequences") {
        fail("unknown field \"" + key + "\"", key);
      }
    }

    SpaceFile file;
    if (!root.contains("atoms")) throw InputError("missing field \"atoms\"");
    file.atoms = labels(root["atoms"], "atoms");
    std::set<std::string> known;
    for (const auto& a : file.atoms) {
      if (a.empty()) fail("atom labels must be nonempty", "atoms");
      if (!known.insert(a).second) fail("duplicate atom label \"" + a + "\"", a);
    }
    if (known.empty()) fail("atoms must not be empty", "atoms");

    if (root.contains("measures")) {
      const auto& measures = root["measures"];
      if (!measures.is_object()) fail("measures must be an object", "measures");
      for (const auto& [name, weights] : measures.items()) {
        if (!weights.is_object()) fail("measure \"" + name + "\" must map labels to \"p/q\" strings", name);
        auto& target = file.measures[name];
        for (const auto& [label, value] : weights.items()) {
          if (!known.count(label)) fail("unknown atom label \"" + label + "\" in measure \"" + name + "\"", label);
          if (!value.is_string()) {
            fail("weight of \"" + label + "\" in measure \"" + name + "\" must be a \"p/q\" string", name);
          }
          try {
            target[label] = parse_rational(value.get<std::string>());
          } catch (const InputError& e) {
            fail(std::string(e.what()) + " in measure \"" + name + "\"", value.get<std::string>());
          }
        }
      }
    }

    if (root.contains("chains")) {
      const auto& chains = root["chains"];
      if (!chains.is_object()) fail("chains must be an object", "chains");
      for (const auto& [name, levels] : chains.items()) {
        if (!levels.is_array()) fail("chain \"" + name + "\" must be a list of partitions", name);
        auto& target = file.chains[name];
        for (const auto& level : levels) {
          auto blocks = label_sets(level, "chain \"" + name + "\"");
          for (const auto& b : blocks) check_known(b, known, "chain \"" + name + "\"");
          target.push_back(std::move(blocks));
        }
      }
    }

    if (root.contains("sequences")) {
      const auto& sequences = root["sequences"];
      if (!sequences.is_object()) fail("sequences must be an object", "sequences");
      for (const auto& [name, entry] : sequences.items()) {
        if (!entry.is_object() || !entry.contains("cycle")) {
          fail("sequence \"" + name + "\" needs a \"cycle\"", name);
        }
        SequenceEntry seq;
        if (entry.contains("prefix")) seq.prefix = label_sets(entry["prefix"], "sequence \"" + name + "\"");
        seq.cycle = label_sets(entry["cycle"], "sequence \"" + name + "\"");
        for (const auto& s : seq.prefix) check_known(s, known, "sequence \"" + name + "\"");
        for (const auto& s : seq.cycle) check_known(s, known, "sequence \"" + name + "\"");
        file.sequences[name] = std::move(seq);
      }
    }
    return file;
  }

 private:
  std::string_view text_;
};

}  // namespace

SpaceFile parse_space_file(std::string_view text) { return Parser(text).parse(); }

SpaceFile load_space_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_space_file(buf.str());
}

std::string emit_space_file(const SpaceFile& file) {
  ordered_json root;
  root["atoms"] = file.atoms;
  ordered_json measures = ordered_json::object();
  for (const auto& [name, weights] : file.measures) {
    ordered_json m = ordered_json::object();
    for (const auto& atom : file.atoms) {
      if (auto it = weights.find(atom); it != weights.end()) m[atom] = to_string(it->second);
    }
    measures[name] = std::move(m);
  }
  root["measures"] = std::move(measures);
  if (!file.chains.empty()) {
    ordered_json chains = ordered_json::object();
    for (const auto& [name, levels] : file.chains) chains[name] = levels;
    root["chains"] = std::move(chains);
  }
  if (!file.sequences.empty()) {
    ordered_json sequences = ordered_json::object();
    for (const auto& [name, seq] : file.sequences) {
      sequences[name] = ordered_json{{"prefix", seq.prefix}, {"cycle", seq.cycle}};
    }
    root["sequences"] = std::move(sequences);
  }
  return root.dump(2) + "\n";
}

Workspace::Workspace(SpaceFile file) : file_(std::move(file)), space_(make_space(file_.atoms)) {}

SignedMeasure Workspace::signed_measure(const std::string& name) const {
  const auto it = file_.measures.find(name);
  if (it == file_.measures.end()) throw InputError("no measure named \"" + name + "\"");
  std::vector<Rational> weights(space_->size());
  for (const auto& [label, w] : it->second) weights[space_->index_of(label)] = w;
  return SignedMeasure(space_, std::move(weights));
}

Measure Workspace::measure(const std::string& name) const {
  auto mu = signed_measure(name);
  for (std::size_t i = 0; i < mu.weights().size(); ++i) {
    if (mu.weight(i) < 0) {
      throw InputError("measure \"" + name + "\" must be nonnegative (atom \"" + space_->label(i) + "\")");
    }
  }
  return Measure(std::move(mu));
}

MeasurableSet Workspace::set_of(const LabelSet& labels) const {
  return MeasurableSet::from_labels(space_, labels);
}

RefinementChain Workspace::chain(const std::string& name) const {
  const auto it = file_.chains.find(name);
  if (it == file_.chains.end()) throw InputError("no chain named \"" + name + "\"");
  std::vector<FiniteAlgebra> levels;
  for (const auto& blocks : it->second) {
    std::vector<MeasurableSet> sets;
    for (const auto& b : blocks) sets.push_back(set_of(b));
    levels.emplace_back(space_, std::move(sets));
  }
  return RefinementChain(std::move(levels));
}

SetSequenceSpec Workspace::sequence(const std::string& name) const {
  const auto it = file_.sequences.find(name);
  if (it == file_.sequences.end()) throw InputError("no sequence named \"" + name + "\"");
  std::vector<MeasurableSet> prefix, cycle;
  for (const auto& s : it->second.prefix) prefix.push_back(set_of(s));
  for (const auto& s : it->second.cycle) cycle.push_back(set_of(s));
  if (cycle.empty()) throw InputError("sequence \"" + name + "\" has an empty cycle");
  return SetSequenceSpec(std::move(prefix), std::move(cycle));
}

}  // namespace rnforge::cli
