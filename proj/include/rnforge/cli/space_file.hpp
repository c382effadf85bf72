#pragma once

// JSON measure-space files.
//
//   {
//     "atoms": ["a", "b", "c"],
//     "measures": { "nu": { "a": "1/2", "b": "1/4", "c": "1/4" } },
//     "chains": { "c1": [ [["a", "b"], ["c"]], [["a"], ["b"], ["c"]] ] },
//     "sequences": { "s1": { "prefix": [["a"]], "cycle": [["b"], ["c"]] } }
//   }
//
// Weights are strings "p/q" (or "p"); JSON numbers are rejected so that no
// value ever passes through floating point. Atoms missing from a measure
// weigh 0. "chains" and "sequences" are optional.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rnforge/measure.hpp"
#include "rnforge/radon_nikodym.hpp"

namespace rnforge::cli {

using LabelSet = std::vector<std::string>;

struct SequenceEntry {
  std::vector<LabelSet> prefix;
  std::vector<LabelSet> cycle;

  friend bool operator==(const SequenceEntry&, const SequenceEntry&) = default;
};

struct SpaceFile {
  std::vector<std::string> atoms;
  std::map<std::string, std::map<std::string, Rational>> measures;
  /// name -> levels -> blocks -> labels.
  std::map<std::string, std::vector<std::vector<LabelSet>>> chains;
  std::map<std::string, SequenceEntry> sequences;

  friend bool operator==(const SpaceFile&, const SpaceFile&) = default;
};

/// Throws InputError; messages name the offending line when it can be found.
SpaceFile parse_space_file(std::string_view text);
SpaceFile load_space_file(const std::filesystem::path& path);

/// Canonical serialization (two-space indent, trailing newline). Measure
/// entries follow atom order.
std::string emit_space_file(const SpaceFile& file);

/// Typed views over a parsed file; every lookup throws InputError naming
/// the missing entry.
class Workspace {
 public:
  explicit Workspace(SpaceFile file);

  const SpaceFile& file() const noexcept { return file_; }
  const SpaceHandle& space() const noexcept { return space_; }

  SignedMeasure signed_measure(const std::string& name) const;
  /// Throws InputError if any weight is negative.
  Measure measure(const std::string& name) const;
  RefinementChain chain(const std::string& name) const;
  SetSequenceSpec sequence(const std::string& name) const;

 private:
  MeasurableSet set_of(const LabelSet& labels) const;

  SpaceFile file_;
  SpaceHandle space_;
};

}  // namespace rnforge::cli
