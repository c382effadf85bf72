#include <fstream>
#include <random>

#include "rnforge/cli/commands.hpp"
#include "rnforge/error.hpp"

namespace rnforge::cli {

SpaceFile example_three_atom() {
  SpaceFile f;
  f.atoms = {"a", "b", "c"};
  f.measures["nu"] = {{"a", Rational(1, 2)}, {"b", Rational(1, 4)}, {"c", Rational(1, 4)}};
  f.measures["lam"] = {{"a", Rational(1, 4)}, {"b", Rational(1, 2)}, {"c", Rational(1, 4)}};
  f.measures["mu"] = {{"a", Rational(1)}, {"b", Rational(-2)}, {"c", Rational(3)}};
  f.chains["c1"] = {{{"a", "b"}, {"c"}}, {{"a"}, {"b"}, {"c"}}};
  f.sequences["s1"] = {{{"a"}, {"a", "b"}}, {{"b"}, {"c"}}};
  return f;
}

SpaceFile example_null_atom() {
  SpaceFile f;
  f.atoms = {"a", "b", "c"};
  f.measures["nu"] = {{"a", Rational(1, 2)}, {"b", Rational(0)}, {"c", Rational(1, 2)}};
  f.measures["lam"] = {{"a", Rational(1, 3)}, {"b", Rational(1, 3)}, {"c", Rational(1, 3)}};
  f.chains["c1"] = {{{"a", "b", "c"}}, {{"a"}, {"b"}, {"c"}}};
  return f;
}

// Raw mt19937 output is specified bit-for-bit by the standard, unlike the
// distribution classes, so the file is identical on every platform.
SpaceFile example_eight_atom() {
  std::mt19937 gen(20240613u);
  SpaceFile f;
  f.atoms = {"a", "b", "c", "d", "e", "f", "g", "h"};
  auto& nu = f.measures["nu"];
  auto& lam = f.measures["lam"];
  auto& mu = f.measures["mu"];
  for (const auto& label : f.atoms) {
    if (label == "f") {
      nu[label] = 0;
      lam[label] = 0;
    } else {
      nu[label] = Rational(1 + gen() % 9, 1 + gen() % 8);
      lam[label] = Rational(gen() % 10, 1 + gen() % 6);
    }
    mu[label] = Rational(static_cast<long>(gen() % 11) - 5, 1 + gen() % 4);
  }
  for (auto* m : {&nu, &lam, &mu}) {
    for (auto& [_, w] : *m) w.canonicalize();
  }
  f.chains["c3"] = {{{"a", "b", "c", "d"}, {"e", "f", "g", "h"}},
                    {{"a", "b"}, {"c", "d"}, {"e", "f"}, {"g", "h"}},
                    {{"a"}, {"b"}, {"c"}, {"d"}, {"e"}, {"f"}, {"g"}, {"h"}}};
  f.sequences["null_tail"] = {{{"a", "b", "c"}}, {{"f"}, {}}};
  return f;
}

std::vector<std::filesystem::path> emit_example_files(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
  const std::pair<const char*, SpaceFile> files[] = {{"three_atom.json", example_three_atom()},
                                                     {"eight_atom.json", example_eight_atom()},
                                                     {"null_atom.json", example_null_atom()}};
  std::vector<std::filesystem::path> written;
  for (const auto& [name, file] : files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << emit_space_file(file);
    out.close();
    if (!out) throw InputError("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace rnforge::cli
