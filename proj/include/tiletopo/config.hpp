#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiletopo/linalg.hpp"
#include "tiletopo/prism.hpp"
#include "tiletopo/tile.hpp"

namespace tiletopo {

// Plain-text run description:
//
//   [pair]
//   p = 3 3 3
//   s = 2 1.8
//   digits = layered        # standard | layered
//   [offsets]
//   a0 = 0 0
//   a1 = -0.55 -0.45
//   a2 = -1.25 -1.05
//   [profile]               # optional overrides
//   b = 1
//   epsilon = 1/12
//   u1 = 0.1 -0.2
//   [run]
//   level = 6
//   seed = 1
//
// Numbers are integers, decimals or fractions a/b; lists are separated by
// blanks or commas; '#' starts a comment.
struct RunConfig {
  std::vector<int> p;
  std::vector<Rational> s;
  DigitKind digits = DigitKind::standard;
  std::vector<std::optional<QVec>> offsets;

  std::optional<Rational> b;
  std::optional<Rational> epsilon;
  std::vector<std::optional<QVec>> u;  // u_1..u_{r-1}; empty means the tile's own jumps

  int level = 6;
  int depth = 4;
  std::size_t pairs = 100'000;
  double delta = 1e-3;
  double tolerance = 0.1;
  int stabilization_limit = 12;
  int height_depth = 16;
  std::size_t height_samples = 1000;
  std::size_t grid = 32;
  std::size_t layers_grid = 100;
  std::size_t resolution = 16;
  std::size_t raster = 512;
  std::size_t budget = kDefaultPointBudget;
  std::uint64_t seed = 0;
  std::vector<std::string> checks{"injectivity", "height", "convergence"};

  std::size_t dimension() const { return p.size(); }
  SelfAffinePair pair() const;
  PathProfile<double> profile(const SelfAffinePair& pair) const;

  // Sets one value; section and key as in the file. line is used in
  // diagnostics (0 for command-line overrides).
  void set(std::string_view section, std::string_view key, std::string_view value, int line);

  // Normalized "section.key=value" lines, exact rationals.
  std::vector<std::string> echo() const;
};

RunConfig parse_config(std::istream& is);

// "section.key=value"
void apply_override(RunConfig& cfg, std::string_view assignment);

}  // namespace tiletopo
