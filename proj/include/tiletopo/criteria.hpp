#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiletopo/rational.hpp"

namespace tiletopo {

class SelfAffinePair;

enum class Classification { disconnected, connected_not_interior_connected, tame_ball };

std::string_view to_string(Classification c);

// Band used to declare equality with 1 when the inputs are floating point.
inline constexpr double kFloatEqualityBand = 1e-12;

struct TopologyVerdict {
  double criterion_value = 0.0;
  std::string exact_value;  // canonical "a/b" when computed exactly, empty otherwise
  Classification classification = Classification::tame_ball;
  bool exact = false;
  // float mode only: value within kFloatEqualityBand of 1
  bool flagged = false;

  // "criterion=<value> classification=<label>"
  std::string line() const;
};

// max_j |s_j / (p_j (p_j - sign(p_d)))| over the horizontal scales p_j.
template <class T>
T criterion_value(std::span<const int> p, std::span<const T> s, int p_d);

TopologyVerdict classify(std::span<const int> p, std::span<const Rational> s, int p_d);
TopologyVerdict classify(std::span<const int> p, std::span<const double> s, int p_d);
TopologyVerdict classify(const SelfAffinePair& pair);

template <class T>
struct DengLauResult {
  std::vector<T> values;
  bool connected = false;
};

// Planar family A = [[p, 0], [-a, q]] with digits (i, j + b_i). One value per
// consecutive pair (b_i, b_{i+1}); with cyclic = true the pair (b_{|p|-1}, b_0)
// is appended.
template <class T>
DengLauResult<T> deng_lau_2d(int p, int q, const T& a, std::span<const T> b, bool cyclic = false);

// |s + t| < |r (r - 1)|, valid under the hypothesis s t >= 0.
template <class T>
bool ball_3d(int r, const T& s, const T& t);

}  // namespace tiletopo
