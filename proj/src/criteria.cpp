#include "tiletopo/criteria.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tiletopo/errors.hpp"
#include "tiletopo/tile.hpp"

namespace tiletopo {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::disconnected:
      return "disconnected";
    case Classification::connected_not_interior_connected:
      return "connected_not_interior_connected";
    case Classification::tame_ball:
      return "tame_ball";
  }
  return "unknown";
}

std::string TopologyVerdict::line() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", criterion_value);
  return "criterion=" + std::string(buf) + " classification=" + std::string(to_string(classification));
}

namespace {

void check_scale(int p, const char* name) {
  if (std::abs(p) < 2) throw InvalidParameterError(std::string(name) + " must satisfy |.| >= 2, got " + std::to_string(p));
}

}  // namespace

template <class T>
T criterion_value(std::span<const int> p, std::span<const T> s, int p_d) {
  check_scale(p_d, "p_d");
  if (p.size() != s.size()) throw DimensionError("criterion_value: p and s lengths differ");
  const int sd = p_d > 0 ? 1 : -1;
  T best(0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    check_scale(p[j], "p_j");
    const T denom(p[j] * (p[j] - sd));
    T v = abs_of(T(canonical(s[j]) / denom));
    if (v > best) best = v;
  }
  return best;
}

template Rational criterion_value<Rational>(std::span<const int>, std::span<const Rational>, int);
template double criterion_value<double>(std::span<const int>, std::span<const double>, int);

TopologyVerdict classify(std::span<const int> p, std::span<const Rational> s, int p_d) {
  Rational v = criterion_value<Rational>(p, s, p_d);
  v.canonicalize();
  TopologyVerdict out;
  out.exact = true;
  out.criterion_value = to_double(v);
  out.exact_value = v.get_str();
  const int c = cmp(v, 1);
  out.classification = c < 0   ? Classification::tame_ball
                       : c == 0 ? Classification::connected_not_interior_connected
                                : Classification::disconnected;
  return out;
}

TopologyVerdict classify(std::span<const int> p, std::span<const double> s, int p_d) {
  const double v = criterion_value<double>(p, s, p_d);
  TopologyVerdict out;
  out.criterion_value = v;
  if (std::abs(v - 1.0) <= kFloatEqualityBand) {
    out.classification = Classification::connected_not_interior_connected;
    out.flagged = true;
  } else {
    out.classification = v < 1.0 ? Classification::tame_ball : Classification::disconnected;
  }
  return out;
}

TopologyVerdict classify(const SelfAffinePair& pair) {
  return classify(pair.horizontal_scales(), std::span<const Rational>(pair.slant_exact()), pair.vertical_scale());
}

template <class T>
DengLauResult<T> deng_lau_2d(int p, int q, const T& a_in, std::span<const T> b_in, bool cyclic) {
  const T a = canonical(a_in);
  std::vector<T> b(b_in.begin(), b_in.end());
  for (auto& x : b) x = canonical(x);
  check_scale(p, "p");
  check_scale(q, "q");
  const auto n = static_cast<std::size_t>(std::abs(p));
  if (b.size() != n) {
    throw InvalidParameterError("deng_lau_2d: expected |p| = " + std::to_string(n) + " offsets, got " +
                                std::to_string(b.size()));
  }
  const int sp = p > 0 ? 1 : -1;
  const T shift = (T(sp) * (b[0] - b[n - 1]) - a) / T(q * (q - sp));
  DengLauResult<T> out;
  const std::size_t pairs = cyclic ? n : n - 1;
  for (std::size_t i = 0; i < pairs; ++i) {
    const T& next = b[(i + 1) % n];
    out.values.push_back(abs_of(T((next - b[i]) / T(q) + shift)));
  }
  out.connected = true;
  for (const T& v : out.values) {
    if constexpr (is_exact_v<T>) {
      if (v > 1) out.connected = false;
    } else {
      if (v > 1.0 + kFloatEqualityBand) out.connected = false;
    }
  }
  return out;
}

template DengLauResult<Rational> deng_lau_2d<Rational>(int, int, const Rational&, std::span<const Rational>, bool);
template DengLauResult<double> deng_lau_2d<double>(int, int, const double&, std::span<const double>, bool);

template <class T>
bool ball_3d(int r, const T& s_in, const T& t_in) {
  const T s = canonical(s_in), t = canonical(t_in);
  check_scale(r, "r");
  if (sign_of(s) * sign_of(t) < 0) {
    throw HypothesisViolationError("ball_3d requires s t >= 0");
  }
  const T lhs = abs_of(T(s + t));
  const T rhs(std::abs(r * (r - 1)));
  return lhs < rhs;
}

template bool ball_3d<Rational>(int, const Rational&, const Rational&);
template bool ball_3d<double>(int, const double&, const double&);

}  // namespace tiletopo
