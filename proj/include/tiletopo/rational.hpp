#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <type_traits>

namespace tiletopo {

using Rational = mpq_class;

// Accepts integers, "a/b" fractions and plain decimals with an optional
// exponent ("-0.55", "1e-3"). Decimals are converted exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

// Correctly rounded to nearest.
double to_double(const Rational& q);
inline double to_double(double x) { return x; }

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// GMP arithmetic expects canonical operands; user-built fractions may not be.
template <class T>
T canonical(T x) {
  if constexpr (is_exact_v<T>) x.canonicalize();
  return x;
}

template <class T>
int sign_of(const T& x) {
  if constexpr (is_exact_v<T>) {
    return sgn(x);
  } else {
    return (x > T(0)) - (x < T(0));
  }
}

template <class T>
T abs_of(const T& x) {
  if constexpr (is_exact_v<T>) {
    return T(abs(x));
  } else {
    return x < T(0) ? -x : x;
  }
}

template <class T>
T from_rational(const Rational& q) {
  if constexpr (is_exact_v<T>) {
    return q;
  } else {
    return static_cast<T>(to_double(q));
  }
}

}  // namespace tiletopo
