#include "tiletopo/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "tiletopo/errors.hpp"

namespace tiletopo {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  if (s.empty()) throw InvalidParameterError("empty number in '" + std::string(whole) + "'");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw InvalidParameterError("not a number: '" + std::string(whole) + "'");
  long long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw InvalidParameterError("not a number: '" + std::string(whole) + "'");
    ++i;
    std::string e(s.substr(i));
    if (e.empty()) throw InvalidParameterError("bad exponent in '" + std::string(whole) + "'");
    std::size_t used = 0;
    try {
      exponent = std::stoll(e, &used);
    } catch (const std::exception&) {
      throw InvalidParameterError("bad exponent in '" + std::string(whole) + "'");
    }
    if (used != e.size() || exponent > 4000 || exponent < -4000) {
      throw InvalidParameterError("bad exponent in '" + std::string(whole) + "'");
    }
  }
  mpz_class num(digits, 10);
  mpz_class ten_pow;
  long long shift = exponent - scale;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s, text);
  Rational num = parse_decimal(trim(s.substr(0, slash)), text);
  Rational den = parse_decimal(trim(s.substr(slash + 1)), text);
  if (den == 0) throw InvalidParameterError("zero denominator in '" + std::string(text) + "'");
  Rational q = num / den;
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

double to_double(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  // get_d truncates; the nearest double is x or its neighbour away from zero
  const double x = c.get_d();
  if (!std::isfinite(x)) return x;
  const double y = std::nextafter(x, c < 0 ? -INFINITY : INFINITY);
  if (!std::isfinite(y)) return x;
  const Rational dx = abs(Rational(x) - c), dy = abs(Rational(y) - c);
  if (dy < dx) return y;
  if (dx < dy) return x;
  std::int64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  return (bits & 1) ? y : x;
}

}  // namespace tiletopo
