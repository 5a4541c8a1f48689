#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tiletopo/errors.hpp"
#include "tiletopo/rational.hpp"

namespace tiletopo {

// Immutable coordinate vector. Every operation returns a new value.
template <class T>
class BasicVec {
 public:
  using value_type = T;

  BasicVec() = default;

  explicit BasicVec(std::vector<T> components) : c_(std::move(components)) { validate(); }

  BasicVec(std::initializer_list<T> components) : c_(components) { validate(); }

  static BasicVec zeros(std::size_t d) { return BasicVec(std::vector<T>(d, T(0))); }
  static BasicVec ones(std::size_t d) { return BasicVec(std::vector<T>(d, T(1))); }

  std::size_t size() const { return c_.size(); }
  bool empty() const { return c_.empty(); }
  const T& operator[](std::size_t i) const { return c_[i]; }
  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }
  std::span<const T> components() const { return c_; }
  const std::vector<T>& data() const { return c_; }

  BasicVec operator+(const BasicVec& o) const {
    check_same(o, "vector sum");
    std::vector<T> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = c_[i] + o.c_[i];
    return BasicVec(std::move(r));
  }

  BasicVec operator-(const BasicVec& o) const {
    check_same(o, "vector difference");
    std::vector<T> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = c_[i] - o.c_[i];
    return BasicVec(std::move(r));
  }

  BasicVec operator-() const {
    std::vector<T> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -c_[i];
    return BasicVec(std::move(r));
  }

  friend BasicVec operator*(const T& a, const BasicVec& v) {
    std::vector<T> r(v.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a * v.c_[i];
    return BasicVec(std::move(r));
  }

  // Adds a scalar to every component.
  friend BasicVec operator+(const T& a, const BasicVec& v) {
    std::vector<T> r(v.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a + v.c_[i];
    return BasicVec(std::move(r));
  }

  friend bool operator==(const BasicVec& a, const BasicVec& b) { return a.c_ == b.c_; }

  BasicVec with(std::size_t i, const T& value) const {
    std::vector<T> r = c_;
    r.at(i) = value;
    return BasicVec(std::move(r));
  }

  // Appends one coordinate (horizontal part + height).
  BasicVec append(const T& value) const {
    std::vector<T> r = c_;
    r.push_back(value);
    return BasicVec(std::move(r));
  }

  void check_same(const BasicVec& o, const char* what) const {
    if (o.size() != size()) {
      throw DimensionError(std::string(what) + ": length mismatch " + std::to_string(size()) +
                           " vs " + std::to_string(o.size()));
    }
  }

 private:
  void validate() {
    if constexpr (is_exact_v<T>) {
      for (T& x : c_) x.canonicalize();
    }
    if constexpr (std::is_floating_point_v<T>) {
      for (const T& x : c_) {
        if (!std::isfinite(x)) throw DomainError("vector component is not finite");
      }
    }
  }

  std::vector<T> c_;
};

using Vec = BasicVec<double>;
using QVec = BasicVec<Rational>;

template <class T>
std::ostream& operator<<(std::ostream& os, const BasicVec<T>& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  return os << ')';
}

Vec to_double(const QVec& v);
QVec to_rational(const Vec& v);

template <class T>
T norm_inf(const BasicVec<T>& x) {
  T m(0);
  for (const T& c : x) {
    T a = abs_of(c);
    if (a > m) m = a;
  }
  return m;
}

template <class T>
BasicVec<T> boxdot(const BasicVec<T>& x, const BasicVec<T>& y) {
  x.check_same(y, "boxdot");
  std::vector<T> r(x.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] * y[i];
  return BasicVec<T>(std::move(r));
}

// (sign(x), x+) with x+ the componentwise absolute value.
template <class T>
std::pair<BasicVec<T>, BasicVec<T>> sign_abs(const BasicVec<T>& x) {
  std::vector<T> s(x.size()), a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[i] = T(sign_of(x[i]));
    a[i] = abs_of(x[i]);
  }
  return {BasicVec<T>(std::move(s)), BasicVec<T>(std::move(a))};
}

// Horizontal coordinates and height.
template <class T>
std::pair<BasicVec<T>, T> split_coords(const BasicVec<T>& x) {
  if (x.size() < 2) throw DimensionError("split_coords needs d >= 2, got " + std::to_string(x.size()));
  std::vector<T> h(x.begin(), x.end() - 1);
  return {BasicVec<T>(std::move(h)), x[x.size() - 1]};
}

// Symbolic word over {0,...,m-1}: either finite or eventually periodic
// (prefix followed by an infinitely repeated nonempty block).
class Word {
 public:
  static constexpr std::size_t kMaxPeriodicLength = 64;

  static Word finite(std::vector<unsigned> symbols, unsigned alphabet_size);
  static Word periodic(std::vector<unsigned> prefix, std::vector<unsigned> block, unsigned alphabet_size);

  unsigned alphabet_size() const { return m_; }
  bool is_finite() const { return block_.empty(); }
  // Finite length; for periodic words the length of the stored prefix.
  std::size_t length() const { return prefix_.size(); }
  const std::vector<unsigned>& symbols() const { return prefix_; }
  const std::vector<unsigned>& prefix() const { return prefix_; }
  const std::vector<unsigned>& block() const { return block_; }

  // Concatenation; the left operand must be finite.
  Word concat(const Word& tail) const;

 private:
  Word(std::vector<unsigned> prefix, std::vector<unsigned> block, unsigned m);

  std::vector<unsigned> prefix_;
  std::vector<unsigned> block_;
  unsigned m_ = 2;
};

// sum_{n>=1} i_n m^{-n}; closed form for eventually periodic words.
Rational varphi_exact(const Word& w);
double varphi(const Word& w);

// Dense square upper-triangular matrix with back-substitution solves.
template <class T>
class UpperTriangular {
 public:
  UpperTriangular() = default;
  explicit UpperTriangular(std::size_t n) : n_(n), a_(n * n, T(0)) {}

  std::size_t size() const { return n_; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, const T& value) {
    if (j < i) throw InvalidParameterError("UpperTriangular: entry below diagonal");
    a_[i * n_ + j] = value;
  }

  BasicVec<T> multiply(const BasicVec<T>& x) const {
    check(x);
    std::vector<T> r(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i) {
      T sum(0);
      for (std::size_t j = i; j < n_; ++j) sum += a_[i * n_ + j] * x[j];
      r[i] = sum;
    }
    return BasicVec<T>(std::move(r));
  }

  // Solves M x = b from the last row upwards.
  BasicVec<T> solve(const BasicVec<T>& b) const {
    check(b);
    std::vector<T> x(n_, T(0));
    for (std::size_t k = n_; k-- > 0;) {
      T sum = b[k];
      for (std::size_t j = k + 1; j < n_; ++j) sum -= a_[k * n_ + j] * x[j];
      x[k] = sum / a_[k * n_ + k];
    }
    return BasicVec<T>(std::move(x));
  }

 private:
  void check(const BasicVec<T>& x) const {
    if (x.size() != n_) throw DimensionError("UpperTriangular: vector length mismatch");
  }

  std::size_t n_ = 0;
  std::vector<T> a_;
};

}  // namespace tiletopo
