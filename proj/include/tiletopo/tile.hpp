#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "tiletopo/linalg.hpp"

namespace tiletopo {

inline constexpr std::size_t kDefaultPointBudget = 2'000'000;

enum class DigitKind { standard, layered, custom };

// Expanding matrix
//     A = | diag(p_1..p_{d-1})  -s  |
//         | 0                   p_d |
// together with a digit set. Product digit sets are indexed with the first
// horizontal digit varying fastest and the vertical digit (layer) slowest.
class SelfAffinePair {
 public:
  static SelfAffinePair standard(std::vector<int> p, std::vector<Rational> slant);
  // Digits (i_1 + a_k^1, ..., i_{d-1} + a_k^{d-1}, k) with one horizontal
  // offset vector a_k per layer k = 0..|p_d|-1.
  static SelfAffinePair layered(std::vector<int> p, std::vector<Rational> slant, std::vector<QVec> offsets);
  static SelfAffinePair custom(std::vector<int> p, std::vector<Rational> slant, std::vector<QVec> digits);

  std::size_t dimension() const { return p_.size(); }
  const std::vector<int>& p() const { return p_; }
  int vertical_scale() const { return p_.back(); }
  std::span<const int> horizontal_scales() const { return std::span<const int>(p_).first(p_.size() - 1); }
  const std::vector<Rational>& slant_exact() const { return slant_q_; }
  const Vec& slant() const { return slant_; }

  DigitKind digit_kind() const { return kind_; }
  bool is_product() const { return kind_ != DigitKind::custom; }
  std::size_t digit_count() const { return digits_.size(); }
  const std::vector<QVec>& digits_exact() const { return digits_q_; }
  const std::vector<Vec>& digits() const { return digits_; }
  bool has_integer_digits() const;

  unsigned layer_count() const { return static_cast<unsigned>(std::abs(vertical_scale())); }
  // Horizontal offset of layer k (zero vector for the standard digit set).
  const std::vector<QVec>& layer_offsets_exact() const { return offsets_q_; }
  std::size_t digit_index(std::span<const unsigned> horizontal, unsigned layer) const;

  const UpperTriangular<Rational>& matrix_exact() const { return a_q_; }
  const UpperTriangular<double>& matrix() const { return a_; }

  template <class T>
  BasicVec<T> apply(const BasicVec<T>& x) const;
  // A^{-1} x by back-substitution.
  template <class T>
  BasicVec<T> apply_inverse(const BasicVec<T>& x) const;

 private:
  SelfAffinePair(std::vector<int> p, std::vector<Rational> slant, DigitKind kind);
  void set_digits(std::vector<QVec> digits);

  std::vector<int> p_;
  std::vector<Rational> slant_q_;
  Vec slant_;
  DigitKind kind_;
  std::vector<QVec> offsets_q_;
  std::vector<QVec> digits_q_;
  std::vector<Vec> digits_;
  UpperTriangular<Rational> a_q_;
  UpperTriangular<double> a_;
};

// Axis-aligned box [lo, hi].
struct Box {
  Vec lo;
  Vec hi;

  std::size_t dimension() const { return lo.size(); }
  bool contains(const Vec& x) const;
  double volume() const;
  Box expanded(double margin) const;
  Box translated(const Vec& t) const;
};

Box bounding_union(const Box& a, const Box& b);

// sum_{k=1}^{|w|} A^{-k} d_{w_k}, evaluated Horner-style with one
// back-substitution per symbol.
template <class T>
BasicVec<T> digit_expansion_point(const SelfAffinePair& pair, const Word& w);

// terms[k-1][i] = A^{-k} d_i for k = 1..levels.
template <class T>
std::vector<std::vector<BasicVec<T>>> expansion_terms(const SelfAffinePair& pair, int levels);

// ||A^{-k}||_inf for k = 0..kmax.
std::vector<double> inverse_power_norms(const SelfAffinePair& pair, int kmax);

// sum_{k>=1} ||A^{-k}||_inf * max_d ||d||_inf (bounds sup_{t in T} ||t||_inf).
double diameter_bound(const SelfAffinePair& pair);

// ||A^{-n}||_inf * diameter_bound: every point of T lies within this sup
// distance of the level-n cloud.
double cell_radius(const SelfAffinePair& pair, int n);

// Coordinatewise extent of T (outward rounded).
Box tile_bounding_box(const SelfAffinePair& pair);

struct TileApproximation {
  int level = 0;
  std::size_t dimension = 0;
  std::vector<Vec> points;
  double cell_radius = 0.0;
};

std::size_t cloud_size(const SelfAffinePair& pair, int n);

// All (#D)^n truncated sums, in lexicographic word order.
TileApproximation approximate(const SelfAffinePair& pair, int n, std::size_t budget = kDefaultPointBudget);

std::vector<QVec> approximate_exact(const SelfAffinePair& pair, int n, std::size_t budget = 200'000);

// Streams the level-n cloud in lexicographic word order without storing it.
// The partial sums are accumulated exactly as in approximate(), so the
// streamed points are bitwise identical to the stored ones.
template <class Fn>
void for_each_truncation(const SelfAffinePair& pair, int n, Fn&& fn);

// Union of the level-n cells q + A^{-n} B over the level-n cloud, with B the
// bounding box of T. Contains T.
class CellCovering {
 public:
  CellCovering(const SelfAffinePair& pair, int n);

  int level() const { return n_; }
  bool contains(const Vec& z) const;
  const Box& bounds() const { return bounds_[n_]; }

 private:
  bool descend(std::vector<double>& z, int depth) const;

  const SelfAffinePair* pair_;
  int n_;
  Box base_;
  std::vector<Box> bounds_;  // bounds_[m] encloses the level-m covering
};

// Monte-Carlo measure of the level-n cell covering.
double estimate_measure(const SelfAffinePair& pair, int n, std::size_t samples, std::uint64_t seed);

struct TilingReport {
  int level = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Box box;
  double coverage = 0.0;          // fraction of box samples covered by some translate
  double overlap = 0.0;           // estimated sum over pairs of |C_i cap C_j|
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_translates;
  bool flagged = false;           // duplicates present
};

TilingReport tiling_overlap_check(const SelfAffinePair& pair, const std::vector<Vec>& translates, int n,
                                  std::size_t samples, std::uint64_t seed, const Box& box);

struct AdjacencyStats {
  int level = 0;
  std::size_t cells = 0;
  std::size_t components = 0;
  bool connected() const { return components == 1; }
};

// Components of the graph on level-n cells. Each cell A^{-n}(T + Q) is
// enclosed by the image of a polytope containing T (its bounding box cut by
// slabs along a fixed set of integer directions); two cells are adjacent iff
// these enclosures intersect. Touching cells are always adjacent.
AdjacencyStats cell_adjacency(const SelfAffinePair& pair, int n, std::size_t budget = kDefaultPointBudget);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_truncation(const SelfAffinePair& pair, int n, Fn&& fn) {
  const auto terms = expansion_terms<double>(pair, n);
  const std::size_t d = pair.dimension();
  const std::size_t m = pair.digit_count();
  // partial[k] holds the sum of the first k terms
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(n) + 1, std::vector<double>(d, 0.0));
  std::vector<unsigned> word(static_cast<std::size_t>(n), 0);
  if (n == 0) {
    fn(Vec(partial[0]), std::span<const unsigned>(word));
    return;
  }
  std::size_t k = 0;
  std::vector<unsigned> next(static_cast<std::size_t>(n), 0);
  while (true) {
    if (next[k] == m) {
      if (k == 0) break;
      --k;
      continue;
    }
    const unsigned digit = next[k]++;
    word[k] = digit;
    const Vec& term = terms[k][digit];
    for (std::size_t i = 0; i < d; ++i) partial[k + 1][i] = partial[k][i] + term[i];
    if (k + 1 == static_cast<std::size_t>(n)) {
      fn(Vec(partial[k + 1]), std::span<const unsigned>(word));
    } else {
      ++k;
      next[k] = 0;
    }
  }
}

}  // namespace tiletopo
