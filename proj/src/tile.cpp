#include "tiletopo/tile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "tiletopo/parallel.hpp"
#include "tiletopo/random.hpp"

namespace tiletopo {
namespace {

constexpr int kBoundTerms = 64;

void check_scales(const std::vector<int>& p, const std::vector<Rational>& slant) {
  if (p.size() < 2) throw DimensionError("self-affine pair needs dimension d >= 2");
  if (slant.size() + 1 != p.size()) {
    throw DimensionError("slant vector must have d-1 = " + std::to_string(p.size() - 1) + " entries");
  }
  for (int pj : p) {
    if (std::abs(pj) < 2) throw InvalidParameterError("|p_j| >= 2 required, got " + std::to_string(pj));
  }
}

// Mixed-radix decomposition of a digit index into (i_1, ..., i_{d-1}, layer).
std::vector<unsigned> unrank(std::size_t index, const std::vector<int>& p) {
  std::vector<unsigned> r(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto base = static_cast<std::size_t>(std::abs(p[j]));
    r[j] = static_cast<unsigned>(index % base);
    index /= base;
  }
  return r;
}

std::size_t product_size(const std::vector<int>& p) {
  std::size_t n = 1;
  for (int pj : p) n *= static_cast<std::size_t>(std::abs(pj));
  return n;
}

}  // namespace

SelfAffinePair::SelfAffinePair(std::vector<int> p, std::vector<Rational> slant, DigitKind kind)
    : p_(std::move(p)), slant_q_(std::move(slant)), kind_(kind) {
  check_scales(p_, slant_q_);
  for (auto& q : slant_q_) q.canonicalize();
  const std::size_t d = p_.size();
  std::vector<double> sd(d - 1);
  for (std::size_t j = 0; j + 1 < d; ++j) sd[j] = to_double(slant_q_[j]);
  slant_ = Vec(std::move(sd));
  a_q_ = UpperTriangular<Rational>(d);
  a_ = UpperTriangular<double>(d);
  for (std::size_t j = 0; j < d; ++j) {
    a_q_.set(j, j, Rational(p_[j]));
    a_.set(j, j, p_[j]);
  }
  for (std::size_t j = 0; j + 1 < d; ++j) {
    a_q_.set(j, d - 1, Rational(-slant_q_[j]));
    a_.set(j, d - 1, -to_double(slant_q_[j]));
  }
}

void SelfAffinePair::set_digits(std::vector<QVec> digits) {
  if (digits.empty()) throw InvalidParameterError("digit set is empty");
  for (const auto& dg : digits) {
    if (dg.size() != dimension()) throw DimensionError("digit has wrong dimension");
  }
  digits_q_ = std::move(digits);
  digits_.clear();
  for (const auto& dg : digits_q_) digits_.push_back(to_double(dg));
}

SelfAffinePair SelfAffinePair::standard(std::vector<int> p, std::vector<Rational> slant) {
  SelfAffinePair pair(std::move(p), std::move(slant), DigitKind::standard);
  const std::size_t d = pair.dimension();
  pair.offsets_q_.assign(pair.layer_count(), QVec::zeros(d - 1));
  std::vector<QVec> digits;
  const std::size_t count = product_size(pair.p_);
  for (std::size_t i = 0; i < count; ++i) {
    auto idx = unrank(i, pair.p_);
    std::vector<Rational> c(d);
    for (std::size_t j = 0; j < d; ++j) c[j] = idx[j];
    digits.emplace_back(std::move(c));
  }
  pair.set_digits(std::move(digits));
  return pair;
}

SelfAffinePair SelfAffinePair::layered(std::vector<int> p, std::vector<Rational> slant, std::vector<QVec> offsets) {
  SelfAffinePair pair(std::move(p), std::move(slant), DigitKind::layered);
  const std::size_t d = pair.dimension();
  if (offsets.size() != pair.layer_count()) {
    throw InvalidParameterError("layered digit set needs |p_d| = " + std::to_string(pair.layer_count()) +
                                " offset vectors, got " + std::to_string(offsets.size()));
  }
  for (const auto& a : offsets) {
    if (a.size() != d - 1) throw DimensionError("layer offset must have d-1 entries");
  }
  pair.offsets_q_ = std::move(offsets);
  std::vector<QVec> digits;
  const std::size_t count = product_size(pair.p_);
  for (std::size_t i = 0; i < count; ++i) {
    auto idx = unrank(i, pair.p_);
    const QVec& a = pair.offsets_q_[idx[d - 1]];
    std::vector<Rational> c(d);
    for (std::size_t j = 0; j + 1 < d; ++j) c[j] = Rational(idx[j]) + a[j];
    c[d - 1] = idx[d - 1];
    digits.emplace_back(std::move(c));
  }
  pair.set_digits(std::move(digits));
  return pair;
}

SelfAffinePair SelfAffinePair::custom(std::vector<int> p, std::vector<Rational> slant, std::vector<QVec> digits) {
  SelfAffinePair pair(std::move(p), std::move(slant), DigitKind::custom);
  pair.set_digits(std::move(digits));
  return pair;
}

bool SelfAffinePair::has_integer_digits() const {
  for (const auto& dg : digits_q_) {
    for (const auto& c : dg) {
      if (c.get_den() != 1) return false;
    }
  }
  return true;
}

std::size_t SelfAffinePair::digit_index(std::span<const unsigned> horizontal, unsigned layer) const {
  if (!is_product()) throw UnsupportedConfigurationError("digit_index needs a product digit set");
  if (horizontal.size() + 1 != dimension()) throw DimensionError("digit_index: wrong number of horizontal digits");
  std::size_t index = layer;
  if (layer >= layer_count()) throw InvalidWordError("layer index out of range");
  for (std::size_t j = horizontal.size(); j-- > 0;) {
    const auto base = static_cast<unsigned>(std::abs(p_[j]));
    if (horizontal[j] >= base) throw InvalidWordError("horizontal digit out of range");
    index = index * base + horizontal[j];
  }
  return index;
}

template <class T>
BasicVec<T> SelfAffinePair::apply(const BasicVec<T>& x) const {
  if constexpr (is_exact_v<T>) {
    return a_q_.multiply(x);
  } else {
    return a_.multiply(x);
  }
}

template <class T>
BasicVec<T> SelfAffinePair::apply_inverse(const BasicVec<T>& x) const {
  if constexpr (is_exact_v<T>) {
    return a_q_.solve(x);
  } else {
    return a_.solve(x);
  }
}

template Vec SelfAffinePair::apply(const Vec&) const;
template QVec SelfAffinePair::apply(const QVec&) const;
template Vec SelfAffinePair::apply_inverse(const Vec&) const;
template QVec SelfAffinePair::apply_inverse(const QVec&) const;

bool Box::contains(const Vec& x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

Box Box::expanded(double margin) const {
  std::vector<double> l(lo.begin(), lo.end()), h(hi.begin(), hi.end());
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] -= margin;
    h[i] += margin;
  }
  return {Vec(std::move(l)), Vec(std::move(h))};
}

Box Box::translated(const Vec& t) const { return {lo + t, hi + t}; }

Box bounding_union(const Box& a, const Box& b) {
  std::vector<double> l(a.dimension()), h(a.dimension());
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] = std::min(a.lo[i], b.lo[i]);
    h[i] = std::max(a.hi[i], b.hi[i]);
  }
  return {Vec(std::move(l)), Vec(std::move(h))};
}

template <class T>
BasicVec<T> digit_expansion_point(const SelfAffinePair& pair, const Word& w) {
  if (!w.is_finite()) throw InvalidWordError("digit expansion needs a finite word");
  const auto& digits = [&]() -> const auto& {
    if constexpr (is_exact_v<T>) {
      return pair.digits_exact();
    } else {
      return pair.digits();
    }
  }();
  BasicVec<T> x = BasicVec<T>::zeros(pair.dimension());
  const auto& s = w.symbols();
  for (unsigned c : s) {
    if (c >= digits.size()) {
      throw InvalidWordError("digit index " + std::to_string(c) + " outside digit set of size " +
                             std::to_string(digits.size()));
    }
  }
  for (std::size_t k = s.size(); k-- > 0;) x = pair.apply_inverse(x + digits[s[k]]);
  return x;
}

template Vec digit_expansion_point<double>(const SelfAffinePair&, const Word&);
template QVec digit_expansion_point<Rational>(const SelfAffinePair&, const Word&);

template <class T>
std::vector<std::vector<BasicVec<T>>> expansion_terms(const SelfAffinePair& pair, int levels) {
  std::vector<std::vector<BasicVec<T>>> terms;
  std::vector<BasicVec<T>> current;
  if constexpr (is_exact_v<T>) {
    current = pair.digits_exact();
  } else {
    current = pair.digits();
  }
  for (int k = 1; k <= levels; ++k) {
    for (auto& v : current) v = pair.apply_inverse(v);
    terms.push_back(current);
  }
  return terms;
}

template std::vector<std::vector<Vec>> expansion_terms<double>(const SelfAffinePair&, int);
template std::vector<std::vector<QVec>> expansion_terms<Rational>(const SelfAffinePair&, int);

namespace {

// Columns of A^{-k} for k = 0..kmax, built by repeated back-substitution.
std::vector<std::vector<Vec>> inverse_power_columns(const SelfAffinePair& pair, int kmax) {
  const std::size_t d = pair.dimension();
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < d; ++j) cols.push_back(Vec::zeros(d).with(j, 1.0));
  std::vector<std::vector<Vec>> out{cols};
  for (int k = 1; k <= kmax; ++k) {
    for (auto& c : cols) c = pair.apply_inverse(c);
    out.push_back(cols);
  }
  return out;
}

double row_sum_norm(const std::vector<Vec>& cols) {
  const std::size_t d = cols.size();
  double best = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += std::abs(cols[j][i]);
    best = std::max(best, row);
  }
  return best;
}

double max_digit_norm(const SelfAffinePair& pair) {
  double m = 0.0;
  for (const auto& dg : pair.digits()) m = std::max(m, norm_inf(dg));
  return m;
}

// Bound on sum_{k>K} ||A^{-k}||_inf. Entries of A^{-k} are p_j^{-k} on the
// diagonal and at most |s_j| k 2^{-(k+1)} in the last column, so
// ||A^{-k}|| <= 2^{-k} (1 + S k / 2) with S = max |s_j|.
double tail_norm_bound(const SelfAffinePair& pair, int K) {
  const double S = norm_inf(pair.slant());
  return std::ldexp(1.0 + S * (K + 2) / 2.0, -K);
}

}  // namespace

std::vector<double> inverse_power_norms(const SelfAffinePair& pair, int kmax) {
  std::vector<double> r;
  for (const auto& cols : inverse_power_columns(pair, kmax)) r.push_back(row_sum_norm(cols));
  return r;
}

double diameter_bound(const SelfAffinePair& pair) {
  const auto norms = inverse_power_norms(pair, kBoundTerms);
  double sum = 0.0;
  for (int k = 1; k <= kBoundTerms; ++k) sum += norms[static_cast<std::size_t>(k)];
  return (sum + tail_norm_bound(pair, kBoundTerms)) * max_digit_norm(pair);
}

double cell_radius(const SelfAffinePair& pair, int n) {
  if (n < 0) throw InvalidParameterError("level must be >= 0");
  return inverse_power_norms(pair, n).back() * diameter_bound(pair);
}

Box tile_bounding_box(const SelfAffinePair& pair) {
  const std::size_t d = pair.dimension();
  std::vector<double> lo(d, 0.0), hi(d, 0.0);
  std::vector<Vec> current = pair.digits();
  for (int k = 1; k <= kBoundTerms; ++k) {
    for (auto& v : current) v = pair.apply_inverse(v);
    for (std::size_t i = 0; i < d; ++i) {
      double mn = current[0][i], mx = current[0][i];
      for (const auto& v : current) {
        mn = std::min(mn, v[i]);
        mx = std::max(mx, v[i]);
      }
      lo[i] += mn;
      hi[i] += mx;
    }
  }
  const double tail = tail_norm_bound(pair, kBoundTerms) * max_digit_norm(pair);
  double scale = 1.0;
  for (std::size_t i = 0; i < d; ++i) scale = std::max({scale, std::abs(lo[i]), std::abs(hi[i])});
  const double margin = tail + 1e-12 * scale;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] -= margin;
    hi[i] += margin;
  }
  return {Vec(std::move(lo)), Vec(std::move(hi))};
}

std::size_t cloud_size(const SelfAffinePair& pair, int n) {
  if (n < 0) throw InvalidParameterError("level must be >= 0");
  double count = std::pow(static_cast<double>(pair.digit_count()), n);
  if (count > 1e18) return static_cast<std::size_t>(-1);
  std::size_t c = 1;
  for (int k = 0; k < n; ++k) c *= pair.digit_count();
  return c;
}

TileApproximation approximate(const SelfAffinePair& pair, int n, std::size_t budget) {
  const std::size_t count = cloud_size(pair, n);
  if (count > budget) {
    throw ResourceError("level " + std::to_string(n) + " needs " +
                        (count == static_cast<std::size_t>(-1) ? std::string("too many") : std::to_string(count)) +
                        " points, budget is " + std::to_string(budget));
  }
  TileApproximation approx;
  approx.level = n;
  approx.dimension = pair.dimension();
  approx.points.reserve(count);
  for_each_truncation(pair, n, [&](const Vec& q, std::span<const unsigned>) { approx.points.push_back(q); });
  approx.cell_radius = cell_radius(pair, n);
  return approx;
}

std::vector<QVec> approximate_exact(const SelfAffinePair& pair, int n, std::size_t budget) {
  const std::size_t count = cloud_size(pair, n);
  if (count > budget) throw ResourceError("exact cloud exceeds budget");
  const auto terms = expansion_terms<Rational>(pair, n);
  std::vector<QVec> level{QVec::zeros(pair.dimension())};
  for (int k = 0; k < n; ++k) {
    std::vector<QVec> next;
    next.reserve(level.size() * pair.digit_count());
    for (const auto& q : level) {
      for (const auto& t : terms[static_cast<std::size_t>(k)]) next.push_back(q + t);
    }
    level = std::move(next);
  }
  return level;
}

// ---------------------------------------------------------------------------
// Cell covering

namespace {

// Axis-aligned hull of A^{-1}(box + d) over all digits.
Box inverse_image_hull(const SelfAffinePair& pair, const Box& box) {
  const std::size_t d = pair.dimension();
  const auto cols = inverse_power_columns(pair, 1)[1];
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  for (const auto& dg : pair.digits()) {
    for (std::size_t i = 0; i < d; ++i) {
      double l = 0.0, h = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double a = cols[j][i];
        const double x0 = a * (box.lo[j] + dg[j]);
        const double x1 = a * (box.hi[j] + dg[j]);
        l += std::min(x0, x1);
        h += std::max(x0, x1);
      }
      lo[i] = std::min(lo[i], l);
      hi[i] = std::max(hi[i], h);
    }
  }
  Box out{Vec(std::move(lo)), Vec(std::move(hi))};
  return out.expanded(1e-12 * (1.0 + norm_inf(out.hi) + norm_inf(out.lo)));
}

}  // namespace

CellCovering::CellCovering(const SelfAffinePair& pair, int n) : pair_(&pair), n_(n) {
  if (n < 0) throw InvalidParameterError("level must be >= 0");
  base_ = tile_bounding_box(pair);
  bounds_.push_back(base_);
  for (int m = 1; m <= n; ++m) bounds_.push_back(inverse_image_hull(pair, bounds_.back()));
}

bool CellCovering::contains(const Vec& z) const {
  if (!bounds_[n_].contains(z)) return false;
  std::vector<double> x(z.begin(), z.end());
  return descend(x, 0);
}

// z currently equals A^depth (z0 - q_w) for the chosen prefix w; it has to
// land in the level-(n - depth) covering.
bool CellCovering::descend(std::vector<double>& z, int depth) const {
  const std::size_t d = z.size();
  if (depth == n_) return true;
  const Box& target = bounds_[static_cast<std::size_t>(n_ - depth - 1)];
  const auto& A = pair_->matrix();
  std::vector<double> az(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < d; ++j) s += A(i, j) * z[j];
    az[i] = s;
  }
  std::vector<double> next(d);
  for (const auto& dg : pair_->digits()) {
    bool inside = true;
    for (std::size_t i = 0; i < d; ++i) {
      next[i] = az[i] - dg[i];
      if (next[i] < target.lo[i] || next[i] > target.hi[i]) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    if (descend(next, depth + 1)) return true;
  }
  return false;
}

namespace {

void require_integer_digits(const SelfAffinePair& pair) {
  if (!pair.has_integer_digits()) {
    throw UnsupportedConfigurationError("measure estimates need an integer digit set");
  }
}

Vec sample_in(const Box& box, Rng& rng) {
  std::vector<double> x(box.dimension());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
  return Vec(std::move(x));
}

constexpr std::size_t kSampleBlock = 4096;

}  // namespace

double estimate_measure(const SelfAffinePair& pair, int n, std::size_t samples, std::uint64_t seed) {
  require_integer_digits(pair);
  if (n < 1) throw InvalidParameterError("estimate_measure needs level n >= 1");
  if (samples < 1) throw InvalidParameterError("estimate_measure needs at least one sample");
  const CellCovering cover(pair, n);
  const Box& box = cover.bounds();
  std::vector<std::size_t> hits((samples + kSampleBlock - 1) / kSampleBlock, 0);
  parallel_blocks(samples, kSampleBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng = Rng::for_block(seed, b);
    std::size_t h = 0;
    for (std::size_t i = begin; i < end; ++i) h += cover.contains(sample_in(box, rng)) ? 1 : 0;
    hits[b] = h;
  });
  const std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return box.volume() * static_cast<double>(total) / static_cast<double>(samples);
}

TilingReport tiling_overlap_check(const SelfAffinePair& pair, const std::vector<Vec>& translates, int n,
                                  std::size_t samples, std::uint64_t seed, const Box& box) {
  require_integer_digits(pair);
  if (translates.empty()) throw InvalidArgumentError("translate list is empty");
  if (samples < 1) throw InvalidParameterError("tiling check needs at least one sample");
  if (box.dimension() != pair.dimension()) throw DimensionError("sampling box has wrong dimension");
  for (const auto& t : translates) {
    if (t.size() != pair.dimension()) throw DimensionError("translate has wrong dimension");
    for (double c : t) {
      if (c != std::floor(c)) throw InvalidArgumentError("translates must be integer vectors");
    }
  }
  const CellCovering cover(pair, n);
  TilingReport report;
  report.level = n;
  report.seed = seed;
  report.samples = samples;
  report.box = box;
  for (std::size_t i = 0; i < translates.size(); ++i) {
    for (std::size_t j = i + 1; j < translates.size(); ++j) {
      if (translates[i] == translates[j]) report.duplicate_translates.emplace_back(i, j);
    }
  }
  report.flagged = !report.duplicate_translates.empty();

  auto count_at = [&](const Vec& z, bool stop_at_one) {
    std::size_t c = 0;
    for (const auto& t : translates) {
      if (cover.contains(z - t)) {
        ++c;
        if (stop_at_one) break;
      }
    }
    return c;
  };

  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<std::size_t> covered(blocks, 0);
  parallel_blocks(samples, kSampleBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng = Rng::for_block(seed, b);
    std::size_t h = 0;
    for (std::size_t i = begin; i < end; ++i) h += count_at(sample_in(box, rng), true) > 0 ? 1 : 0;
    covered[b] = h;
  });
  report.coverage = static_cast<double>(std::accumulate(covered.begin(), covered.end(), std::size_t{0})) /
                    static_cast<double>(samples);

  Box region = cover.bounds().translated(translates[0]);
  for (const auto& t : translates) region = bounding_union(region, cover.bounds().translated(t));
  std::vector<double> pair_hits(blocks, 0.0);
  parallel_blocks(samples, kSampleBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng = Rng::for_block(seed ^ 0x9e3779b97f4a7c15ULL, b);
    double h = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double c = static_cast<double>(count_at(sample_in(region, rng), false));
      h += c * (c - 1.0) / 2.0;
    }
    pair_hits[b] = h;
  });
  double total = 0.0;
  for (double h : pair_hits) total += h;
  report.overlap = region.volume() * total / static_cast<double>(samples);
  return report;
}

// ---------------------------------------------------------------------------
// Adjacency graph

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
  std::vector<std::size_t> parent;
};

struct KeyHash {
  std::size_t operator()(const std::vector<long long>& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
    return h;
  }
};

// Primitive integer directions with entries in [-k, k], first nonzero entry
// positive.
std::vector<std::vector<double>> probe_directions(std::size_t d) {
  const int k = d == 2 ? 4 : d == 3 ? 2 : 1;
  std::vector<std::vector<double>> out;
  std::vector<int> v(d, -k);
  while (true) {
    int g = 0;
    std::size_t first = d;
    for (std::size_t i = 0; i < d; ++i) {
      g = std::gcd(g, std::abs(v[i]));
      if (first == d && v[i] != 0) first = i;
    }
    if (g == 1 && v[first] > 0) out.emplace_back(v.begin(), v.end());
    std::size_t i = 0;
    while (i < d && v[i] == k) v[i++] = -k;
    if (i == d) break;
    ++v[i];
  }
  return out;
}

}  // namespace

AdjacencyStats cell_adjacency(const SelfAffinePair& pair, int n, std::size_t budget) {
  const std::size_t count = cloud_size(pair, n);
  if (count > budget) throw ResourceError("adjacency graph exceeds the cell budget");
  const std::size_t d = pair.dimension();
  const Box base = tile_bounding_box(pair);
  std::vector<double> width(d);
  for (std::size_t i = 0; i < d; ++i) width[i] = base.hi[i] - base.lo[i];

  // Width of T along each probe direction, from a fine cloud plus the tail
  // bound: |theta . (t - q)| <= |theta|_1 cell_radius(m).
  const auto dirs = probe_directions(d);
  int m = 0;
  while (m < 12 && cloud_size(pair, m + 1) <= 200'000) ++m;
  std::vector<double> lo(dirs.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(dirs.size(), -std::numeric_limits<double>::infinity());
  for_each_truncation(pair, m, [&](const Vec& p, std::span<const unsigned>) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      double t = 0.0;
      for (std::size_t i = 0; i < d; ++i) t += dirs[k][i] * p[i];
      lo[k] = std::min(lo[k], t);
      hi[k] = std::max(hi[k], t);
    }
  });
  const double tail = cell_radius(pair, m);
  std::vector<double> span(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    double l1 = 0.0;
    for (double c : dirs[k]) l1 += std::abs(c);
    span[k] = hi[k] - lo[k] + 2.0 * l1 * tail;
  }

  // In the coordinates z = A^n x every cell is the same set T + Q_w with
  // Q_w = sum_k A^{n-k} d_{w_k}. Two cells can only meet if Q_w - Q_v lies in
  // the difference body of the enclosure of T: the box test per axis and the
  // slab test per probe direction.
  std::vector<std::vector<double>> q{std::vector<double>(d, 0.0)};
  const auto& A = pair.matrix();
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<double>> next;
    next.reserve(q.size() * pair.digit_count());
    for (const auto& x : q) {
      std::vector<double> ax(d);
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = i; j < d; ++j) s += A(i, j) * x[j];
        ax[i] = s;
      }
      for (const auto& dg : pair.digits()) {
        std::vector<double> y(d);
        for (std::size_t i = 0; i < d; ++i) y[i] = ax[i] + dg[i];
        next.push_back(std::move(y));
      }
    }
    q = std::move(next);
  }

  const double tol = 1e-9;
  auto meet = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs(a[i] - b[i]) > width[i] + tol) return false;
    }
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      double t = 0.0;
      for (std::size_t i = 0; i < d; ++i) t += dirs[k][i] * (a[i] - b[i]);
      if (std::abs(t) > span[k] + tol) return false;
    }
    return true;
  };
  std::unordered_map<std::vector<long long>, std::vector<std::size_t>, KeyHash> buckets;
  std::vector<std::vector<long long>> keys(q.size(), std::vector<long long>(d));
  for (std::size_t c = 0; c < q.size(); ++c) {
    for (std::size_t i = 0; i < d; ++i) keys[c][i] = static_cast<long long>(std::floor(q[c][i] / (width[i] + tol)));
    buckets[keys[c]].push_back(c);
  }
  DisjointSets sets(q.size());
  std::size_t components = q.size();
  std::vector<long long> probe(d);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= 3;
  for (std::size_t c = 0; c < q.size(); ++c) {
    // visit the 3^d neighbouring buckets
    for (std::size_t code0 = 0; code0 < combos; ++code0) {
      std::size_t code = code0;
      for (std::size_t i = 0; i < d; ++i) {
        probe[i] = keys[c][i] + static_cast<long long>(code % 3) - 1;
        code /= 3;
      }
      auto it = buckets.find(probe);
      if (it == buckets.end()) continue;
      for (std::size_t o : it->second) {
        if (o > c && meet(q[c], q[o]) && sets.unite(c, o)) --components;
      }
    }
  }
  return {n, q.size(), components};
}

}  // namespace tiletopo
