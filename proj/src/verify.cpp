#include "tiletopo/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "tiletopo/parallel.hpp"
#include "tiletopo/random.hpp"

namespace tiletopo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kQueryBlock = 1024;

double sup_dist(const double* a, const double* b, std::size_t d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(const std::vector<Vec>& points) : n_(points.size()) {
  if (points.empty()) throw InvalidArgumentError("GridIndex: empty cloud");
  d_ = points.front().size();
  lo_.assign(d_, kInf);
  std::vector<double> hi(d_, -kInf);
  for (const auto& p : points) {
    if (p.size() != d_) throw DimensionError("GridIndex: points differ in dimension");
    for (std::size_t i = 0; i < d_; ++i) {
      lo_[i] = std::min(lo_[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  double span = 0.0;
  for (std::size_t i = 0; i < d_; ++i) span = std::max(span, hi[i] - lo_[i]);
  const double per_axis = std::max(1.0, std::floor(std::pow(static_cast<double>(n_) / 2.0, 1.0 / d_)));
  h_ = span > 0.0 ? span / per_axis : 1.0;
  extent_.resize(d_);
  std::size_t cells = 1;
  for (std::size_t i = 0; i < d_; ++i) {
    extent_[i] = static_cast<long long>(std::floor((hi[i] - lo_[i]) / h_)) + 1;
    cells *= static_cast<std::size_t>(extent_[i]);
  }
  std::vector<std::size_t> keys(n_);
  for (std::size_t k = 0; k < n_; ++k) keys[k] = key(cell_of(points[k]));
  start_.assign(cells + 1, 0);
  for (std::size_t k : keys) ++start_[k + 1];
  std::partial_sum(start_.begin(), start_.end(), start_.begin());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  coords_.resize(n_ * d_);
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t slot = fill[keys[k]]++;
    std::copy(points[k].begin(), points[k].end(), coords_.begin() + static_cast<std::ptrdiff_t>(slot * d_));
  }
}

GridIndex::Cell GridIndex::cell_of(const Vec& q) const {
  Cell c(d_);
  for (std::size_t i = 0; i < d_; ++i) {
    const double f = std::floor((q[i] - lo_[i]) / h_);
    c[i] = static_cast<long long>(std::clamp(f, -1e15, 1e15));
  }
  return c;
}

std::size_t GridIndex::key(const Cell& c) const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < d_; ++i) {
    const long long ci = std::clamp<long long>(c[i], 0, extent_[i] - 1);
    k = k * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(ci);
  }
  return k;
}

void GridIndex::scan_ring(const Vec& q, const Cell& qc, long long r, std::size_t axis, bool on_shell, Cell& c,
                          double& best) const {
  if (axis == d_) {
    if (!on_shell) return;
    const std::size_t k = key(c);
    const double* qd = q.data().data();
    for (std::size_t s = start_[k]; s < start_[k + 1]; ++s) best = std::min(best, sup_dist(qd, &coords_[s * d_], d_));
    return;
  }
  const long long lo = std::max<long long>(qc[axis] - r, 0);
  const long long hi = std::min<long long>(qc[axis] + r, extent_[axis] - 1);
  if (lo > hi) return;
  const bool last = axis + 1 == d_;
  for (long long v = lo; v <= hi; ++v) {
    const bool edge = v == qc[axis] - r || v == qc[axis] + r;
    if (last && !on_shell && !edge) {
      // only the two ends of the last axis can complete the shell
      v = qc[axis] + r - 1;
      continue;
    }
    c[axis] = v;
    scan_ring(q, qc, r, axis + 1, on_shell || edge, c, best);
  }
}

double GridIndex::nearest_distance(const Vec& q) const {
  if (q.size() != d_) throw DimensionError("GridIndex: query dimension mismatch");
  const Cell qc = cell_of(q);
  long long r = 0;
  for (std::size_t i = 0; i < d_; ++i) {
    if (qc[i] < 0) r = std::max(r, -qc[i]);
    if (qc[i] >= extent_[i]) r = std::max(r, qc[i] - extent_[i] + 1);
  }
  long long rmax = 0;
  for (std::size_t i = 0; i < d_; ++i) {
    rmax = std::max({rmax, std::abs(qc[i]), std::abs(qc[i] - extent_[i] + 1)});
  }
  double best = kInf;
  Cell c(d_);
  for (; r <= rmax; ++r) {
    scan_ring(q, qc, r, 0, false, c, best);
    // unscanned points sit at least r full cells away
    if (best <= (static_cast<double>(r) - 0.01) * h_) break;
  }
  return best;
}

double directed_hausdorff(const std::vector<Vec>& from, const GridIndex& to) {
  if (from.empty()) throw InvalidArgumentError("hausdorff: empty cloud");
  const std::size_t blocks = (from.size() + kQueryBlock - 1) / kQueryBlock;
  std::vector<double> part(blocks, 0.0);
  parallel_blocks(from.size(), kQueryBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    double m = 0.0;
    for (std::size_t i = begin; i < end; ++i) m = std::max(m, to.nearest_distance(from[i]));
    part[b] = m;
  });
  return *std::max_element(part.begin(), part.end());
}

double hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) throw InvalidArgumentError("hausdorff: empty cloud");
  if (a.front().size() != b.front().size()) throw DimensionError("hausdorff: clouds differ in dimension");
  const GridIndex ia(a), ib(b);
  return std::max(directed_hausdorff(a, ib), directed_hausdorff(b, ia));
}

// ---------------------------------------------------------------------------
// Digit cloud branch and bound

namespace {

class DigitTree {
 public:
  DigitTree(const SelfAffinePair& pair, int n)
      : n_(n), d_(pair.dimension()), m_(pair.digit_count()), terms_(expansion_terms<double>(pair, n)) {
    tail_lo_.assign(static_cast<std::size_t>(n) + 1, std::vector<double>(d_, 0.0));
    tail_hi_ = tail_lo_;
    double scale = 1.0;
    for (int k = n - 1; k >= 0; --k) {
      for (std::size_t j = 0; j < d_; ++j) {
        double lo = kInf, hi = -kInf;
        for (const auto& t : terms_[k]) {
          lo = std::min(lo, t[j]);
          hi = std::max(hi, t[j]);
        }
        tail_lo_[k][j] = tail_lo_[k + 1][j] + lo;
        tail_hi_[k][j] = tail_hi_[k + 1][j] + hi;
        scale = std::max({scale, std::abs(tail_lo_[k][j]), std::abs(tail_hi_[k][j])});
      }
    }
    margin_ = 1e-12 * scale * (n + 1);
  }

  int levels() const { return n_; }
  std::size_t dimension() const { return d_; }
  std::size_t digits() const { return m_; }

  // partial sum of the first k + 1 terms from the first k
  void child(int k, std::size_t digit, const double* partial, double* out) const {
    const Vec& t = terms_[k][digit];
    for (std::size_t j = 0; j < d_; ++j) out[j] = partial[j] + t[j];
  }

  // sup distance from q to the box holding every completion of a depth-k node
  double lower_bound(int k, const double* partial, const Vec& q) const {
    double m = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      const double lo = partial[j] + tail_lo_[k][j] - margin_;
      const double hi = partial[j] + tail_hi_[k][j] + margin_;
      const double x = q[j];
      m = std::max(m, x < lo ? lo - x : (x > hi ? x - hi : 0.0));
    }
    return m;
  }

  // center and sup radius of that box
  double center(int k, const double* partial, double* out) const {
    double r = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      out[j] = partial[j] + 0.5 * (tail_lo_[k][j] + tail_hi_[k][j]);
      r = std::max(r, 0.5 * (tail_hi_[k][j] - tail_lo_[k][j]));
    }
    return r + margin_;
  }

 private:
  int n_;
  std::size_t d_;
  std::size_t m_;
  std::vector<std::vector<Vec>> terms_;
  std::vector<std::vector<double>> tail_lo_, tail_hi_;
  double margin_ = 0.0;
};

// min over the cloud of ||q - c||_inf
void nearest_leaf(const DigitTree& tree, int k, const std::vector<double>& partial, const Vec& q, double& best) {
  const std::size_t d = tree.dimension();
  if (k == tree.levels()) {
    best = std::min(best, sup_dist(q.data().data(), partial.data(), d));
    return;
  }
  const std::size_t m = tree.digits();
  std::vector<std::pair<double, std::size_t>> order(m);
  std::vector<double> kids(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    tree.child(k, i, partial.data(), &kids[i * d]);
    order[i] = {tree.lower_bound(k + 1, &kids[i * d], q), i};
  }
  std::sort(order.begin(), order.end());
  std::vector<double> next(d);
  for (const auto& [lb, i] : order) {
    if (lb >= best) break;
    std::copy(kids.begin() + static_cast<std::ptrdiff_t>(i * d), kids.begin() + static_cast<std::ptrdiff_t>((i + 1) * d),
              next.begin());
    nearest_leaf(tree, k + 1, next, q, best);
  }
}

void atomic_max(std::atomic<double>& a, double v) {
  double cur = a.load();
  while (v > cur && !a.compare_exchange_weak(cur, v)) {
  }
}

// max over the cloud of dist(c, indexed samples)
void farthest_leaf(const DigitTree& tree, int k, const std::vector<double>& partial, const GridIndex& index,
                   std::atomic<double>& best) {
  const std::size_t d = tree.dimension();
  if (k == tree.levels()) {
    atomic_max(best, index.nearest_distance(Vec(partial)));
    return;
  }
  const std::size_t m = tree.digits();
  std::vector<std::pair<double, std::size_t>> order(m);
  std::vector<double> kids(m * d), mid(d);
  for (std::size_t i = 0; i < m; ++i) {
    tree.child(k, i, partial.data(), &kids[i * d]);
    const double radius = tree.center(k + 1, &kids[i * d], mid.data());
    order[i] = {-(index.nearest_distance(Vec(mid)) + radius), i};
  }
  std::sort(order.begin(), order.end());
  std::vector<double> next(d);
  for (const auto& [neg_ub, i] : order) {
    if (-neg_ub <= best.load()) break;
    std::copy(kids.begin() + static_cast<std::ptrdiff_t>(i * d), kids.begin() + static_cast<std::ptrdiff_t>((i + 1) * d),
              next.begin());
    farthest_leaf(tree, k + 1, next, index, best);
  }
}

}  // namespace

double hausdorff_to_digit_cloud(const SelfAffinePair& pair, int n, const std::vector<Vec>& cloud) {
  if (cloud.empty()) throw InvalidArgumentError("hausdorff: empty cloud");
  if (n < 0) throw InvalidParameterError("hausdorff_to_digit_cloud: level must be >= 0");
  const std::size_t d = pair.dimension();
  for (const auto& p : cloud) {
    if (p.size() != d) throw DimensionError("hausdorff_to_digit_cloud: cloud and pair differ in dimension");
  }
  const DigitTree tree(pair, n);
  const std::vector<double> root(d, 0.0);

  const std::size_t blocks = (cloud.size() + kQueryBlock - 1) / kQueryBlock;
  std::vector<double> part(blocks, 0.0);
  parallel_blocks(cloud.size(), kQueryBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    double m = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double best = kInf;
      nearest_leaf(tree, 0, root, cloud[i], best);
      m = std::max(m, best);
    }
    part[b] = m;
  });
  const double to_digits = *std::max_element(part.begin(), part.end());

  const GridIndex index(cloud);
  std::atomic<double> best{0.0};
  // split the tree at a depth with enough subtrees to share among workers
  int split = 0;
  std::size_t tasks = 1;
  while (split < n && tasks < 256) {
    tasks *= tree.digits();
    ++split;
  }
  parallel_blocks(tasks, 1, [&](std::size_t, std::size_t begin, std::size_t) {
    std::vector<double> partial(d, 0.0), next(d);
    std::size_t code = begin;
    std::vector<std::size_t> word(static_cast<std::size_t>(split));
    for (int k = split; k-- > 0;) {
      word[static_cast<std::size_t>(k)] = code % tree.digits();
      code /= tree.digits();
    }
    for (int k = 0; k < split; ++k) {
      tree.child(k, word[static_cast<std::size_t>(k)], partial.data(), next.data());
      partial.swap(next);
    }
    farthest_leaf(tree, split, partial, index, best);
  });
  return std::max(to_digits, best.load());
}

// ---------------------------------------------------------------------------
// Reports

double VerificationReport::statistic(const std::string& name) const {
  for (const auto& [k, v] : statistics) {
    if (k == name) return v;
  }
  throw InvalidArgumentError("report has no statistic '" + name + "'");
}

std::size_t VerificationReport::count(const std::string& name) const {
  for (const auto& [k, v] : counts) {
    if (k == name) return v;
  }
  throw InvalidArgumentError("report has no count '" + name + "'");
}

std::string VerificationReport::text() const {
  std::ostringstream os;
  os << "check=" << check << " status=" << (passed ? "pass" : "fail") << " seed=" << seed << '\n';
  for (const auto& [k, v] : parameters) os << "# param " << k << '=' << v << '\n';
  for (const auto& [k, v] : counts) os << "# count " << k << '=' << v << '\n';
  for (const auto& [k, v] : statistics) os << "# stat " << k << '=' << fmt17(v) << '\n';
  for (const auto& [k, v] : tolerances) os << "# tolerance " << k << '=' << fmt17(v) << '\n';
  return os.str();
}

std::string VerificationReport::key_values() const {
  std::ostringstream os;
  os << check << ".passed=" << (passed ? 1 : 0) << '\n' << check << ".seed=" << seed << '\n';
  for (const auto& [k, v] : parameters) os << check << ".param." << k << '=' << v << '\n';
  for (const auto& [k, v] : counts) os << check << ".count." << k << '=' << v << '\n';
  for (const auto& [k, v] : statistics) os << check << ".stat." << k << '=' << fmt17(v) << '\n';
  for (const auto& [k, v] : tolerances) os << check << ".tolerance." << k << '=' << fmt17(v) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Checks

namespace {

constexpr std::size_t kPairBlock = 512;

Vec random_in_prism(const Prism& region, Rng& rng, double collar = 0.0) {
  std::vector<double> w(region.dimension() - 1);
  for (auto& c : w) c = rng.uniform(-0.5 + collar, 0.5 - collar);
  return region.point(Vec(std::move(w)), rng.uniform(collar, 1.0 - collar));
}

void require_region(const IterationMap& map, const Prism& region) {
  if (region.dimension() != map.root().dimension()) throw DimensionError("region and map differ in dimension");
}

}  // namespace

VerificationReport check_injectivity(const IterationMap& map, const Prism& region, const InjectivityOptions& opt) {
  if (opt.pairs < 1) throw InvalidParameterError("check_injectivity needs pairs >= 1");
  if (!(opt.delta > 0.0)) throw InvalidParameterError("check_injectivity needs delta > 0");
  require_region(map, region);
  constexpr int kBands = 4;
  const std::size_t blocks = (opt.pairs + kPairBlock - 1) / kPairBlock;
  struct Part {
    double min_sep = kInf;
    double min_ratio = kInf;
    std::size_t coincidences = 0;
    std::size_t rejected = 0;
    std::array<double, kBands> band{kInf, kInf, kInf, kInf};
  };
  std::vector<Part> parts(blocks);
  const std::size_t d = region.dimension();
  parallel_blocks(opt.pairs, kPairBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng = Rng::for_block(opt.seed, b);
    Part& p = parts[b];
    for (std::size_t i = begin; i < end; ++i) {
      Vec x, xp;
      double sep = 0.0;
      while (true) {
        x = random_in_prism(region, rng);
        sep = opt.delta * std::exp2(rng.uniform() * kBands);
        std::vector<double> e(d);
        for (auto& c : e) c = rng.uniform(-sep, sep);
        e[rng.below(d)] = rng.uniform() < 0.5 ? -sep : sep;
        xp = x + Vec(std::move(e));
        if (region.contains(xp)) break;
        ++p.rejected;
      }
      const double image = norm_inf(map.evaluate(x) - map.evaluate(xp));
      const int band = std::clamp(static_cast<int>(std::floor(std::log2(sep / opt.delta))), 0, kBands - 1);
      p.band[band] = std::min(p.band[band], image);
      p.min_sep = std::min(p.min_sep, image);
      p.min_ratio = std::min(p.min_ratio, image / sep);
      if (image <= opt.coincidence) ++p.coincidences;
    }
  });
  Part total;
  for (const auto& p : parts) {
    total.min_sep = std::min(total.min_sep, p.min_sep);
    total.min_ratio = std::min(total.min_ratio, p.min_ratio);
    total.coincidences += p.coincidences;
    total.rejected += p.rejected;
    for (int k = 0; k < kBands; ++k) total.band[k] = std::min(total.band[k], p.band[k]);
  }
  VerificationReport r;
  r.check = "injectivity";
  r.seed = opt.seed;
  r.parameters = {{"depth", std::to_string(map.depth())}, {"delta", fmt17(opt.delta)}};
  r.counts = {{"pairs", opt.pairs}, {"coincidences", total.coincidences}, {"rejected_draws", total.rejected}};
  r.statistics = {{"min_image_separation", total.min_sep}, {"min_separation_ratio", total.min_ratio}};
  for (int k = 0; k < kBands; ++k) {
    r.statistics.emplace_back("min_image_separation_band" + std::to_string(k), total.band[k]);
  }
  r.tolerances = {{"coincidence", opt.coincidence}};
  r.passed = total.coincidences == 0;
  return r;
}

namespace {

bool same_prism(const Prism& a, const Prism& b) {
  return a.bottom_height == b.bottom_height && a.height == b.height && a.bottom_center == b.bottom_center;
}

bool in_closed_window(const Prism& p, const PathProfile<double>& profile, double y) {
  const double t = (y - p.bottom_height) / p.height * profile.height();
  for (int k = 1; k < profile.layers(); ++k) {
    if (std::abs(t - profile.level(k)) <= profile.epsilon()) return true;
  }
  return false;
}

struct PairOutcome {
  bool eligible = false;
  std::size_t steps = 0;
  std::size_t violations = 0;
  double max_drop = 0.0;
};

PairOutcome boundary_pair(const IterationMap& map, const Prism& region, const HeightOptions& opt, Rng& rng) {
  const std::size_t d = region.dimension();
  std::vector<double> w(d - 1);
  for (auto& c : w) c = rng.uniform(-0.5, 0.5);
  w[rng.below(d - 1)] = rng.uniform() < 0.5 ? -0.5 : 0.5;
  const double ta = rng.uniform(opt.collar, 1.0 - opt.collar);
  const double tb = rng.uniform(opt.collar, 1.0 - opt.collar);
  const Vec wv(w);
  const auto a = map.trajectory(region.point(wv, ta));
  const auto b = map.trajectory(region.point(wv, tb));
  PairOutcome out;
  const double tol = opt.boundary_tol;
  for (std::size_t m = 0; m + 1 < a.size(); ++m) {
    const Prism& p = a[m].prism;
    if (!a[m].in_slab || !same_prism(p, b[m].prism) || !same_prism(a[m + 1].prism, b[m + 1].prism)) continue;
    if (!p.on_vertical_boundary(a[m].point, tol) || !p.on_vertical_boundary(b[m].point, tol)) continue;
    if (!a[m + 1].prism.on_vertical_boundary(a[m + 1].point, tol) ||
        !b[m + 1].prism.on_vertical_boundary(b[m + 1].point, tol)) {
      continue;
    }
    const auto [ha, ya] = split_coords(a[m].point);
    const auto [hb, yb] = split_coords(b[m].point);
    if (norm_inf((ha - p.center_at(ya)) - (hb - p.center_at(yb))) > tol) continue;
    const auto& profile = map.profiles()[m];
    if (in_closed_window(p, profile, ya) || in_closed_window(p, profile, yb)) continue;
    out.eligible = true;
    ++out.steps;
    const double before = std::abs(ya - yb);
    const double after = std::abs(a[m + 1].point[d - 1] - b[m + 1].point[d - 1]);
    if (after < before - opt.slack) {
      ++out.violations;
      out.max_drop = std::max(out.max_drop, before - after);
    }
  }
  return out;
}

}  // namespace

VerificationReport check_height_properties(const IterationMap& map, const Prism& region, const HeightOptions& opt) {
  if (map.depth() < 2) throw InvalidParameterError("check_height_properties needs depth >= 2");
  if (opt.samples < 1) throw InvalidParameterError("check_height_properties needs samples >= 1");
  require_region(map, region);
  const std::size_t d = region.dimension();

  // (a) stabilization of interior heights
  const std::size_t blocks = (opt.samples + kPairBlock - 1) / kPairBlock;
  std::vector<int> max_index(blocks, 0);
  std::vector<double> sum_index(blocks, 0.0);
  parallel_blocks(opt.samples, kPairBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng = Rng::for_block(opt.seed, b);
    for (std::size_t i = begin; i < end; ++i) {
      const auto steps = map.trajectory(random_in_prism(region, rng, opt.collar));
      int last = 0;
      for (std::size_t m = 1; m < steps.size(); ++m) {
        if (steps[m].point[d - 1] != steps[m - 1].point[d - 1]) last = static_cast<int>(m);
      }
      const int index = std::max(1, last);
      max_index[b] = std::max(max_index[b], index);
      sum_index[b] += index;
    }
  });
  const int stab = *std::max_element(max_index.begin(), max_index.end());
  const double mean_index = std::accumulate(sum_index.begin(), sum_index.end(), 0.0) / opt.samples;

  // (b) boundary pairs, drawn in rounds until enough are eligible
  constexpr std::size_t kRound = 64 * kPairBlock;
  const std::size_t max_candidates = 1000 * opt.samples;
  std::size_t candidates = 0, eligible = 0, steps = 0, violations = 0;
  double max_drop = 0.0;
  std::uint64_t round = 0;
  while (eligible < opt.samples && candidates < max_candidates) {
    std::vector<PairOutcome> outcomes(kRound);
    parallel_blocks(kRound, kPairBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
      Rng rng = Rng::for_block(opt.seed ^ 0x5bd1e995u, round * (kRound / kPairBlock) + b + (1ull << 40));
      for (std::size_t i = begin; i < end; ++i) outcomes[i] = boundary_pair(map, region, opt, rng);
    });
    for (const auto& o : outcomes) {
      if (eligible == opt.samples || candidates == max_candidates) break;
      ++candidates;
      if (!o.eligible) continue;
      ++eligible;
      steps += o.steps;
      violations += o.violations;
      max_drop = std::max(max_drop, o.max_drop);
    }
    ++round;
  }

  VerificationReport r;
  r.check = "height_properties";
  r.seed = opt.seed;
  r.parameters = {{"depth", std::to_string(map.depth())}, {"collar", fmt17(opt.collar)}};
  r.counts = {{"interior_samples", opt.samples},
              {"stabilization_index", static_cast<std::size_t>(stab)},
              {"boundary_pairs", eligible},
              {"boundary_candidates", candidates},
              {"boundary_steps", steps},
              {"monotonicity_violations", violations}};
  r.statistics = {{"mean_stabilization_index", mean_index}, {"max_height_drop", max_drop}};
  r.tolerances = {{"stabilization_limit", static_cast<double>(opt.stabilization_limit)}, {"slack", opt.slack}};
  r.passed = stab <= opt.stabilization_limit && stab < map.depth() && eligible == opt.samples && violations == 0;
  return r;
}

VerificationReport check_convergence(const SelfAffinePair& pair, const Prism& prism, const PathProfile<double>& profile,
                                     int depth, int level, const ConvergenceOptions& opt) {
  if (depth < 0 || level < 0) throw InvalidParameterError("check_convergence needs depth, level >= 0");
  if (prism.dimension() != pair.dimension()) throw DimensionError("check_convergence: prism and pair differ in dimension");
  if (opt.horizontal_samples < 2 || opt.vertical_samples < 2) {
    throw InvalidParameterError("check_convergence needs at least 2 samples per axis");
  }
  const std::size_t cloud = cloud_size(pair, level);
  if (cloud > opt.cloud_budget) {
    throw ResourceError("level-" + std::to_string(level) + " cloud has " + std::to_string(cloud) +
                        " points, budget is " + std::to_string(opt.cloud_budget));
  }
  const std::size_t h = pair.dimension() - 1;
  double total = static_cast<double>(opt.vertical_samples) * std::pow(static_cast<double>(opt.horizontal_samples), h);
  if (total > static_cast<double>(opt.sample_budget)) throw ResourceError("check_convergence: sample grid exceeds budget");
  const auto map = compose_h(prism, pair, profile, depth);
  const auto n = static_cast<std::size_t>(total);
  std::vector<Vec> image(n);
  parallel_blocks(n, kQueryBlock, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> w(h);
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t code = i;
      const double tau = static_cast<double>(code % opt.vertical_samples) / (opt.vertical_samples - 1);
      code /= opt.vertical_samples;
      for (std::size_t j = 0; j < h; ++j) {
        w[j] = static_cast<double>(code % opt.horizontal_samples) / (opt.horizontal_samples - 1) - 0.5;
        code /= opt.horizontal_samples;
      }
      image[i] = map.evaluate(prism.point(Vec(w), tau));
    }
  });
  const double dh = hausdorff_to_digit_cloud(pair, level, image);
  VerificationReport r;
  r.check = "convergence";
  r.parameters = {{"depth", std::to_string(depth)}, {"level", std::to_string(level)}};
  r.counts = {{"samples", n}, {"cloud_points", cloud}};
  r.statistics = {{"hausdorff", dh},
                  {"horizontal_spacing", 1.0 / (opt.horizontal_samples - 1)},
                  {"vertical_spacing", prism.height / (opt.vertical_samples - 1)}};
  r.tolerances = {{"hausdorff", opt.tolerance}};
  r.passed = dh <= opt.tolerance;
  return r;
}

}  // namespace tiletopo
