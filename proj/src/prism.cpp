#include "tiletopo/prism.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tiletopo/tile.hpp"

namespace tiletopo {

// ---------------------------------------------------------------------------
// PathProfile

template <class T>
PathProfile<T>::PathProfile(int r, T b, T epsilon, std::vector<BasicVec<T>> u)
    : r_(r), b_(std::move(b)), eps_(std::move(epsilon)), u_(std::move(u)) {
  if (r_ < 2) throw InvalidParameterError("profile needs r >= 2, got " + std::to_string(r_));
  if constexpr (is_exact_v<T>) {
    b_.canonicalize();
    eps_.canonicalize();
  }
  if (!(b_ > T(0))) throw InvalidParameterError("profile height b must be positive");
  if (!(eps_ > T(0)) || !(eps_ * T(2 * r_) < b_)) {
    throw InvalidParameterError("profile epsilon must satisfy 0 < epsilon < b/(2r)");
  }
  if (u_.size() != static_cast<std::size_t>(r_ - 1)) {
    throw InvalidParameterError("profile needs r - 1 = " + std::to_string(r_ - 1) + " offsets, got " +
                                std::to_string(u_.size()));
  }
  const std::size_t h = u_.front().size();
  if (h == 0) throw DimensionError("profile offsets must have d - 1 >= 1 components");
  v_.reserve(u_.size() + 1);
  v_.push_back(BasicVec<T>::zeros(h));
  for (std::size_t k = 0; k < u_.size(); ++k) {
    if (u_[k].size() != h) throw DimensionError("profile offsets differ in length");
    if (!(norm_inf(u_[k]) < T(1))) {
      throw InvalidParameterError("profile offset u_" + std::to_string(k + 1) + " must lie in (-1,1)^{d-1}");
    }
    v_.push_back(v_.back() + u_[k]);
  }
}

template <class T>
T PathProfile<T>::flatten_halfwidth() const {
  T twice = T(2) * eps_;
  T half_layer = T(b_ / T(2 * r_));
  return twice < half_layer ? twice : half_layer;
}

namespace {

template <class T>
void check_height(const PathProfile<T>& profile, const T& y) {
  if (y < T(0) || y > profile.height()) throw DomainError("height outside [0, b]");
}

// Window k with |y - y_k| <= epsilon, or 0.
template <class T>
int window_containing(const PathProfile<T>& profile, const T& y) {
  for (int k = 1; k < profile.layers(); ++k) {
    T dy = y - profile.level(k);
    if (abs_of(dy) <= profile.epsilon()) return k;
  }
  return 0;
}

template <class T>
int plateau_index(const PathProfile<T>& profile, const T& y) {
  int k = 0;
  while (k + 1 < profile.layers() && y > profile.level(k + 1)) ++k;
  return k;
}

}  // namespace

template <class T>
BasicVec<T> path_x(const PathProfile<T>& profile, const T& y) {
  check_height(profile, y);
  const int k = window_containing(profile, y);
  if (k == 0) return profile.v(plateau_index(profile, y));
  T weight = T((profile.epsilon() + y - profile.level(k)) / (T(2) * profile.epsilon()));
  return weight * profile.u(k) + profile.v(k - 1);
}

template <class T>
BasicVec<T> path_rho(const PathProfile<T>& profile, const T& y) {
  check_height(profile, y);
  const std::size_t h = profile.horizontal_dimension();
  const int k = window_containing(profile, y);
  if (k == 0) return BasicVec<T>::ones(h);
  T frac = T(abs_of(T(y - profile.level(k))) / profile.epsilon());
  std::vector<T> r(h);
  for (std::size_t j = 0; j < h; ++j) {
    T plus = abs_of(profile.u(k)[j]);
    r[j] = frac * plus + T(1) - plus;
  }
  return BasicVec<T>(std::move(r));
}

template <class T>
T horizontal_constant(const PathProfile<T>& profile) {
  T c(0);
  for (const auto& u : profile.offsets()) c += norm_inf(u);
  return c;
}

template <class T>
BoundaryFlags partition_boundary(const BasicVec<T>& u, const BasicVec<T>& x) {
  u.check_same(x, "partition_boundary");
  if (u.empty()) throw DimensionError("partition_boundary needs d - 1 >= 1");
  bool nonzero = false;
  for (const T& c : u) {
    if (!(abs_of(c) < T(1))) throw InvalidParameterError("partition_boundary: u must lie in (-1,1)^{d-1}");
    if (sign_of(c) != 0) nonzero = true;
  }
  if (!nonzero) throw InvalidParameterError("partition_boundary: u must be nonzero");
  const T half = T(1) / T(2);
  bool on_face = false;
  for (const T& c : x) {
    if (abs_of(c) > half) throw DomainError("partition_boundary: x is outside U");
    if (abs_of(c) == half) on_face = true;
  }
  if (!on_face) throw DomainError("partition_boundary: x is not on the boundary of U");

  BoundaryFlags f;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const int su = sign_of(u[j]);
    const int twice_x = abs_of(x[j]) == half ? sign_of(x[j]) : 0;
    if (twice_x == 0) continue;
    if (su != 0 && twice_x == su) f.plus = true;
    if (su != 0 && -twice_x == su) f.minus = true;
    if (su == 0) f.updown = true;
  }
  return f;
}

template class PathProfile<double>;
template class PathProfile<Rational>;
template Vec path_x(const PathProfile<double>&, const double&);
template QVec path_x(const PathProfile<Rational>&, const Rational&);
template Vec path_rho(const PathProfile<double>&, const double&);
template QVec path_rho(const PathProfile<Rational>&, const Rational&);
template double horizontal_constant(const PathProfile<double>&);
template Rational horizontal_constant(const PathProfile<Rational>&);
template BoundaryFlags partition_boundary(const Vec&, const Vec&);
template BoundaryFlags partition_boundary(const QVec&, const QVec&);

// ---------------------------------------------------------------------------
// Prism

Vec Prism::center_at(double y) const {
  const double tau = (y - bottom_height) / height;
  return bottom_center + tau * slant;
}

Vec Prism::point(const Vec& w, double tau) const {
  return (bottom_center + tau * slant + w).append(bottom_height + tau * height);
}

bool Prism::contains(const Vec& x, double tol) const {
  if (x.size() != dimension()) throw DimensionError("Prism::contains: dimension mismatch");
  const double y = x[x.size() - 1];
  if (y < bottom_height - tol || y > top_height() + tol) return false;
  const double tau = std::clamp((y - bottom_height) / height, 0.0, 1.0);
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    if (std::abs(x[j] - bottom_center[j] - tau * slant[j]) > 0.5 + tol) return false;
  }
  return true;
}

bool Prism::on_vertical_boundary(const Vec& x, double tol) const {
  if (x.size() != dimension()) throw DimensionError("Prism::on_vertical_boundary: dimension mismatch");
  const double y = x[x.size() - 1];
  if (y <= bottom_height + tol || y >= top_height() - tol) return false;
  const double tau = (y - bottom_height) / height;
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    m = std::max(m, std::abs(x[j] - bottom_center[j] - tau * slant[j]));
  }
  return std::abs(m - 0.5) <= tol;
}

namespace {

void require_product(const SelfAffinePair& pair) {
  if (!pair.is_product()) {
    throw UnsupportedConfigurationError("prism construction needs a standard or layered digit set");
  }
}

// e_v = (hbar + a_v, v) with hbar_j = (|p_j| - 1)/2: the mean digit of layer v.
QVec layer_shift(const SelfAffinePair& pair, unsigned v) {
  const std::size_t d = pair.dimension();
  std::vector<Rational> e(d);
  const auto& offsets = pair.layer_offsets_exact();
  for (std::size_t j = 0; j + 1 < d; ++j) {
    e[j] = Rational(std::abs(pair.p()[j]) - 1, 2);
    if (!offsets.empty()) e[j] += offsets[v][j];
  }
  e[d - 1] = v;
  return QVec(std::move(e));
}

UpperTriangular<Rational> minus_identity(const UpperTriangular<Rational>& m) {
  UpperTriangular<Rational> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j) r.set(i, j, i == j ? Rational(m(i, j) - 1) : m(i, j));
  }
  return r;
}

UpperTriangular<Rational> square(const UpperTriangular<Rational>& m) {
  UpperTriangular<Rational> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j) {
      Rational s(0);
      for (std::size_t k = i; k <= j; ++k) s += m(i, k) * m(k, j);
      r.set(i, j, s);
    }
  }
  return r;
}

// Center map M_v(c) = A^{-1}(c + e_v).
Vec center_map(const SelfAffinePair& pair, const std::vector<Vec>& shifts, unsigned v, const Vec& c) {
  return pair.apply_inverse(c + shifts[v]);
}

Prism prism_between(const Vec& a, const Vec& b) {
  const Vec& lo = a[a.size() - 1] <= b[b.size() - 1] ? a : b;
  const Vec& hi = &lo == &a ? b : a;
  auto [lh, ly] = split_coords(lo);
  auto [hh, hy] = split_coords(hi);
  return Prism{lh, ly, hh - lh, hy - ly};
}

std::pair<Vec, Vec> root_endpoints(const SelfAffinePair& pair) {
  require_product(pair);
  const unsigned r = pair.layer_count();
  const auto& a = pair.matrix_exact();
  QVec bottom, top;
  if (pair.vertical_scale() > 0) {
    bottom = minus_identity(a).solve(layer_shift(pair, 0));
    top = minus_identity(a).solve(layer_shift(pair, r - 1));
  } else {
    bottom = minus_identity(square(a)).solve(layer_shift(pair, 0) + a.multiply(layer_shift(pair, r - 1)));
    top = pair.apply_inverse(bottom + layer_shift(pair, 0));
  }
  return {to_double(bottom), to_double(top)};
}

}  // namespace

Prism root_prism(const SelfAffinePair& pair) {
  auto [bottom, top] = root_endpoints(pair);
  return prism_between(bottom, top);
}

std::vector<Prism> ifs_prisms(const SelfAffinePair& pair, int level) {
  if (level < 0) throw InvalidParameterError("ifs_prisms: level must be >= 0");
  const unsigned r = pair.layer_count();
  double count = std::pow(static_cast<double>(r), level);
  if (count > static_cast<double>(kDefaultPointBudget)) {
    throw ResourceError("ifs_prisms: " + std::to_string(static_cast<long long>(count)) + " prisms exceed the budget");
  }
  std::vector<Vec> shifts;
  for (unsigned v = 0; v < r; ++v) shifts.push_back(to_double(layer_shift(pair, v)));
  std::vector<std::pair<Vec, Vec>> segs{root_endpoints(pair)};
  for (int l = 0; l < level; ++l) {
    std::vector<std::pair<Vec, Vec>> next;
    next.reserve(segs.size() * r);
    for (const auto& s : segs) {
      for (unsigned v = 0; v < r; ++v) {
        next.emplace_back(center_map(pair, shifts, v, s.first), center_map(pair, shifts, v, s.second));
      }
    }
    segs = std::move(next);
  }
  std::vector<Prism> out;
  out.reserve(segs.size());
  for (const auto& s : segs) out.push_back(prism_between(s.first, s.second));
  std::sort(out.begin(), out.end(),
            [](const Prism& x, const Prism& y) { return x.bottom_height < y.bottom_height; });
  return out;
}

PathProfile<double> default_profile(const SelfAffinePair& pair) {
  const auto children = ifs_prisms(pair, 1);
  const int r = static_cast<int>(children.size());
  std::vector<Vec> u;
  for (int k = 1; k < r; ++k) u.push_back(children[k].bottom_center - children[k - 1].top_center());
  return PathProfile<double>(r, 1.0, 1.0 / (4.0 * r), std::move(u));
}

PathProfile<double> level_profile(const SelfAffinePair& pair, const PathProfile<double>& root, int level) {
  if (level < 0) throw InvalidParameterError("level_profile: level must be >= 0");
  if (level == 0) return root;
  const int r = root.layers();
  const auto scales = pair.horizontal_scales();
  if (scales.size() != root.horizontal_dimension()) throw DimensionError("level_profile: dimension mismatch");
  const bool flip = pair.vertical_scale() < 0 && level % 2 == 1;
  std::vector<Vec> u;
  for (int k = 1; k < r; ++k) {
    const Vec& src = flip ? root.u(r - k) : root.u(k);
    std::vector<double> c(src.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      c[j] = src[j] / std::pow(static_cast<double>(scales[j]), level);
      if (flip) c[j] = -c[j];
    }
    u.emplace_back(std::move(c));
  }
  return PathProfile<double>(r, root.height(), root.epsilon(), std::move(u));
}

// ---------------------------------------------------------------------------
// OneIteration

OneIteration::OneIteration(Prism prism, PathProfile<double> profile)
    : prism_(std::move(prism)), profile_(std::move(profile)) {
  if (prism_.bottom_center.size() != profile_.horizontal_dimension()) {
    throw DimensionError("OneIteration: prism and profile dimensions differ");
  }
  if (!(prism_.height > 0.0)) throw InvalidParameterError("OneIteration: prism height must be positive");
  const int r = profile_.layers();
  const double b = profile_.height();
  lambda_ = (-1.0 / b) * profile_.v(r - 1);
  const Vec child_slant = (b / r) * lambda_ + (1.0 / r) * prism_.slant;
  children_.reserve(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) {
    const double t = profile_.level(k);
    Vec c = prism_.bottom_center + profile_.v(k) + t * lambda_ + (t / b) * prism_.slant;
    children_.push_back(Prism{c, prism_.bottom_height + prism_.height * k / r, child_slant, prism_.height / r});
  }
}

std::size_t OneIteration::child_index(double y) const {
  const int r = profile_.layers();
  const double q = std::floor((y - prism_.bottom_height) / prism_.height * r);
  return static_cast<std::size_t>(std::clamp(q, 0.0, static_cast<double>(r - 1)));
}

int OneIteration::window_of(double t) const {
  const int r = profile_.layers();
  const double b = profile_.height();
  const int k = static_cast<int>(std::lround(t * r / b));
  if (k < 1 || k >= r) return 0;
  return std::abs(t - profile_.level(k)) < profile_.flatten_halfwidth() ? k : 0;
}

double OneIteration::flatten_surface(int k, const std::vector<double>& w) const {
  const Vec& u = profile_.u(k);
  const Vec& lower = profile_.v(k - 1);
  const Vec& upper = profile_.v(k);
  double a = 0.0, b = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] == 0.0) continue;
    const double mag = std::abs(u[j]);
    const double z = w[j] - lower[j];
    const double zu = w[j] - upper[j];
    const double dist_lower = u[j] > 0 ? z + 0.5 : 0.5 - z;
    const double dist_upper = u[j] > 0 ? 0.5 - zu : zu + 0.5;
    a = std::max(a, std::clamp(1.0 - dist_lower / mag, 0.0, 1.0));
    b = std::max(b, std::clamp(1.0 - dist_upper / mag, 0.0, 1.0));
  }
  if (a == 0.0 && b == 0.0) return profile_.level(k);
  return profile_.level(k) + profile_.epsilon() * (b - a);
}

double OneIteration::flatten_t(const std::vector<double>& w, double t) const {
  const int k = window_of(t);
  if (k == 0) return t;
  const double yk = profile_.level(k);
  const double phi = flatten_surface(k, w);
  if (phi == yk) return t;
  const double eta = profile_.flatten_halfwidth();
  const double lo = yk - eta, hi = yk + eta;
  if (t <= phi) return lo + (t - lo) * (yk - lo) / (phi - lo);
  return yk + (t - phi) * (hi - yk) / (hi - phi);
}

double OneIteration::unflatten_t(const std::vector<double>& w, double t) const {
  const int k = window_of(t);
  if (k == 0) return t;
  const double yk = profile_.level(k);
  const double phi = flatten_surface(k, w);
  if (phi == yk) return t;
  const double eta = profile_.flatten_halfwidth();
  const double lo = yk - eta, hi = yk + eta;
  if (t <= yk) return lo + (t - lo) * (phi - lo) / (yk - lo);
  return phi + (t - yk) * (hi - phi) / (hi - yk);
}

Vec OneIteration::stage_forward(Stage s, const Vec& x) const {
  if (x.size() != prism_.dimension()) throw DimensionError("OneIteration: point dimension mismatch");
  const std::size_t h = x.size() - 1;
  const double b = profile_.height();
  std::vector<double> out(x.begin(), x.end());
  const double t = x[h];
  const double tc = std::clamp(t, 0.0, b);
  switch (s) {
    case Stage::shear: {
      const double tn = (t - prism_.bottom_height) * b / prism_.height;
      for (std::size_t j = 0; j < h; ++j) out[j] = x[j] - prism_.bottom_center[j] - prism_.slant[j] * (tn / b);
      out[h] = tn;
      break;
    }
    case Stage::squeeze: {
      const Vec rho = path_rho(profile_, tc);
      for (std::size_t j = 0; j < h; ++j) out[j] = rho[j] * x[j];
      break;
    }
    case Stage::translate: {
      const Vec p = path_x(profile_, tc);
      for (std::size_t j = 0; j < h; ++j) out[j] = x[j] + p[j];
      break;
    }
    case Stage::flatten:
      out[h] = flatten_t(out, t);
      break;
    case Stage::restore: {
      for (std::size_t j = 0; j < h; ++j) {
        out[j] = prism_.bottom_center[j] + x[j] + lambda_[j] * tc + prism_.slant[j] * (t / b);
      }
      out[h] = prism_.bottom_height + t * prism_.height / b;
      break;
    }
  }
  return Vec(std::move(out));
}

Vec OneIteration::stage_inverse(Stage s, const Vec& x) const {
  if (x.size() != prism_.dimension()) throw DimensionError("OneIteration: point dimension mismatch");
  const std::size_t h = x.size() - 1;
  const double b = profile_.height();
  std::vector<double> out(x.begin(), x.end());
  const double t = x[h];
  const double tc = std::clamp(t, 0.0, b);
  switch (s) {
    case Stage::shear: {
      for (std::size_t j = 0; j < h; ++j) out[j] = x[j] + prism_.bottom_center[j] + prism_.slant[j] * (t / b);
      out[h] = prism_.bottom_height + t * prism_.height / b;
      break;
    }
    case Stage::squeeze: {
      const Vec rho = path_rho(profile_, tc);
      for (std::size_t j = 0; j < h; ++j) out[j] = x[j] / rho[j];
      break;
    }
    case Stage::translate: {
      const Vec p = path_x(profile_, tc);
      for (std::size_t j = 0; j < h; ++j) out[j] = x[j] - p[j];
      break;
    }
    case Stage::flatten:
      out[h] = unflatten_t(out, t);
      break;
    case Stage::restore: {
      const double tn = (t - prism_.bottom_height) * b / prism_.height;
      const double tnc = std::clamp(tn, 0.0, b);
      for (std::size_t j = 0; j < h; ++j) {
        out[j] = x[j] - prism_.bottom_center[j] - lambda_[j] * tnc - prism_.slant[j] * (tn / b);
      }
      out[h] = tn;
      break;
    }
  }
  return Vec(std::move(out));
}

Vec OneIteration::forward(const Vec& x) const {
  if (x.size() != prism_.dimension()) throw DimensionError("OneIteration: point dimension mismatch");
  const double y = x[x.size() - 1];
  if (y <= prism_.bottom_height || y >= prism_.top_height()) return x;
  Vec p = stage_forward(Stage::shear, x);
  p = stage_forward(Stage::squeeze, p);
  p = stage_forward(Stage::translate, p);
  const double t = p[p.size() - 1];
  p = stage_forward(Stage::flatten, p);
  const bool moved = p[p.size() - 1] != t;
  p = stage_forward(Stage::restore, p);
  return moved ? p : p.with(p.size() - 1, y);
}

Vec OneIteration::inverse(const Vec& x) const {
  if (x.size() != prism_.dimension()) throw DimensionError("OneIteration: point dimension mismatch");
  const double y = x[x.size() - 1];
  if (y <= prism_.bottom_height || y >= prism_.top_height()) return x;
  Vec p = stage_inverse(Stage::restore, x);
  const double t = p[p.size() - 1];
  p = stage_inverse(Stage::flatten, p);
  const bool moved = p[p.size() - 1] != t;
  p = stage_inverse(Stage::translate, p);
  p = stage_inverse(Stage::squeeze, p);
  p = stage_inverse(Stage::shear, p);
  return moved ? p : p.with(p.size() - 1, y);
}

// ---------------------------------------------------------------------------
// IterationMap

IterationMap::IterationMap(Prism root, std::vector<PathProfile<double>> level_profiles)
    : root_(std::move(root)), profiles_(std::move(level_profiles)) {
  for (const auto& pr : profiles_) {
    if (pr.horizontal_dimension() + 1 != root_.dimension()) {
      throw DimensionError("IterationMap: profile and prism dimensions differ");
    }
  }
}

bool IterationMap::in_root_slab(double y) const { return y > root_.bottom_height && y < root_.top_height(); }

Vec IterationMap::evaluate(const Vec& x) const {
  if (x.size() != root_.dimension()) throw DimensionError("IterationMap: point dimension mismatch");
  if (!in_root_slab(x[x.size() - 1])) return x;
  Vec p = x;
  Prism prism = root_;
  for (const auto& profile : profiles_) {
    OneIteration it(prism, profile);
    p = it.forward(p);
    prism = it.children()[it.child_index(p[p.size() - 1])];
  }
  return p;
}

Vec IterationMap::inverse(const Vec& x) const {
  if (x.size() != root_.dimension()) throw DimensionError("IterationMap: point dimension mismatch");
  const double y = x[x.size() - 1];
  if (!in_root_slab(y) || profiles_.empty()) return x;
  std::vector<OneIteration> chain;
  chain.reserve(profiles_.size());
  Prism prism = root_;
  for (const auto& profile : profiles_) {
    chain.emplace_back(prism, profile);
    prism = chain.back().children()[chain.back().child_index(y)];
  }
  Vec p = x;
  for (std::size_t l = chain.size(); l-- > 0;) p = chain[l].inverse(p);
  return p;
}

std::vector<IterationMap::Step> IterationMap::trajectory(const Vec& x) const {
  if (x.size() != root_.dimension()) throw DimensionError("IterationMap: point dimension mismatch");
  std::vector<Step> steps;
  steps.reserve(profiles_.size() + 1);
  const bool inside = in_root_slab(x[x.size() - 1]);
  steps.push_back({x, root_, inside});
  if (!inside) {
    for (std::size_t l = 0; l < profiles_.size(); ++l) steps.push_back({x, root_, false});
    return steps;
  }
  Vec p = x;
  Prism prism = root_;
  for (const auto& profile : profiles_) {
    OneIteration it(prism, profile);
    p = it.forward(p);
    prism = it.children()[it.child_index(p[p.size() - 1])];
    steps.push_back({p, prism, true});
  }
  return steps;
}

IterationMap IterationMap::truncated(int depth) const {
  if (depth < 0 || depth > this->depth()) throw InvalidParameterError("IterationMap::truncated: depth out of range");
  return IterationMap(root_, std::vector<PathProfile<double>>(profiles_.begin(), profiles_.begin() + depth));
}

std::vector<Prism> IterationMap::prisms_at_level(int level) const {
  if (level < 0 || level > depth()) throw InvalidParameterError("prisms_at_level: level out of range");
  std::vector<Prism> current{root_};
  for (int l = 0; l < level; ++l) {
    const auto r = static_cast<std::size_t>(profiles_[l].layers());
    if (current.size() * r > kDefaultPointBudget) throw ResourceError("prisms_at_level: too many prisms");
    std::vector<Prism> next;
    next.reserve(current.size() * r);
    for (const auto& p : current) {
      OneIteration it(p, profiles_[l]);
      next.insert(next.end(), it.children().begin(), it.children().end());
    }
    current = std::move(next);
  }
  return current;
}

namespace {

void check_consistent(const Prism& prism, const SelfAffinePair& pair, const PathProfile<double>& profile) {
  if (profile.layers() != std::abs(pair.vertical_scale())) {
    throw InconsistentParameterError("profile has r = " + std::to_string(profile.layers()) + " layers but |p_d| = " +
                                     std::to_string(std::abs(pair.vertical_scale())));
  }
  if (prism.dimension() != pair.dimension() || profile.horizontal_dimension() + 1 != pair.dimension()) {
    throw DimensionError("prism, pair and profile dimensions differ");
  }
}

}  // namespace

std::pair<IterationMap, std::vector<Prism>> iterate_once(const Prism& prism, const SelfAffinePair& pair,
                                                         const PathProfile<double>& profile) {
  check_consistent(prism, pair, profile);
  OneIteration it(prism, profile);
  return {IterationMap(prism, {profile}), it.children()};
}

IterationMap compose_h(const Prism& prism, const SelfAffinePair& pair, const PathProfile<double>& profile, int n) {
  if (n < 0) throw InvalidParameterError("compose_h: depth must be >= 0");
  check_consistent(prism, pair, profile);
  std::vector<PathProfile<double>> levels;
  levels.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) levels.push_back(level_profile(pair, profile, l));
  return IterationMap(prism, std::move(levels));
}

}  // namespace tiletopo
