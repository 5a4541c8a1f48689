#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tiletopo/linalg.hpp"

namespace tiletopo {

class SelfAffinePair;

// Layer data driving one iteration: r layers of a vertical prism of height b,
// transition windows of half-width epsilon around the interior levels
// y_k = k b / r, and the horizontal offsets u_1..u_{r-1} between consecutive
// layers. v_k = u_1 + ... + u_k with v_0 = 0.
template <class T>
class PathProfile {
 public:
  PathProfile(int r, T b, T epsilon, std::vector<BasicVec<T>> u);

  int layers() const { return r_; }
  const T& height() const { return b_; }
  const T& epsilon() const { return eps_; }
  std::size_t horizontal_dimension() const { return u_.front().size(); }

  // u_k for 1 <= k < r
  const BasicVec<T>& u(int k) const { return u_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<BasicVec<T>>& offsets() const { return u_; }
  // v_k for 0 <= k < r
  const BasicVec<T>& v(int k) const { return v_.at(static_cast<std::size_t>(k)); }
  T level(int k) const { return T(b_ * T(k) / T(r_)); }

  // Half-width of the band around y_k on which the flattening acts; strictly
  // larger than epsilon and at most b / (2r).
  T flatten_halfwidth() const;

 private:
  int r_;
  T b_;
  T eps_;
  std::vector<BasicVec<T>> u_;
  std::vector<BasicVec<T>> v_;
};

// Horizontal path x(y): v_k on the plateaus, linear from v_{k-1} to v_k across
// the window [y_k - eps, y_k + eps].
template <class T>
BasicVec<T> path_x(const PathProfile<T>& profile, const T& y);

// Horizontal scale rho(y): 1 off the windows, 1 - u_k^+ at y_k.
template <class T>
BasicVec<T> path_rho(const PathProfile<T>& profile, const T& y);

// sum_k ||u_k||_inf
template <class T>
T horizontal_constant(const PathProfile<T>& profile);

struct BoundaryFlags {
  bool plus = false;
  bool minus = false;
  bool updown = false;
};

// Membership of a point x of the boundary of U = [-1/2, 1/2]^{d-1} in the
// three (overlapping) parts determined by the direction u.
template <class T>
BoundaryFlags partition_boundary(const BasicVec<T>& u, const BasicVec<T>& x);

// Slant prism: the union over tau in [0, 1] of the unit box
//     bottom_center + tau * slant + U   at height bottom_height + tau * height.
struct Prism {
  Vec bottom_center;
  double bottom_height = 0.0;
  Vec slant;
  double height = 1.0;

  std::size_t dimension() const { return bottom_center.size() + 1; }
  Vec top_center() const { return bottom_center + slant; }
  double top_height() const { return bottom_height + height; }
  // Horizontal center of the box at height y.
  Vec center_at(double y) const;
  // Ambient point for box offset w in U and relative height tau in [0, 1].
  Vec point(const Vec& w, double tau) const;
  bool contains(const Vec& x, double tol = 0.0) const;
  // Inside the prism, on the side boundary and strictly between bottom and top.
  bool on_vertical_boundary(const Vec& x, double tol) const;
};

// Bounding slant prism of T: bottom and top boxes are the lowest and highest
// horizontal slices of the tile. Needs a product digit set.
Prism root_prism(const SelfAffinePair& pair);

// The r^level prisms of the level-level decomposition of the root prism,
// obtained directly from the center-line iterated function system and sorted
// by height.
std::vector<Prism> ifs_prisms(const SelfAffinePair& pair, int level);

// Profile whose offsets are the horizontal jumps between consecutive level-1
// prisms of the tile; b = 1, epsilon = b / (4r).
PathProfile<double> default_profile(const SelfAffinePair& pair);

// Profile used for the prisms created by the level-th iteration, derived from
// the root profile by the linear part of the pair.
PathProfile<double> level_profile(const SelfAffinePair& pair, const PathProfile<double>& root, int level);

enum class Stage { shear = 1, squeeze = 2, translate = 3, flatten = 4, restore = 5 };

// One iteration on a single prism: five bijections of R^d. Stage shear maps
// ambient coordinates to the prism's normalized frame (w, t) with w the
// offset from the box center and t in [0, b]; stages squeeze, translate and
// flatten act in that frame; stage restore maps back to ambient coordinates.
// Outside the slab 0 < t < b the composition is the identity.
class OneIteration {
 public:
  OneIteration(Prism prism, PathProfile<double> profile);

  const Prism& prism() const { return prism_; }
  const PathProfile<double>& profile() const { return profile_; }
  const std::vector<Prism>& children() const { return children_; }
  // Normalized slant of the children relative to the parent.
  const Vec& child_drift() const { return lambda_; }

  Vec forward(const Vec& x) const;
  Vec inverse(const Vec& x) const;
  Vec stage_forward(Stage s, const Vec& x) const;
  Vec stage_inverse(Stage s, const Vec& x) const;

  // Index of the child whose height band contains y (clamped).
  std::size_t child_index(double y) const;

 private:
  // value of the flattening surface over w for window k, in normalized height
  double flatten_surface(int k, const std::vector<double>& w) const;
  // window whose flattening band contains t, or 0
  int window_of(double t) const;
  double flatten_t(const std::vector<double>& w, double t) const;
  double unflatten_t(const std::vector<double>& w, double t) const;

  Prism prism_;
  PathProfile<double> profile_;
  Vec lambda_;
  std::vector<Prism> children_;
};

// Depth-n composition h_n: the level-l iteration is applied inside each of the
// r^l prisms produced so far, with the level-l profile.
class IterationMap {
 public:
  IterationMap(Prism root, std::vector<PathProfile<double>> level_profiles);

  int depth() const { return static_cast<int>(profiles_.size()); }
  const Prism& root() const { return root_; }
  const std::vector<PathProfile<double>>& profiles() const { return profiles_; }

  Vec evaluate(const Vec& x) const;
  Vec inverse(const Vec& x) const;

  struct Step {
    Vec point;    // h_l(x)
    Prism prism;  // level-l prism whose band holds h_l(x)
    bool in_slab = false;
  };
  // h_0(x), ..., h_n(x) in a single pass.
  std::vector<Step> trajectory(const Vec& x) const;

  IterationMap truncated(int depth) const;

  // All r^level prisms at the given level (level <= depth), sorted by height.
  std::vector<Prism> prisms_at_level(int level) const;

 private:
  bool in_root_slab(double y) const;

  Prism root_;
  std::vector<PathProfile<double>> profiles_;
};

std::pair<IterationMap, std::vector<Prism>> iterate_once(const Prism& prism, const SelfAffinePair& pair,
                                                         const PathProfile<double>& profile);

IterationMap compose_h(const Prism& prism, const SelfAffinePair& pair, const PathProfile<double>& profile, int n);

}  // namespace tiletopo
