#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tiletopo/linalg.hpp"
#include "tiletopo/prism.hpp"
#include "tiletopo/tile.hpp"

namespace tiletopo {

// Uniform grid over a point cloud answering exact sup-norm nearest-neighbour
// queries.
class GridIndex {
 public:
  explicit GridIndex(const std::vector<Vec>& points);

  std::size_t size() const { return n_; }
  // min_p ||q - p||_inf over the indexed points.
  double nearest_distance(const Vec& q) const;

 private:
  using Cell = std::vector<long long>;
  std::size_t key(const Cell& c) const;
  Cell cell_of(const Vec& q) const;
  // Scans the cells at Chebyshev distance exactly r from qc.
  void scan_ring(const Vec& q, const Cell& qc, long long r, std::size_t axis, bool on_shell, Cell& c,
                 double& best) const;

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double h_ = 1.0;
  std::vector<double> lo_;
  std::vector<long long> extent_;     // number of cells per axis
  std::vector<double> coords_;        // points in cell order, d_ values each
  std::vector<std::size_t> start_;    // points of cell key are start_[key] .. start_[key + 1]
};

// max of sup_a min_b and sup_b min_a in the sup norm. Exact for the given
// clouds.
double hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b);
double directed_hausdorff(const std::vector<Vec>& from, const GridIndex& to);

// Hausdorff distance between a cloud and the level-n digit cloud of a pair,
// computed by branch and bound over the digit tree without storing the
// (#D)^n points. Leaves are the points streamed by for_each_truncation.
double hausdorff_to_digit_cloud(const SelfAffinePair& pair, int n, const std::vector<Vec>& cloud);

struct VerificationReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::size_t>> counts;
  std::vector<std::pair<std::string, double>> statistics;
  std::vector<std::pair<std::string, double>> tolerances;
  bool passed = false;

  double statistic(const std::string& name) const;
  std::size_t count(const std::string& name) const;

  // One "check=<name> key=value ..." line followed by "# " detail lines.
  std::string text() const;
  // One key=value per line, keys prefixed by the check name.
  std::string key_values() const;
};

struct InjectivityOptions {
  std::size_t pairs = 100'000;
  double delta = 1e-3;
  double coincidence = 1e-12;
  std::uint64_t seed = 0;
};

// Pairs x, x' in the region with delta <= ||x - x'||_inf < 16 delta; records the
// minimum image separation overall and per dyadic separation band.
VerificationReport check_injectivity(const IterationMap& map, const Prism& region, const InjectivityOptions& opt);

struct HeightOptions {
  std::size_t samples = 1000;
  int stabilization_limit = 12;
  double collar = 1e-3;
  double slack = 1e-12;
  double boundary_tol = 1e-9;
  std::uint64_t seed = 0;
};

// (a) interior samples: index after which the height of h_m(x) no longer
// changes, bounded by stabilization_limit and strictly below the map depth;
// (b) boundary pairs: |height difference| does not drop from step m to m+1
// for pairs x, x' on a common vertical line of the vertical boundary of the
// same level-m prism, both outside the level-m transition windows and lying
// in the same level-(m+1) prism.
VerificationReport check_height_properties(const IterationMap& map, const Prism& region, const HeightOptions& opt);

struct ConvergenceOptions {
  std::size_t horizontal_samples = 32;  // per horizontal axis
  std::size_t vertical_samples = 100;
  double tolerance = 0.1;
  std::size_t cloud_budget = 1'000'000'000;
  std::size_t sample_budget = 4'000'000;
};

// Hausdorff distance between the image under h_depth of a regular grid of the
// prism volume and the level-level digit cloud.
VerificationReport check_convergence(const SelfAffinePair& pair, const Prism& prism, const PathProfile<double>& profile,
                                     int depth, int level, const ConvergenceOptions& opt = {});

}  // namespace tiletopo
