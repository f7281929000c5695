#pragma once

#include "mmslab/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmslab {

enum class Norm { l1, l2, linf };

const char* to_string(Norm norm);
Norm parse_norm(const std::string& s);

struct SpaceOptions
{
  // Pairwise distances are materialized when the point count is at most this.
  Index max_cached_points = 2048;
  // Absolute slack for the triangle inequality on user-supplied matrices.
  double triangle_tolerance = 1e-9;
};

// A finite metric space on the point ids 0..N-1, given either by coordinates
// under a norm or by an explicit distance matrix. Immutable once built.
class MetricSpace
{
public:
  static MetricSpace from_coordinates(PointCloud coordinates, Norm norm,
                                      const SpaceOptions& options = {});

  // Throws NonMetric on asymmetry, negative entries, a nonzero diagonal or a
  // triangle violation beyond options.triangle_tolerance.
  static MetricSpace from_distance_matrix(Eigen::MatrixXd distances,
                                          const SpaceOptions& options = {});

  Index size() const { return size_; }

  double distance(Index x, Index y) const
  {
    if (cache_.size() != 0)
      return cache_(x, y);
    return coordinate_distance(x, y);
  }

  bool has_coordinates() const { return coordinates_.has_value(); }
  const PointCloud& coordinates() const { return *coordinates_; }
  Index dimension() const { return has_coordinates() ? coordinates_->cols() : 0; }
  Norm norm() const { return norm_; }
  bool distances_cached() const { return cache_.size() != 0; }

  // Distinct positive pairwise distances among `subset` (all points when
  // empty), ascending.
  std::vector<double> pairwise_distances(std::span<const Index> subset = {}) const;

  // Smallest positive pairwise distance among `subset`; +inf if there is none.
  double min_positive_distance(std::span<const Index> subset = {}) const;

  double diameter(std::span<const Index> subset = {}) const;

private:
  MetricSpace() = default;
  double coordinate_distance(Index x, Index y) const;

  Index size_ = 0;
  std::optional<PointCloud> coordinates_;
  Norm norm_ = Norm::l2;
  Eigen::MatrixXd cache_;
};

struct Ball
{
  Index center = 0;
  double radius = 0;
  BallKind kind = BallKind::closed;
  std::vector<Index> members; // ascending
};

Ball ball(const MetricSpace& space, Index center, double radius, BallKind kind);

} // namespace mmslab
