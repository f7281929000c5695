#include "mmslab/metric_space.hpp"
#include "mmslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mmslab {

const char* to_string(BallKind kind)
{
  return kind == BallKind::open ? "open" : "closed";
}

BallKind parse_ball_kind(const std::string& s)
{
  if (s == "open")
    return BallKind::open;
  if (s == "closed")
    return BallKind::closed;
  throw FormatError("unknown ball kind '" + s + "' (expected open|closed)");
}

const char* to_string(Norm norm)
{
  switch (norm) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "?";
}

Norm parse_norm(const std::string& s)
{
  if (s == "l1")
    return Norm::l1;
  if (s == "l2")
    return Norm::l2;
  if (s == "linf")
    return Norm::linf;
  throw FormatError("unknown norm '" + s + "' (expected l1|l2|linf)");
}

MetricSpace MetricSpace::from_coordinates(PointCloud coordinates, Norm norm,
                                          const SpaceOptions& options)
{
  if (coordinates.rows() < 1)
    throw PreconditionError("a metric space needs at least one point");
  if (!coordinates.allFinite())
    throw FormatError("coordinates must be finite");

  MetricSpace space;
  space.size_ = coordinates.rows();
  space.coordinates_ = std::move(coordinates);
  space.norm_ = norm;

  const Index n = space.size_;
  if (n <= options.max_cached_points) {
    Eigen::MatrixXd cache(n, n);
    parallel_for(n, [&](Index i) {
      for (Index j = 0; j < n; ++j)
        cache(i, j) = space.coordinate_distance(i, j);
    });
    space.cache_ = std::move(cache);
  }
  return space;
}

MetricSpace MetricSpace::from_distance_matrix(Eigen::MatrixXd d,
                                              const SpaceOptions& options)
{
  const Index n = d.rows();
  if (n < 1)
    throw PreconditionError("a metric space needs at least one point");
  if (d.cols() != n)
    throw FormatError("distance matrix must be square");
  if (!d.allFinite())
    throw FormatError("distances must be finite");

  auto fail = [](const std::string& msg, Index x, Index y, Index z) {
    throw NonMetric(msg, x, y, z);
  };
  for (Index i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) {
      std::ostringstream os;
      os << "nonzero diagonal entry at " << i;
      fail(os.str(), i, -1, -1);
    }
    for (Index j = 0; j < n; ++j) {
      if (d(i, j) < 0.0) {
        std::ostringstream os;
        os << "negative distance between " << i << " and " << j;
        fail(os.str(), i, j, -1);
      }
      if (d(i, j) != d(j, i)) {
        std::ostringstream os;
        os << "asymmetric distance between " << i << " and " << j;
        fail(os.str(), i, j, -1);
      }
    }
  }
  const double tol = options.triangle_tolerance;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        if (d(i, j) > d(i, k) + d(k, j) + tol) {
          std::ostringstream os;
          os << "triangle inequality fails on (" << i << "," << j << "," << k
             << "): " << d(i, j) << " > " << d(i, k) << " + " << d(k, j);
          fail(os.str(), i, j, k);
        }

  MetricSpace space;
  space.size_ = n;
  space.cache_ = std::move(d);
  return space;
}

double MetricSpace::coordinate_distance(Index x, Index y) const
{
  const auto& c = *coordinates_;
  const Index dim = c.cols();
  double acc = 0.0;
  switch (norm_) {
    case Norm::l1:
      for (Index k = 0; k < dim; ++k)
        acc += std::abs(c(x, k) - c(y, k));
      return acc;
    case Norm::l2:
      for (Index k = 0; k < dim; ++k) {
        const double t = c(x, k) - c(y, k);
        acc += t * t;
      }
      return std::sqrt(acc);
    case Norm::linf:
      for (Index k = 0; k < dim; ++k)
        acc = std::max(acc, std::abs(c(x, k) - c(y, k)));
      return acc;
  }
  return acc;
}

namespace {

std::vector<Index> all_or(std::span<const Index> subset, Index n)
{
  if (!subset.empty())
    return { subset.begin(), subset.end() };
  std::vector<Index> ids(n);
  std::iota(ids.begin(), ids.end(), Index{ 0 });
  return ids;
}

} // namespace

std::vector<double> MetricSpace::pairwise_distances(std::span<const Index> subset) const
{
  const auto ids = all_or(subset, size_);
  std::vector<double> out;
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const double r = distance(ids[a], ids[b]);
      if (r > 0.0)
        out.push_back(r);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double MetricSpace::min_positive_distance(std::span<const Index> subset) const
{
  const auto ids = all_or(subset, size_);
  const auto m = static_cast<Index>(ids.size());
  std::vector<double> row_min(ids.size(), std::numeric_limits<double>::infinity());
  parallel_for(m, [&](Index a) {
    for (Index b = a + 1; b < m; ++b) {
      const double r = distance(ids[a], ids[b]);
      if (r > 0.0 && r < row_min[a])
        row_min[a] = r;
    }
  });
  return *std::min_element(row_min.begin(), row_min.end());
}

double MetricSpace::diameter(std::span<const Index> subset) const
{
  const auto ids = all_or(subset, size_);
  double best = 0.0;
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      best = std::max(best, distance(ids[a], ids[b]));
  return best;
}

Ball ball(const MetricSpace& space, Index center, double radius, BallKind kind)
{
  if (!(radius > 0.0))
    throw PreconditionError("ball radius must be positive");
  if (center < 0 || center >= space.size())
    throw PreconditionError("ball center out of range");
  Ball b{ center, radius, kind, {} };
  for (Index y = 0; y < space.size(); ++y)
    if (in_ball(space.distance(center, y), radius, kind))
      b.members.push_back(y);
  return b;
}

} // namespace mmslab
