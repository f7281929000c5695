#pragma once

#include "mmslab/core.hpp"
#include "mmslab/metric_space.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mmslab {

// strict: pairwise d > r; non_strict: pairwise d >= r.
enum class NetKind { strict, non_strict };

// Closed balls pair with strict nets, open balls with non-strict ones.
inline NetKind net_kind_for(BallKind kind)
{
  return kind == BallKind::closed ? NetKind::strict : NetKind::non_strict;
}

inline bool net_separated(double dist, double r, NetKind kind)
{
  return kind == NetKind::strict ? dist > r : dist >= r;
}

const char* to_string(NetKind kind);

inline constexpr Index kDefaultNetCap = 18;
inline constexpr Index kDefaultCoverCap = 16;

struct NetStats
{
  double radius = 0.0;
  std::optional<Index> center; // empty for a global (non-ball) net
  NetKind kind = NetKind::strict;
  std::vector<Index> net_points;
  Index cardinality = 0;
  bool exact = false; // false: greedy lower bound
};

struct DoublingEstimate
{
  enum class Method { greedy_cover, exhaustive, net_lower };

  Index upper_bound = 0;
  Index lower_bound = 0;
  Method method = Method::exhaustive; // how upper_bound was obtained
  bool lower_exact = false;
  // ball attaining upper_bound
  Index witness_center = 0;
  double witness_radius = 0.0;
};

const char* to_string(DoublingEstimate::Method method);

bool is_net(const MetricSpace& space, std::span<const Index> points, double r, NetKind kind);

// Largest r-net among `candidates`. Exact branch-and-bound (maximum independent
// set of the conflict graph) when candidates.size() <= exhaustive_cap, greedy
// farthest-point otherwise.
NetStats max_net(const MetricSpace& space, std::span<const Index> candidates, double r,
                 NetKind kind, Index exhaustive_cap = kDefaultNetCap);

// Largest r-net inside B(center, r). Throws PreconditionError when net_kind
// does not match ball_kind.
NetStats max_net_in_ball(const MetricSpace& space, Index center, double r, BallKind ball_kind,
                         NetKind net_kind, Index exhaustive_cap = kDefaultNetCap);

// Net constant M: max over all centers and radii of max_net_in_ball. Empty
// `radii` means the distinct positive pairwise distances.
NetStats net_constant_M(const MetricSpace& space, BallKind kind, std::span<const double> radii = {},
                        Index exhaustive_cap = kDefaultNetCap);

// Smallest cover of `targets` by balls of the given radius centered at space
// points. Exhaustive when targets.size() <= exhaustive_cap; greedy otherwise.
struct CoverResult
{
  std::vector<Index> centers;
  bool exact = false;
};
CoverResult min_ball_cover(const MetricSpace& space, std::span<const Index> targets, double radius,
                           BallKind kind, Index exhaustive_cap = kDefaultCoverCap);
CoverResult greedy_ball_cover(const MetricSpace& space, std::span<const Index> targets,
                              double radius, BallKind kind);

// Point-centered covering bound on the doubling constant over all centers
// and pairwise-distance radii; lower_bound is the net constant M.
DoublingEstimate doubling_upper_bound(const MetricSpace& space, BallKind kind,
                                      Index cover_cap = kDefaultCoverCap,
                                      Index net_cap = kDefaultNetCap);

} // namespace mmslab
