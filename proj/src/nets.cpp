#include "mmslab/nets.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

namespace mmslab {

const char* to_string(NetKind kind)
{
  return kind == NetKind::strict ? "strict" : "non_strict";
}

const char* to_string(DoublingEstimate::Method method)
{
  switch (method) {
    case DoublingEstimate::Method::greedy_cover: return "greedy_cover";
    case DoublingEstimate::Method::exhaustive: return "exhaustive";
    case DoublingEstimate::Method::net_lower: return "net_lower";
  }
  return "?";
}

bool is_net(const MetricSpace& space, std::span<const Index> points, double r, NetKind kind)
{
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (!net_separated(space.distance(points[a], points[b]), r, kind))
        return false;
  return true;
}

namespace {

using Mask = std::uint64_t;

// Maximum independent set by branch and bound. Vertices are tried lowest
// index first and included before excluded, so among maximum sets the
// lexicographically smallest one is kept.
class IndependentSetSearch
{
public:
  explicit IndependentSetSearch(std::vector<Mask> adjacency)
    : adj_(std::move(adjacency))
  {}

  Mask run()
  {
    const int n = static_cast<int>(adj_.size());
    const Mask all = n == 64 ? ~Mask{ 0 } : ((Mask{ 1 } << n) - 1);
    search(all, 0, 0);
    return best_set_;
  }

private:
  void search(Mask cand, Mask chosen, int size)
  {
    if (cand == 0) {
      if (size > best_) {
        best_ = size;
        best_set_ = chosen;
      }
      return;
    }
    if (size + std::popcount(cand) <= best_)
      return;
    const int v = std::countr_zero(cand);
    const Mask bit = Mask{ 1 } << v;
    search(cand & ~adj_[v] & ~bit, chosen | bit, size + 1);
    // a vertex with no remaining neighbours is always worth including
    if (adj_[v] & cand)
      search(cand & ~bit, chosen, size);
  }

  std::vector<Mask> adj_;
  int best_ = -1;
  Mask best_set_ = 0;
};

std::vector<Index> greedy_farthest_net(const MetricSpace& space, std::span<const Index> cand,
                                       double r, NetKind kind)
{
  std::vector<Index> chosen;
  if (cand.empty())
    return chosen;
  chosen.push_back(cand.front());
  std::vector<double> gap(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i)
    gap[i] = space.distance(cand[i], cand.front());
  for (;;) {
    std::size_t pick = cand.size();
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (net_separated(gap[i], r, kind) && (pick == cand.size() || gap[i] > gap[pick]))
        pick = i;
    if (pick == cand.size())
      return chosen;
    chosen.push_back(cand[pick]);
    for (std::size_t i = 0; i < cand.size(); ++i)
      gap[i] = std::min(gap[i], space.distance(cand[i], cand[pick]));
  }
}

// Points sorted by distance from one center.
struct Neighbourhood
{
  std::vector<Index> order;
  std::vector<double> dist;

  Neighbourhood(const MetricSpace& space, Index center)
    : order(space.size()), dist(space.size())
  {
    std::iota(order.begin(), order.end(), Index{ 0 });
    std::vector<double> d(space.size());
    for (Index y = 0; y < space.size(); ++y)
      d[y] = space.distance(center, y);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return d[a] < d[b]; });
    for (std::size_t i = 0; i < order.size(); ++i)
      dist[i] = d[order[i]];
  }

  std::size_t count(double r, BallKind kind) const
  {
    return kind == BallKind::open
             ? std::lower_bound(dist.begin(), dist.end(), r) - dist.begin()
             : std::upper_bound(dist.begin(), dist.end(), r) - dist.begin();
  }

  std::vector<Index> members(std::size_t count) const
  {
    std::vector<Index> m(order.begin(), order.begin() + count);
    std::sort(m.begin(), m.end());
    return m;
  }
};

std::vector<double> sorted_radii(const MetricSpace& space, std::span<const double> radii)
{
  std::vector<double> rs(radii.begin(), radii.end());
  if (rs.empty())
    rs = space.pairwise_distances();
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  for (double r : rs)
    if (!(r > 0.0))
      throw PreconditionError("radii must be positive");
  return rs;
}

} // namespace

NetStats max_net(const MetricSpace& space, std::span<const Index> candidates, double r,
                 NetKind kind, Index exhaustive_cap)
{
  NetStats stats;
  stats.radius = r;
  stats.kind = kind;
  const auto n = static_cast<Index>(candidates.size());
  if (n <= std::min<Index>(exhaustive_cap, 64)) {
    std::vector<Mask> adj(n, 0);
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        if (!net_separated(space.distance(candidates[a], candidates[b]), r, kind)) {
          adj[a] |= Mask{ 1 } << b;
          adj[b] |= Mask{ 1 } << a;
        }
    const Mask best = n == 0 ? 0 : IndependentSetSearch(std::move(adj)).run();
    for (Index a = 0; a < n; ++a)
      if (best & (Mask{ 1 } << a))
        stats.net_points.push_back(candidates[a]);
    stats.exact = true;
  } else {
    stats.net_points = greedy_farthest_net(space, candidates, r, kind);
    std::sort(stats.net_points.begin(), stats.net_points.end());
    stats.exact = false;
  }
  stats.cardinality = static_cast<Index>(stats.net_points.size());
  if (!is_net(space, stats.net_points, r, kind))
    throw InvariantViolation("max_net produced a set that is not an r-net");
  return stats;
}

NetStats max_net_in_ball(const MetricSpace& space, Index center, double r, BallKind ball_kind,
                         NetKind net_kind, Index exhaustive_cap)
{
  if (net_kind != net_kind_for(ball_kind))
    throw PreconditionError("closed balls pair with strict nets, open balls with non-strict nets");
  const Ball b = ball(space, center, r, ball_kind);
  NetStats stats = max_net(space, b.members, r, net_kind, exhaustive_cap);
  stats.center = center;
  return stats;
}

NetStats net_constant_M(const MetricSpace& space, BallKind kind, std::span<const double> radii,
                        Index exhaustive_cap)
{
  const NetKind net_kind = net_kind_for(kind);
  const auto rs = sorted_radii(space, radii);

  NetStats best;
  best.kind = net_kind;
  best.center = 0;
  best.radius = rs.empty() ? 1.0 : rs.front();
  best.net_points = { 0 };
  best.cardinality = 1;
  best.exact = true;
  bool all_exact = true;

  for (Index x = 0; x < space.size(); ++x) {
    const Neighbourhood nb(space, x);
    std::size_t previous = 0;
    for (double r : rs) {
      const std::size_t count = nb.count(r, kind);
      // same member set at a larger radius only makes separation harder
      if (count == previous)
        continue;
      previous = count;
      if (static_cast<Index>(count) <= best.cardinality)
        continue;
      const auto members = nb.members(count);
      NetStats s = max_net(space, members, r, net_kind, exhaustive_cap);
      all_exact = all_exact && s.exact;
      if (s.cardinality > best.cardinality) {
        s.center = x;
        best = std::move(s);
      }
    }
  }
  best.exact = all_exact;
  return best;
}

CoverResult greedy_ball_cover(const MetricSpace& space, std::span<const Index> targets,
                              double radius, BallKind kind)
{
  CoverResult out;
  std::vector<char> covered(targets.size(), 0);
  std::size_t left = targets.size();
  while (left > 0) {
    Index pick = -1;
    std::size_t pick_gain = 0;
    for (Index c = 0; c < space.size(); ++c) {
      std::size_t gain = 0;
      for (std::size_t t = 0; t < targets.size(); ++t)
        if (!covered[t] && in_ball(space.distance(c, targets[t]), radius, kind))
          ++gain;
      if (gain > pick_gain) {
        pick = c;
        pick_gain = gain;
      }
    }
    for (std::size_t t = 0; t < targets.size(); ++t)
      if (!covered[t] && in_ball(space.distance(pick, targets[t]), radius, kind)) {
        covered[t] = 1;
        --left;
      }
    out.centers.push_back(pick);
  }
  return out;
}

namespace {

class SetCoverSearch
{
public:
  SetCoverSearch(std::vector<Mask> sets, std::vector<Index> owners, Mask universe)
    : sets_(std::move(sets)), owners_(std::move(owners)), universe_(universe)
  {}

  // `bound` is the size of a known cover; returns an optimal one.
  std::vector<Index> run(std::vector<Index> incumbent)
  {
    best_ = std::move(incumbent);
    std::vector<Index> stack;
    search(0, stack);
    return best_;
  }

private:
  void search(Mask covered, std::vector<Index>& stack)
  {
    if (covered == universe_) {
      if (stack.size() < best_.size())
        best_ = stack;
      return;
    }
    if (stack.size() + 1 >= best_.size())
      return;
    const int e = std::countr_zero(universe_ & ~covered);
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      if (!(sets_[s] & (Mask{ 1 } << e)))
        continue;
      stack.push_back(owners_[s]);
      search(covered | sets_[s], stack);
      stack.pop_back();
    }
  }

  std::vector<Mask> sets_;
  std::vector<Index> owners_;
  Mask universe_;
  std::vector<Index> best_;
};

} // namespace

CoverResult min_ball_cover(const MetricSpace& space, std::span<const Index> targets,
                           double radius, BallKind kind, Index exhaustive_cap)
{
  CoverResult greedy = greedy_ball_cover(space, targets, radius, kind);
  const auto n = static_cast<Index>(targets.size());
  if (n > std::min<Index>(exhaustive_cap, 63) || greedy.centers.size() <= 1) {
    greedy.exact = greedy.centers.size() <= 1;
    return greedy;
  }

  // one candidate per distinct footprint, lowest center id first; drop
  // footprints contained in another
  std::map<Mask, Index> footprints;
  for (Index c = 0; c < space.size(); ++c) {
    Mask m = 0;
    for (Index t = 0; t < n; ++t)
      if (in_ball(space.distance(c, targets[t]), radius, kind))
        m |= Mask{ 1 } << t;
    if (m != 0)
      footprints.emplace(m, c);
  }
  std::vector<std::pair<Index, Mask>> kept;
  for (const auto& [m, c] : footprints) {
    bool dominated = false;
    for (const auto& [other, oc] : footprints)
      if (other != m && (other & m) == m) {
        dominated = true;
        break;
      }
    if (!dominated)
      kept.emplace_back(c, m);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Mask> sets;
  std::vector<Index> owners;
  for (const auto& [c, m] : kept) {
    owners.push_back(c);
    sets.push_back(m);
  }
  const Mask universe = (Mask{ 1 } << n) - 1;
  CoverResult out;
  out.centers = SetCoverSearch(std::move(sets), std::move(owners), universe).run(greedy.centers);
  out.exact = true;
  return out;
}

DoublingEstimate doubling_upper_bound(const MetricSpace& space, BallKind kind, Index cover_cap,
                                      Index net_cap)
{
  const auto rs = space.pairwise_distances();
  DoublingEstimate est;
  est.upper_bound = 1;
  est.witness_radius = rs.empty() ? 1.0 : rs.front();
  bool all_exact = true;

  for (Index x = 0; x < space.size(); ++x) {
    const Neighbourhood nb(space, x);
    std::size_t previous = 0;
    for (double r : rs) {
      const std::size_t count = nb.count(r, kind);
      // same member set at a larger radius is easier to cover
      if (count == previous)
        continue;
      previous = count;
      const auto members = nb.members(count);
      const CoverResult cover = min_ball_cover(space, members, r / 2.0, kind, cover_cap);
      all_exact = all_exact && cover.exact;
      const auto size = static_cast<Index>(cover.centers.size());
      if (size > est.upper_bound) {
        est.upper_bound = size;
        est.witness_center = x;
        est.witness_radius = r;
      }
    }
  }
  est.method = all_exact ? DoublingEstimate::Method::exhaustive
                         : DoublingEstimate::Method::greedy_cover;
  const NetStats m = net_constant_M(space, kind, {}, net_cap);
  est.lower_bound = m.cardinality;
  est.lower_exact = m.exact;
  if (est.lower_bound > est.upper_bound)
    throw InvariantViolation("net constant exceeds the covering bound");
  return est;
}

} // namespace mmslab
