#include "mmslab/averaging.hpp"
#include "mmslab/parallel.hpp"
#include "mmslab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mmslab {

AveragingOperator::AveragingOperator(const MetricSpace& space, const DiscreteMeasure& measure,
                                     double radius, BallKind kind)
  : space_(&space), measure_(&measure), radius_(radius), kind_(kind)
{
  if (!(radius > 0.0))
    throw PreconditionError("averaging radius must be positive");
  if (space.size() != measure.size())
    throw PreconditionError("measure and space sizes differ");

  const Index n = space.size();
  const auto& support = measure.support();
  std::vector<std::vector<Index>> rows(n);
  ball_measure_ = Eigen::VectorXd::Zero(n);
  parallel_for(static_cast<Index>(support.size()), [&](Index k) {
    const Index x = support[k];
    auto& row = rows[x];
    double mass = 0.0;
    for (Index y : support)
      if (in_ball(space.distance(x, y), radius, kind)) {
        row.push_back(y);
        mass += measure.weight(y);
      }
    ball_measure_[x] = mass;
  });

  offsets_.assign(n + 1, 0);
  for (Index x = 0; x < n; ++x)
    offsets_[x + 1] = offsets_[x] + static_cast<std::int64_t>(rows[x].size());
  members_.reserve(offsets_[n]);
  for (auto& row : rows)
    members_.insert(members_.end(), row.begin(), row.end());
}

SparseRowMatrix AveragingOperator::matrix() const
{
  const Index n = size();
  SparseRowMatrix a(n, n);
  Eigen::VectorXi per_row(n);
  for (Index x = 0; x < n; ++x)
    per_row[x] = static_cast<int>(offsets_[x + 1] - offsets_[x]);
  a.reserve(per_row);
  for (Index x = 0; x < n; ++x)
    for (Index y : row(x))
      a.insert(x, y) = measure_->weight(y) / ball_measure_[x];
  a.makeCompressed();
  return a;
}

Function AveragingOperator::apply(const Function& f) const
{
  check_function(*measure_, f);
  Function out = Function::Zero(size());
  for (Index x : measure_->support()) {
    const auto members = row(x);
    // a ball holding one support point averages to that point's value
    if (members.size() == 1) {
      out[x] = f[x];
      continue;
    }
    double acc = 0.0;
    for (Index y : members)
      acc += f[y] * measure_->weight(y);
    out[x] = acc / ball_measure_[x];
  }
  return out;
}

AveragingOperator build_operator(const MetricSpace& space, const DiscreteMeasure& measure,
                                 double radius, BallKind kind)
{
  return AveragingOperator(space, measure, radius, kind);
}

ConjugateFunction conjugate_function(const AveragingOperator& op)
{
  const auto& mu = op.measure();
  ConjugateFunction a{ op.radius(), op.kind(), Eigen::VectorXd::Zero(op.size()) };
  // y in B(x,s) iff x in B(y,s), so scattering row x accumulates the x-term
  // of every a_s(y); terms arrive in ascending x
  for (Index x : mu.support()) {
    const double term = mu.weight(x) / op.ball_measure(x);
    for (Index y : op.row(x))
      a.values[y] += term;
  }
  return a;
}

ConjugateFunction conjugate_function(const MetricSpace& space, const DiscreteMeasure& measure,
                                     double radius, BallKind kind)
{
  return conjugate_function(build_operator(space, measure, radius, kind));
}

NormResult l1_operator_norm_with_argmax(const AveragingOperator& op)
{
  const ConjugateFunction a = conjugate_function(op);
  NormResult best{ -1.0, 0 };
  for (Index y : op.measure().support())
    if (a.values[y] > best.norm)
      best = { a.values[y], y };
  return best;
}

double l1_norm_bruteforce_oracle(const AveragingOperator& op)
{
  const auto& mu = op.measure();
  if (static_cast<Index>(mu.support().size()) > kBruteForceSupportCap)
    throw PreconditionError("brute-force oracle limited to 5000 support points");
  double best = 0.0;
  Function indicator = Function::Zero(op.size());
  for (Index y : mu.support()) {
    indicator[y] = 1.0;
    const Function image = op.apply(indicator);
    best = std::max(best, lp_norm(mu, image, 1.0) / lp_norm(mu, indicator, 1.0));
    indicator[y] = 0.0;
  }
  return best;
}

namespace {

GreedySelection run_greedy(const AveragingOperator& op, Index anchor, double epsilon)
{
  const auto& space = op.space();
  const double s = op.radius();
  const BallKind kind = op.kind();

  GreedySelection sel;
  sel.anchor = anchor;
  sel.radius = s;
  sel.kind = kind;
  sel.epsilon = epsilon;

  const auto members = op.row(anchor); // B(y,s) on the support
  const double factor = 1.0 + epsilon;
  std::vector<Index> first_cover(members.size(), -1);
  std::size_t left = members.size();

  while (left > 0) {
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members.size(); ++i)
      if (first_cover[i] < 0)
        b = std::min(b, op.ball_measure(members[i]));
    std::size_t pick = members.size();
    for (std::size_t i = 0; i < members.size(); ++i)
      if (first_cover[i] < 0 && op.ball_measure(members[i]) < factor * b) {
        pick = i;
        break;
      }
    if (pick == members.size())
      throw InvariantViolation("greedy selection found no admissible point");

    const Index u = members[pick];
    const auto k = static_cast<Index>(sel.selected.size());
    sel.selected.push_back(u);
    sel.thresholds.push_back(b);
    sel.selected_measures.push_back(op.ball_measure(u));
    for (std::size_t i = 0; i < members.size(); ++i)
      if (first_cover[i] < 0 && in_ball(space.distance(u, members[i]), s, kind)) {
        first_cover[i] = k;
        --left;
      }
  }
  sel.m = static_cast<Index>(sel.selected.size());

  for (std::size_t i = 0; i < members.size(); ++i) {
    const double cover_mass = sel.selected_measures[first_cover[i]];
    if (cover_mass > factor * op.ball_measure(members[i]))
      ++sel.domination_violations;
  }
  return sel;
}

} // namespace

GreedySelection greedy_min_measure_selection(const MetricSpace& space,
                                             const DiscreteMeasure& measure, Index anchor,
                                             double radius, BallKind kind, double epsilon)
{
  if (anchor < 0 || anchor >= measure.size() || !measure.in_support(anchor))
    throw AnchorOffSupport("greedy anchor must lie in the support");
  if (!(epsilon > 0.0))
    throw PreconditionError("epsilon must be positive");
  const AveragingOperator op(space, measure, radius, kind);
  return run_greedy(op, anchor, epsilon);
}

NetBoundReport verify_net_bound(const MetricSpace& space, const DiscreteMeasure& measure,
                                double radius, BallKind kind, const NetStats& M,
                                const std::vector<double>& epsilons)
{
  const AveragingOperator op(space, measure, radius, kind);
  const ConjugateFunction a = conjugate_function(op);

  NetBoundReport rep;
  rep.radius = radius;
  rep.kind = kind;
  rep.M = M.cardinality;
  rep.M_exact = M.exact;
  rep.norm = l1_operator_norm(op);

  auto fail = [&](Index y, double eps, Index m, std::string reason, bool hard) {
    rep.pass = false;
    rep.falsification = rep.falsification || hard;
    rep.failures.push_back({ y, eps, a.values[y], m, std::move(reason) });
  };

  if (M.exact && rep.norm > static_cast<double>(M.cardinality) + 1e-12)
    fail(op.measure().support().front(), 0.0, M.cardinality, "operator norm exceeds M", true);

  const NetKind net_kind = net_kind_for(kind);
  for (Index y : measure.support()) {
    const auto ball_members = op.row(y);
    for (double eps : epsilons) {
      const GreedySelection sel = run_greedy(op, y, eps);
      ++rep.greedy_runs;
      const double factor = 1.0 + eps;
      if (a.values[y] > factor * static_cast<double>(sel.m))
        fail(y, eps, sel.m, "a_s(y) > (1+eps) m", true);
      if (sel.m > M.cardinality)
        fail(y, eps, sel.m, "m exceeds M", M.exact);
      if (sel.domination_violations != 0)
        fail(y, eps, sel.m, "pointwise domination violated", true);
      if (!is_net(space, sel.selected, radius, net_kind))
        fail(y, eps, sel.m, "selected points are not an s-net", true);
      for (Index k = 0; k < sel.m; ++k) {
        if (!(sel.selected_measures[k] < factor * sel.thresholds[k]))
          fail(y, eps, sel.m, "selected ball measure not below (1+eps) b_k", true);
        if (k > 0 && sel.thresholds[k] < sel.thresholds[k - 1])
          fail(y, eps, sel.m, "thresholds decreased", true);
        if (!std::binary_search(ball_members.begin(), ball_members.end(), sel.selected[k]))
          fail(y, eps, sel.m, "selected point outside B(y,s)", true);
      }
      for (Index x : ball_members) {
        bool covered = false;
        for (Index u : sel.selected)
          covered = covered || in_ball(space.distance(u, x), radius, kind);
        if (!covered) {
          fail(y, eps, sel.m, "B(y,s) not covered", true);
          break;
        }
      }
    }
  }
  return rep;
}

LpBoundReport lp_bound_check(const AveragingOperator& op, double p, Index M, Index trials,
                             std::uint64_t seed)
{
  if (!(p > 1.0) || std::isinf(p))
    throw InvalidP("interpolation check needs 1 < p < inf");
  if (trials < 1)
    throw PreconditionError("trials must be positive");
  const auto& mu = op.measure();

  LpBoundReport rep;
  rep.p = p;
  rep.bound = std::pow(static_cast<double>(M), 1.0 / p);
  rep.trials = trials;

  Function ones = Function::Zero(op.size());
  for (Index x : mu.support())
    ones[x] = 1.0;
  rep.ones_ratio = lp_norm(mu, op.apply(ones), p) / lp_norm(mu, ones, p);

  CounterRng rng(seed);
  Function f = Function::Zero(op.size());
  for (Index t = 0; t < trials; ++t) {
    for (Index x : mu.support())
      f[x] = rng.normal();
    const Function g = op.apply(f);
    const double fp = lp_norm(mu, f, p);
    const double gp = lp_norm(mu, g, p);
    if (gp > rep.bound * fp + 1e-9)
      ++rep.violations;
    const double finf = lp_norm(mu, f, kInfinity);
    if (lp_norm(mu, g, kInfinity) > finf * (1.0 + 1e-12))
      ++rep.linf_violations;
    if (fp > 0.0)
      rep.max_ratio = std::max(rep.max_ratio, gp / fp);
  }
  return rep;
}

namespace {

// For each support point, support neighbours sorted by distance with running
// weight totals, so mu B(x,r) is one binary search.
class BallMeasureTable
{
public:
  BallMeasureTable(const MetricSpace& space, const DiscreteMeasure& measure)
    : support_(measure.support()), dist_(support_.size()), mass_(support_.size())
  {
    const auto s = static_cast<Index>(support_.size());
    parallel_for(s, [&](Index a) {
      std::vector<std::pair<double, Index>> nb;
      nb.reserve(support_.size());
      for (Index y : support_)
        nb.emplace_back(space.distance(support_[a], y), y);
      std::sort(nb.begin(), nb.end());
      double acc = 0.0;
      for (const auto& [d, y] : nb) {
        acc += measure.weight(y);
        dist_[a].push_back(d);
        mass_[a].push_back(acc);
      }
    });
  }

  // mu B(support[a], r)
  double operator()(std::size_t a, double r, BallKind kind) const
  {
    const auto& d = dist_[a];
    const auto n = kind == BallKind::open
                     ? std::lower_bound(d.begin(), d.end(), r) - d.begin()
                     : std::upper_bound(d.begin(), d.end(), r) - d.begin();
    return n == 0 ? 0.0 : mass_[a][n - 1];
  }

private:
  const std::vector<Index>& support_;
  std::vector<std::vector<double>> dist_;
  std::vector<std::vector<double>> mass_;
};

} // namespace

std::vector<double> comparability_radii(const MetricSpace& space, const DiscreteMeasure& measure)
{
  const auto d = space.pairwise_distances(measure.support());
  std::vector<double> radii = d;
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    radii.push_back(0.5 * (d[k] + d[k + 1]));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

ComparabilityReport local_comparability_constant(const MetricSpace& space,
                                                 const DiscreteMeasure& measure, BallKind kind)
{
  ComparabilityReport rep;
  rep.radii = comparability_radii(space, measure);
  const auto& support = measure.support();
  rep.x = rep.y = support.front();
  rep.r = rep.radii.empty() ? 1.0 : rep.radii.front();
  rep.max_norm = 1.0;
  rep.max_norm_radius = rep.r;
  if (rep.radii.empty())
    return rep;

  const BallMeasureTable table(space, measure);
  const auto nr = static_cast<Index>(rep.radii.size());
  const std::size_t s = support.size();

  struct PerRadius
  {
    double ratio = 1.0;
    Index x = 0, y = 0;
    double norm = 0.0;
  };
  std::vector<PerRadius> per(nr);
  parallel_for(nr, [&](Index k) {
    const double r = rep.radii[k];
    std::vector<double> mass(s);
    for (std::size_t a = 0; a < s; ++a)
      mass[a] = table(a, r, kind);
    PerRadius best{ 1.0, support.front(), support.front(), 0.0 };
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b) {
        if (a == b || !(space.distance(support[a], support[b]) < r))
          continue;
        const double ratio = mass[a] / mass[b];
        if (ratio > best.ratio)
          best = { ratio, support[a], support[b], 0.0 };
      }
    best.norm = l1_operator_norm(AveragingOperator(space, measure, r, kind));
    per[k] = best;
  });

  for (Index k = 0; k < nr; ++k) {
    if (per[k].ratio > rep.C) {
      rep.C = per[k].ratio;
      rep.x = per[k].x;
      rep.y = per[k].y;
      rep.r = rep.radii[k];
    }
    if (per[k].norm > rep.max_norm) {
      rep.max_norm = per[k].norm;
      rep.max_norm_radius = rep.radii[k];
    }
  }
  rep.implication_holds = rep.max_norm <= rep.C + 1e-12;
  return rep;
}

std::vector<double> default_radii_grid(const MetricSpace& space, const DiscreteMeasure& measure)
{
  auto radii = space.pairwise_distances(measure.support());
  if (radii.empty())
    return { 1.0 };
  radii.insert(radii.begin(), 0.5 * radii.front());
  return radii;
}

Function maximal_function(const MetricSpace& space, const DiscreteMeasure& measure,
                          const Function& f, std::span<const double> radii, BallKind kind)
{
  if (radii.empty())
    throw EmptyRadii("maximal function needs at least one radius");
  check_function(measure, f);
  const double gap = space.min_positive_distance(measure.support());
  if (!(*std::min_element(radii.begin(), radii.end()) < gap))
    throw PreconditionError(
      "maximal function radii must include one below the smallest support distance");

  const Function abs_f = f.cwiseAbs();
  Function out = Function::Zero(f.size());
  bool first = true;
  for (double r : radii) {
    const Function avg = AveragingOperator(space, measure, r, kind).apply(abs_f);
    for (Index x : measure.support())
      out[x] = first ? avg[x] : std::max(out[x], avg[x]);
    first = false;
  }
  return out;
}

} // namespace mmslab
