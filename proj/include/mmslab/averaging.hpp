#pragma once

#include "mmslab/core.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"
#include "mmslab/nets.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mmslab {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Ball averaging operator
///   (A f)(x) = (1 / mu B(x,s)) * sum_{y in B(x,s)} f(y) mu(y),   x in supp mu,
/// and (A f)(x) = 0 off the support.
///
/// Rows keep only the support members of each ball, in ascending id. The
/// operator holds non-owning references to its space and measure, which must
/// outlive it.
class AveragingOperator
{
public:
  AveragingOperator(const MetricSpace& space, const DiscreteMeasure& measure, double radius,
                    BallKind kind);

  double radius() const { return radius_; }
  BallKind kind() const { return kind_; }
  Index size() const { return measure_->size(); }
  const MetricSpace& space() const { return *space_; }
  const DiscreteMeasure& measure() const { return *measure_; }

  // Support members of B(x,s) (empty off the support).
  std::span<const Index> row(Index x) const
  {
    return { members_.data() + offsets_[x], members_.data() + offsets_[x + 1] };
  }
  // mu B(x,s) for x in the support, 0 elsewhere.
  double ball_measure(Index x) const { return ball_measure_[x]; }
  const Eigen::VectorXd& ball_measures() const { return ball_measure_; }

  // Number of stored coefficients.
  Index nonzeros() const { return static_cast<Index>(members_.size()); }

  // Coefficient matrix with entries mu(y) / mu B(x,s).
  SparseRowMatrix matrix() const;

  Function apply(const Function& f) const;

private:
  const MetricSpace* space_;
  const DiscreteMeasure* measure_;
  double radius_;
  BallKind kind_;
  std::vector<std::int64_t> offsets_;
  std::vector<Index> members_;
  Eigen::VectorXd ball_measure_;
};

// Throws PreconditionError unless radius > 0 and the sizes agree.
AveragingOperator build_operator(const MetricSpace& space, const DiscreteMeasure& measure,
                                 double radius, BallKind kind);

inline Function apply(const AveragingOperator& op, const Function& f) { return op.apply(f); }

// a_s(y) = sum over x in B(y,s) of mu(x) / mu B(x,s), for y in the support;
// 0 off the support.
struct ConjugateFunction
{
  double radius = 0.0;
  BallKind kind = BallKind::closed;
  Eigen::VectorXd values;
};

ConjugateFunction conjugate_function(const AveragingOperator& op);
ConjugateFunction conjugate_function(const MetricSpace& space, const DiscreteMeasure& measure,
                                     double radius, BallKind kind);

struct NormResult
{
  double norm = 0.0;
  Index argmax = 0; // lowest id attaining the max
};

// L1 -> L1 operator norm as the sup of the conjugate function.
NormResult l1_operator_norm_with_argmax(const AveragingOperator& op);
inline double l1_operator_norm(const AveragingOperator& op)
{
  return l1_operator_norm_with_argmax(op).norm;
}

inline constexpr Index kBruteForceSupportCap = 5000;

// Independent check of the L1 norm: applies the operator to every point
// indicator and takes the largest ||A 1_y||_1 / ||1_y||_1. Positivity of the
// operator makes indicators extremal. Requires |supp| <= 5000.
double l1_norm_bruteforce_oracle(const AveragingOperator& op);

struct GreedySelection
{
  Index anchor = 0;
  double radius = 0.0;
  BallKind kind = BallKind::closed;
  double epsilon = 0.0;
  std::vector<Index> selected;           // u_1..u_m
  std::vector<double> thresholds;        // b_1..b_m
  std::vector<double> selected_measures; // mu B(u_k, s)
  Index m = 0;
  // points x of B(y,s) on the support where mu B(u_i,s) > (1+eps) mu B(x,s)
  // for the first i with x in B(u_i,s); the construction forces zero
  Index domination_violations = 0;
};

/// Covers B(y,s) on the support by balls around points of nearly minimal
/// ball measure: at step k, b_k is the least mu B(x,s) over the points of
/// B(y,s) not yet covered, and u_k is the lowest-id uncovered point with
/// mu B(u_k,s) < (1+eps) b_k. Stops once B(y,s) is covered.
/// Throws AnchorOffSupport when y has zero weight.
GreedySelection greedy_min_measure_selection(const MetricSpace& space,
                                             const DiscreteMeasure& measure, Index anchor,
                                             double radius, BallKind kind, double epsilon);

struct NetBoundWitness
{
  Index anchor = 0;
  double epsilon = 0.0;
  double conjugate = 0.0; // a_s(y)
  Index m = 0;
  std::string reason;
};

struct NetBoundReport
{
  double radius = 0.0;
  BallKind kind = BallKind::closed;
  double norm = 0.0;
  Index M = 0;
  bool M_exact = false;
  bool pass = true;
  // a check against an exact M failed; impossible if the theory holds
  bool falsification = false;
  Index greedy_runs = 0;
  std::vector<NetBoundWitness> failures;
};

inline const std::vector<double> kDefaultEpsilons{ 0.5, 0.1, 0.01 };

// Checks ||A_s||_1 <= M (when M is exact) and, for every support anchor y and
// each eps, a_s(y) <= (1+eps) m(y,eps), m(y,eps) <= M and the greedy
// invariants.
NetBoundReport verify_net_bound(const MetricSpace& space, const DiscreteMeasure& measure,
                                double radius, BallKind kind, const NetStats& M,
                                const std::vector<double>& epsilons = kDefaultEpsilons);

struct LpBoundReport
{
  double p = 0.0;
  double bound = 0.0; // M^(1/p)
  Index trials = 0;
  Index violations = 0;
  Index linf_violations = 0;
  double max_ratio = 0.0;  // empirical lower bound on the L^p norm
  double ones_ratio = 0.0; // ||A 1||_p / ||1||_p
};

// Monte-Carlo check of ||A f||_p <= M^(1/p) ||f||_p + 1e-9 and
// ||A f||_inf <= ||f||_inf on standard normal f drawn on the support.
LpBoundReport lp_bound_check(const AveragingOperator& op, double p, Index M, Index trials,
                             std::uint64_t seed = 42);

struct ComparabilityReport
{
  double C = 1.0;
  Index x = 0;
  Index y = 0;
  double r = 0.0;
  // max over the grid of ||A_r||_1, and whether it stays <= C + 1e-12
  double max_norm = 0.0;
  double max_norm_radius = 0.0;
  bool implication_holds = true;
  std::vector<double> radii;
};

// Radii at which every ball-measure ratio over support pairs changes: the
// distinct positive support distances and the midpoints between consecutive
// ones.
std::vector<double> comparability_radii(const MetricSpace& space, const DiscreteMeasure& measure);

// C = max of mu B(x,r) / mu B(y,r) over ordered support pairs with
// d(x,y) < r and r in comparability_radii(); also evaluates ||A_r||_1 over
// that grid.
ComparabilityReport local_comparability_constant(const MetricSpace& space,
                                                 const DiscreteMeasure& measure, BallKind kind);

// Distinct positive support distances plus half the smallest one.
std::vector<double> default_radii_grid(const MetricSpace& space, const DiscreteMeasure& measure);

// Mf(x) = max over radii of (A_r |f|)(x) on the support, 0 elsewhere.
// Throws EmptyRadii, and PreconditionError unless some radius lies below the
// smallest positive support distance.
Function maximal_function(const MetricSpace& space, const DiscreteMeasure& measure,
                          const Function& f, std::span<const double> radii,
                          BallKind kind = BallKind::closed);

} // namespace mmslab
