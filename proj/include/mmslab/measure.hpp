#pragma once

#include "mmslab/core.hpp"
#include "mmslab/metric_space.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mmslab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Nonnegative point masses, not identically zero. Zero-weight points stay in
// the space; they only drop out of the support.
class DiscreteMeasure
{
public:
  // Throws EmptySupport if every weight is zero, PreconditionError on a
  // negative or non-finite weight.
  explicit DiscreteMeasure(Eigen::VectorXd weights);

  static DiscreteMeasure uniform(Index n, double each = 1.0)
  {
    return DiscreteMeasure(Eigen::VectorXd::Constant(n, each));
  }

  Index size() const { return weights_.size(); }
  double weight(Index i) const { return weights_[i]; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double total() const { return total_; }
  bool in_support(Index i) const { return weights_[i] > 0.0; }
  const std::vector<Index>& support() const { return support_; }

private:
  Eigen::VectorXd weights_;
  double total_ = 0.0;
  std::vector<Index> support_;
};

// Sum of weights over the members, ascending point id.
double mu_ball(const DiscreteMeasure& measure, const Ball& b);
double mu_ball(const MetricSpace& space, const DiscreteMeasure& measure,
               Index center, double radius, BallKind kind);

// Weighted L^p norm (sum |f_i|^p w_i)^(1/p); p = kInfinity gives the max of
// |f| over the support. Throws InvalidP for p < 1.
template <typename Derived>
double lp_norm(const DiscreteMeasure& measure, const Eigen::MatrixBase<Derived>& f, double p)
{
  if (!(p >= 1.0))
    throw InvalidP("p must satisfy 1 <= p <= inf");
  const auto& w = measure.weights();
  if (std::isinf(p)) {
    double best = 0.0;
    for (Index i = 0; i < f.size(); ++i)
      if (w[i] > 0.0)
        best = std::max(best, std::abs(f[i]));
    return best;
  }
  double acc = 0.0;
  if (p == 1.0) {
    for (Index i = 0; i < f.size(); ++i)
      acc += std::abs(f[i]) * w[i];
    return acc;
  }
  for (Index i = 0; i < f.size(); ++i)
    acc += std::pow(std::abs(f[i]), p) * w[i];
  return std::pow(acc, 1.0 / p);
}

// Zeroes f off the support.
Function restrict_to_support(const DiscreteMeasure& measure, const Function& f);

// Throws PreconditionError unless f has one finite value per point.
void check_function(const DiscreteMeasure& measure, const Function& f);

} // namespace mmslab
