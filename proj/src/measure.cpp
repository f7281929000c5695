#include "mmslab/measure.hpp"

namespace mmslab {

DiscreteMeasure::DiscreteMeasure(Eigen::VectorXd weights)
  : weights_(std::move(weights))
{
  for (Index i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0)
      throw PreconditionError("measure weights must be finite and nonnegative");
    total_ += w;
    if (w > 0.0)
      support_.push_back(i);
  }
  if (support_.empty())
    throw EmptySupport("measure is identically zero");
}

double mu_ball(const DiscreteMeasure& measure, const Ball& b)
{
  double acc = 0.0;
  for (Index y : b.members)
    acc += measure.weight(y);
  return acc;
}

double mu_ball(const MetricSpace& space, const DiscreteMeasure& measure,
               Index center, double radius, BallKind kind)
{
  double acc = 0.0;
  for (Index y = 0; y < space.size(); ++y)
    if (in_ball(space.distance(center, y), radius, kind))
      acc += measure.weight(y);
  return acc;
}

Function restrict_to_support(const DiscreteMeasure& measure, const Function& f)
{
  Function out = f;
  for (Index i = 0; i < out.size(); ++i)
    if (!measure.in_support(i))
      out[i] = 0.0;
  return out;
}

void check_function(const DiscreteMeasure& measure, const Function& f)
{
  if (f.size() != measure.size())
    throw PreconditionError("function length does not match the number of points");
  if (!f.allFinite())
    throw PreconditionError("function values must be finite");
}

} // namespace mmslab
