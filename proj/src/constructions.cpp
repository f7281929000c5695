#include "mmslab/constructions.hpp"
#include "mmslab/averaging.hpp"
#include "mmslab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace mmslab {

Function SharpnessInstance::test_function(Index n) const
{
  if (n < 1 || n > clusters)
    throw PreconditionError("cluster index out of range");
  Function f = Function::Zero(space.size());
  f[centers[n - 1]] = static_cast<double>(n);
  return f;
}

SharpnessInstance gen_sharpness(int dim, Index clusters, Index point_cap)
{
  if (dim < 1 || clusters < 1)
    throw PreconditionError("sharpness family needs d >= 1 and N >= 1");
  if (dim > kMaxConstructionDim)
    throw TooLarge("sharpness family limited to d <= 10");
  const Index corners = Index{ 1 } << dim;
  const Index total = (corners + 1) * clusters;
  if (total > point_cap)
    throw TooLarge("sharpness family would exceed the point cap");

  PointCloud pts = PointCloud::Zero(total, dim);
  Eigen::VectorXd weights(total);
  std::vector<Index> centers;
  std::vector<std::vector<Index>> vertices(clusters);
  Index row = 0;
  for (Index n = 1; n <= clusters; ++n) {
    const double shift = 3.0 * static_cast<double>(n);
    pts(row, 0) = shift;
    weights[row] = 1.0 / static_cast<double>(n);
    centers.push_back(row++);
    for (Index v = 0; v < corners; ++v) {
      for (int j = 0; j < dim; ++j)
        pts(row, j) = ((v >> j) & 1) ? 0.75 : -0.75;
      pts(row, 0) += shift;
      weights[row] = 1.0;
      vertices[n - 1].push_back(row++);
    }
  }
  return SharpnessInstance{ dim,
                            clusters,
                            MetricSpace::from_coordinates(std::move(pts), Norm::linf),
                            DiscreteMeasure(std::move(weights)),
                            std::move(centers),
                            std::move(vertices) };
}

SharpnessReport sharpness_report(const SharpnessInstance& inst)
{
  const AveragingOperator op(inst.space, inst.measure, 1.0, BallKind::closed);
  const double corners = std::ldexp(1.0, inst.dim);

  SharpnessReport rep;
  rep.dim = inst.dim;
  for (Index n = 1; n <= inst.clusters; ++n) {
    const double nd = static_cast<double>(n);
    SharpnessRow row;
    row.n = n;
    row.value = lp_norm(inst.measure, op.apply(inst.test_function(n)), 1.0);
    row.lower = corners * nd / (nd + 1.0);
    row.margin = row.value - row.lower;
    row.required_margin = (1.0 / nd) / (1.0 / nd + corners);
    row.strict = row.value > row.lower;
    rep.all_strict = rep.all_strict && row.strict;
    rep.rows.push_back(row);
  }
  rep.operator_norm = l1_operator_norm(op);
  rep.gap = corners - rep.operator_norm;
  return rep;
}

MetricSpace gen_cube_vertices(int dim, double half_width)
{
  if (dim < 1)
    throw PreconditionError("cube dimension must be positive");
  if (dim > kMaxConstructionDim)
    throw TooLarge("cube vertices limited to d <= 10");
  const Index corners = Index{ 1 } << dim;
  PointCloud pts = PointCloud::Zero(corners + 1, dim);
  for (Index v = 0; v < corners; ++v)
    for (int j = 0; j < dim; ++j)
      pts(v, j) = ((v >> j) & 1) ? half_width : -half_width;
  return MetricSpace::from_coordinates(std::move(pts), Norm::linf);
}

const char* to_string(Generator g)
{
  return g == Generator::gaussian ? "gaussian" : "exponential";
}

Generator parse_generator(const std::string& s)
{
  if (s == "gaussian")
    return Generator::gaussian;
  if (s == "exponential" || s == "exponential_1d")
    return Generator::exponential_1d;
  throw FormatError("unknown generator '" + s + "' (expected gaussian|exponential)");
}

SampledInstance sample_instance(Generator generator, int dim, Index size, std::uint64_t seed,
                                Norm norm)
{
  if (size < 1)
    throw PreconditionError("sample size must be positive");
  if (generator == Generator::exponential_1d)
    dim = 1;
  if (dim < 1)
    throw PreconditionError("sample dimension must be positive");

  CounterRng rng(seed);
  PointCloud pts(size, dim);
  for (Index i = 0; i < size; ++i)
    for (int j = 0; j < dim; ++j)
      pts(i, j) = generator == Generator::gaussian ? rng.normal() : rng.exponential();
  return SampledInstance{ generator,
                          dim,
                          size,
                          seed,
                          MetricSpace::from_coordinates(std::move(pts), norm),
                          DiscreteMeasure::uniform(size, 1.0 / static_cast<double>(size)) };
}

RandomInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options)
{
  CounterRng rng(seed * 0x2545F4914F6CDD1DULL + 17);
  Index n = rng.uniform_int(options.min_points, options.max_points);
  const int dim = static_cast<int>(rng.uniform_int(1, options.max_dim));
  const bool grid = seed % 2 == 0;
  if (grid)
    n = std::min<Index>(n, static_cast<Index>(std::pow(17.0, dim)));

  // distinct points only, so every off-diagonal distance is positive
  PointCloud pts(n, dim);
  for (Index i = 0; i < n; ++i) {
    bool fresh = false;
    while (!fresh) {
      for (int j = 0; j < dim; ++j)
        pts(i, j) =
          grid ? static_cast<double>(rng.uniform_int(0, 16)) / 8.0 : rng.uniform(0.0, 2.0);
      fresh = true;
      for (Index k = 0; k < i && fresh; ++k)
        fresh = pts.row(k) != pts.row(i);
    }
  }

  Norm norm;
  if (grid)
    norm = rng.uniform_int(0, 1) == 0 ? Norm::l1 : Norm::linf;
  else
    norm = static_cast<Norm>(rng.uniform_int(0, 2));

  Eigen::VectorXd w(n);
  for (Index i = 0; i < n; ++i)
    w[i] = rng.uniform(0.1, 2.0);
  if (!options.positive_weights)
    for (Index i = 0; i < n; ++i)
      if (rng.uniform() < 0.2)
        w[i] = 0.0;
  if (w.maxCoeff() <= 0.0)
    w[0] = 1.0;
  return RandomInstance{ MetricSpace::from_coordinates(std::move(pts), norm),
                         DiscreteMeasure(std::move(w)) };
}

} // namespace mmslab
