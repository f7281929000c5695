#pragma once

#include "mmslab/core.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mmslab {

inline constexpr int kMaxConstructionDim = 10;
inline constexpr Index kDefaultPointCap = Index{ 1 } << 20;

/// Extremal family on (R^d, l_inf). Cluster n = 1..N has a center 3n e_1 of
/// weight 1/n surrounded by the 2^d vertices of [-3/4, 3/4]^d + 3n e_1, each
/// of weight 1; the test function f_n = n 1_{center_n} has unit L1 norm.
/// All coordinates are dyadic, so every l_inf distance is exact.
struct SharpnessInstance
{
  int dim = 1;
  Index clusters = 0;
  MetricSpace space;
  DiscreteMeasure measure;
  std::vector<Index> centers;               // centers[n-1]
  std::vector<std::vector<Index>> vertices; // vertices[n-1]

  Function test_function(Index n) const;
};

// Throws TooLarge when d > 10 or (2^d + 1) N > point_cap.
SharpnessInstance gen_sharpness(int dim, Index clusters, Index point_cap = kDefaultPointCap);

struct SharpnessRow
{
  Index n = 0;
  double value = 0.0;           // ||A_1 f_n||_1, closed balls
  double lower = 0.0;           // 2^d n / (n+1)
  double margin = 0.0;          // value - lower
  double required_margin = 0.0; // n^-1 / (n^-1 + 2^d)
  bool strict = false;
};

struct SharpnessReport
{
  int dim = 1;
  std::vector<SharpnessRow> rows;
  double operator_norm = 0.0; // ||A_1||_{L1 -> L1}
  double gap = 0.0;           // 2^d - operator_norm
  bool all_strict = true;
};

SharpnessReport sharpness_report(const SharpnessInstance& instance);

// 2^d vertices of [-h, h]^d followed by the origin, under l_inf.
MetricSpace gen_cube_vertices(int dim, double half_width = 1.0);

enum class Generator { gaussian, exponential_1d };

const char* to_string(Generator g);
Generator parse_generator(const std::string& s);

struct SampledInstance
{
  Generator generator = Generator::gaussian;
  int dim = 1;
  Index size = 0;
  std::uint64_t seed = 0;
  MetricSpace space;
  DiscreteMeasure measure; // uniform 1/size
};

// gaussian: `dim` standard normal coordinates per point; exponential_1d:
// one rate-1 coordinate (dim is forced to 1). Points are drawn row by row
// from CounterRng(seed).
SampledInstance sample_instance(Generator generator, int dim, Index size, std::uint64_t seed,
                                Norm norm = Norm::l2);

struct RandomInstanceOptions
{
  Index min_points = 2;
  Index max_points = 40;
  int max_dim = 4;
  bool positive_weights = true;
};

// Random finite metric measure space for property checks. Even seeds place
// points on a 1/8 grid under l1 or l_inf so ties at ball boundaries are
// frequent; odd seeds draw continuous coordinates under a random norm.
struct RandomInstance
{
  MetricSpace space;
  DiscreteMeasure measure;
};
RandomInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

} // namespace mmslab
