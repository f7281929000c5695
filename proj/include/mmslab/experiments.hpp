#pragma once

#include "mmslab/averaging.hpp"
#include "mmslab/core.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace mmslab {

struct ScanOptions
{
  Index exhaustive_cap = kDefaultNetCap;
  Index trials = 200;
  std::uint64_t seed = 42;
  // M and C are skipped on spaces (resp. supports) larger than this
  Index max_points_for_constants = 400;
  // the indicator oracle cross-checks the norm up to this support size
  Index oracle_cap = 500;
};

struct ScanRow
{
  double radius = 0.0;
  BallKind kind = BallKind::closed;
  double l1_norm = 0.0;
  double max_a_s = 0.0;
  Index argmax = 0;
  std::optional<Index> M;
  bool M_exact = false;
  std::optional<double> C;
  std::vector<LpBoundReport> p_checks; // only when M is exact
};

// One row per (radius, kind). Throws InvariantViolation if the norm differs
// from the oracle, exceeds an exact M or exceeds C.
std::vector<ScanRow> scan(const MetricSpace& space, const DiscreteMeasure& measure,
                          std::span<const double> radii, std::span<const BallKind> kinds,
                          std::span<const double> p_list, const ScanOptions& options = {});

struct ConvergenceRow
{
  double radius = 0.0;
  double p = 1.0;
  double error = 0.0;         // ||A_r f - f||_p
  double operator_norm = 0.0; // ||A_r||_{L1 -> L1}
};

struct ConvergenceResult
{
  std::vector<ConvergenceRow> rows; // radius-major, p-minor
  double min_gap = 0.0;             // smallest positive support distance
  double sup_norm = 0.0;            // max over rows of ||A_r||_1
};

/// Runs A_r f - f over strictly decreasing radii. Throws NonDecreasingRadii on
/// bad input, and InvariantViolation when a radius below the smallest support
/// gap leaves a nonzero error or when sup ||A_r||_1 exceeds `exact_M`.
ConvergenceResult convergence_experiment(const MetricSpace& space, const DiscreteMeasure& measure,
                                         const Function& f, std::span<const double> p_list,
                                         std::span<const double> radii,
                                         BallKind kind = BallKind::closed,
                                         std::optional<Index> exact_M = std::nullopt);

/// Built-in test functions:
///   gaussian_bump          exp(-|x|_2^2)           (needs coordinates)
///   indicator:<j>:<t>      1 where coordinate j <= t (needs coordinates)
///   point:<id>             indicator of one point
///   constant:<c>           c everywhere
/// Throws FormatError on anything else.
Function evaluate_function_spec(const MetricSpace& space, const std::string& spec);

// Radii 2^-k for k = first..last.
std::vector<double> dyadic_radii(int first, int last);

inline const std::vector<std::string> kSuiteNames{ "duality",    "net_bound", "sharpness",
                                                   "comparability", "maximal", "convergence",
                                                   "interpolation" };

struct SuiteResult
{
  std::string name;
  bool passed = true;
  Index checks = 0;
  double seconds = 0.0;
  std::string detail;
  std::string witness; // first failure
};

struct VerifyReport
{
  std::vector<SuiteResult> suites;
  bool passed = true;
};

struct VerifyOptions
{
  std::uint64_t seed = 1;
  // scales every instance count; 1.0 runs the full suites
  double scale = 1.0;
};

// Runs the named suites in the order of kSuiteNames. Throws EmptySelection on
// an empty selection and FormatError on an unknown name.
VerifyReport verify_suite(const std::set<std::string>& selection,
                          const VerifyOptions& options = {});

} // namespace mmslab
