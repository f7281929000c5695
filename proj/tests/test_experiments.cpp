#include "mmslab/constructions.hpp"
#include "mmslab/experiments.hpp"

#include "gtest/gtest.h"

#include <cmath>

using namespace mmslab;

namespace {

MetricSpace line3()
{
  PointCloud p(3, 1);
  p << 0, 1, 2;
  return MetricSpace::from_coordinates(p, Norm::l2);
}

} // namespace

TEST(Scan, LineRows)
{
  const auto space = line3();
  const auto mu = DiscreteMeasure::uniform(3, 1.0);
  const std::vector<double> radii{ 0.5, 1.0, 2.0, 3.0 };
  const std::vector<BallKind> kinds{ BallKind::closed };
  const std::vector<double> ps{ 2.0 };
  const auto rows = scan(space, mu, radii, kinds, ps);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_DOUBLE_EQ(rows[0].l1_norm, 1.0);
  EXPECT_NEAR(rows[1].l1_norm, 4.0 / 3, 1e-15);
  EXPECT_DOUBLE_EQ(rows[3].l1_norm, 1.0);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.M.has_value());
    EXPECT_EQ(*row.M, 2);
    EXPECT_TRUE(row.M_exact);
    ASSERT_TRUE(row.C.has_value());
    EXPECT_DOUBLE_EQ(*row.C, 1.5);
    EXPECT_EQ(row.l1_norm, row.max_a_s);
    ASSERT_EQ(row.p_checks.size(), 1u);
    EXPECT_EQ(row.p_checks[0].violations, 0);
  }
}

TEST(Scan, LargeSpaceSkipsConstants)
{
  const auto s = sample_instance(Generator::gaussian, 2, 60, 3);
  ScanOptions opts;
  opts.max_points_for_constants = 50;
  const std::vector<double> radii{ 0.5 };
  const std::vector<BallKind> kinds{ BallKind::open, BallKind::closed };
  const auto rows = scan(s.space, s.measure, radii, kinds, {}, opts);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].M.has_value());
  EXPECT_FALSE(rows[0].C.has_value());
  EXPECT_GE(rows[0].l1_norm, 1.0);
}

TEST(Convergence, LineExample)
{
  const auto space = line3();
  const auto mu = DiscreteMeasure::uniform(3, 1.0);
  const Function f = evaluate_function_spec(space, "point:1");
  const std::vector<double> ps{ 1.0 };
  const std::vector<double> radii{ 1.5, 0.5 };
  const auto res = convergence_experiment(space, mu, f, ps, radii);
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_NEAR(res.rows[0].error, 5.0 / 3, 1e-15);
  EXPECT_EQ(res.rows[1].error, 0.0);
  EXPECT_DOUBLE_EQ(res.min_gap, 1.0);
  EXPECT_NEAR(res.sup_norm, 4.0 / 3, 1e-15);
}

TEST(Convergence, RejectsBadRadii)
{
  const auto space = line3();
  const auto mu = DiscreteMeasure::uniform(3, 1.0);
  const Function f = Function::Ones(3);
  const std::vector<double> ps{ 1.0 };
  EXPECT_THROW(convergence_experiment(space, mu, f, ps, std::vector<double>{ 0.5, 1.0 }),
               NonDecreasingRadii);
  EXPECT_THROW(convergence_experiment(space, mu, f, ps, std::vector<double>{ 0.5, 0.5 }),
               NonDecreasingRadii);
}

TEST(Convergence, ExactTailOnSample)
{
  const auto s = sample_instance(Generator::exponential_1d, 1, 300, 4);
  const Function f = evaluate_function_spec(s.space, "indicator:0:1");
  const std::vector<double> ps{ 1.0, 2.0, kInfinity };
  const auto radii = dyadic_radii(0, 24);
  const auto res = convergence_experiment(s.space, s.measure, f, ps, radii);
  for (const auto& row : res.rows)
    if (row.radius < res.min_gap)
      EXPECT_EQ(row.error, 0.0);
}

TEST(FunctionSpecs, Parse)
{
  const auto space = line3();
  const Function g = evaluate_function_spec(space, "gaussian_bump");
  EXPECT_DOUBLE_EQ(g[1], std::exp(-1.0));
  const Function ind = evaluate_function_spec(space, "indicator:0:1");
  EXPECT_EQ(ind, (Function(3) << 1, 1, 0).finished());
  EXPECT_EQ(evaluate_function_spec(space, "constant:2.5"), Function::Constant(3, 2.5));
  EXPECT_EQ(evaluate_function_spec(space, "point:2"), (Function(3) << 0, 0, 1).finished());
  EXPECT_THROW(evaluate_function_spec(space, "point:3"), FormatError);
  EXPECT_THROW(evaluate_function_spec(space, "indicator:1:0"), FormatError);
  EXPECT_THROW(evaluate_function_spec(space, "constant:x"), FormatError);
  EXPECT_THROW(evaluate_function_spec(space, "sine"), FormatError);
}

TEST(DyadicRadii, Values)
{
  EXPECT_EQ(dyadic_radii(0, 3), (std::vector<double>{ 1, 0.5, 0.25, 0.125 }));
  EXPECT_EQ(dyadic_radii(-1, 0), (std::vector<double>{ 2, 1 }));
}

TEST(Verify, SmallScaleSuitesPass)
{
  VerifyOptions opts;
  opts.scale = 0.05;
  const auto rep =
    verify_suite({ "duality", "net_bound", "sharpness", "comparability", "maximal",
                   "interpolation" },
                 opts);
  ASSERT_EQ(rep.suites.size(), 6u);
  for (const auto& s : rep.suites) {
    EXPECT_TRUE(s.passed) << s.name << ": " << s.witness;
    EXPECT_GT(s.checks, 0);
  }
  EXPECT_TRUE(rep.passed);
}

TEST(Verify, SelectionErrors)
{
  EXPECT_THROW(verify_suite({}), EmptySelection);
  EXPECT_THROW(verify_suite({ "bogus" }), FormatError);
}
