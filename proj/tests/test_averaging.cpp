#include "mmslab/averaging.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/rng.hpp"

#include "oracles.hpp"

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

DiscreteMeasure ones(Index n) { return DiscreteMeasure::uniform(n, 1.0); }

Function indicator(Index n, Index at)
{
  Function f = Function::Zero(n);
  f[at] = 1.0;
  return f;
}

} // namespace

TEST(Averaging, LineRows)
{
  const auto space = line3();
  const auto mu = ones(3);
  const auto op = build_operator(space, mu, 1.0, BallKind::closed);
  const Eigen::MatrixXd m = op.matrix().toDense();
  Eigen::MatrixXd expected(3, 3);
  expected << 0.5, 0.5, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0.5, 0.5;
  EXPECT_TRUE(m.isApprox(expected, 1e-15));
  EXPECT_EQ(op.nonzeros(), 7);

  const Function af = op.apply(indicator(3, 1));
  EXPECT_DOUBLE_EQ(af[0], 0.5);
  EXPECT_DOUBLE_EQ(af[1], 1.0 / 3);
  EXPECT_DOUBLE_EQ(af[2], 0.5);
}

TEST(Averaging, LineConjugateAndNorm)
{
  const auto space = line3();
  const auto mu = ones(3);
  const auto op = build_operator(space, mu, 1.0, BallKind::closed);
  const auto a = conjugate_function(op);
  EXPECT_NEAR(a.values[0], 5.0 / 6, 1e-15);
  EXPECT_NEAR(a.values[1], 4.0 / 3, 1e-15);
  EXPECT_NEAR(a.values[2], 5.0 / 6, 1e-15);
  const auto n = l1_operator_norm_with_argmax(op);
  EXPECT_NEAR(n.norm, 4.0 / 3, 1e-15);
  EXPECT_EQ(n.argmax, 1);
  EXPECT_NEAR(l1_norm_bruteforce_oracle(op), 4.0 / 3, 1e-15);
}

TEST(Averaging, OpenBallsAtSmallRadiusAreIdentity)
{
  const auto space = line3();
  const auto mu = ones(3);
  const auto op = build_operator(space, mu, 1.0, BallKind::open);
  const Function f = (Function(3) << 3, -1, 7).finished();
  EXPECT_EQ(op.apply(f), f);
  EXPECT_EQ(l1_operator_norm(op), 1.0);
}

TEST(Averaging, OffSupportRowsAreZero)
{
  const auto space = line3();
  const DiscreteMeasure mu((Eigen::VectorXd(3) << 1, 0, 1).finished());
  const auto op = build_operator(space, mu, 1.5, BallKind::closed);
  const Function af = op.apply(Function::Constant(3, 4.0));
  EXPECT_EQ(af[0], 4.0);
  EXPECT_EQ(af[1], 0.0);
  EXPECT_EQ(af[2], 4.0);
  EXPECT_EQ(conjugate_function(op).values[1], 0.0);
  EXPECT_TRUE(op.row(1).empty());
}

TEST(Averaging, Preconditions)
{
  EXPECT_THROW(build_operator(line3(), ones(3), 0.0, BallKind::closed), PreconditionError);
  EXPECT_THROW(build_operator(line3(), ones(4), 1.0, BallKind::closed), PreconditionError);
  const auto space = line3();
  const auto mu = ones(3);
  const auto op = build_operator(space, mu, 1.0, BallKind::closed);
  EXPECT_THROW(op.apply(Function::Zero(2)), PreconditionError);
}

TEST(Averaging, MatchesDenseOracleOnRandomSpaces)
{
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const auto inst = random_instance(seed, { 2, 30, 3, seed % 3 != 0 });
    const auto radii = inst.space.pairwise_distances();
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      for (std::size_t k = 0; k < radii.size(); k += 1 + radii.size() / 5) {
        const double r = radii[k];
        const auto op = build_operator(inst.space, inst.measure, r, kind);
        const Eigen::MatrixXd dense =
          oracle::dense_average(inst.space, inst.measure.weights(), r, kind);
        ASSERT_TRUE(op.matrix().toDense().isApprox(dense, 1e-14)) << "seed " << seed;

        const double oracle_norm = oracle::dense_l1_norm(dense, inst.measure.weights());
        const double norm = l1_operator_norm(op);
        EXPECT_NEAR(norm, oracle_norm, 1e-12 * oracle_norm) << "seed " << seed;
        EXPECT_NEAR(l1_norm_bruteforce_oracle(op), norm, 1e-12 * norm);
        EXPECT_GE(norm, 1.0 - 1e-12);
      }
    }
  }
}

TEST(Averaging, FubiniIdentity)
{
  CounterRng rng(7);
  for (std::uint64_t seed = 2; seed <= 40; ++seed) {
    const auto inst = random_instance(seed);
    const double r = inst.space.diameter() * 0.4 + 1e-3;
    const auto op = build_operator(inst.space, inst.measure, r, BallKind::closed);
    const auto a = conjugate_function(op);
    Function f(inst.space.size());
    for (Index i = 0; i < f.size(); ++i)
      f[i] = rng.exponential();
    const double lhs = lp_norm(inst.measure, op.apply(f), 1.0);
    const double rhs = (f.array() * a.values.array() * inst.measure.weights().array()).sum();
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
  }
}

TEST(Averaging, PositivityAndModulus)
{
  CounterRng rng(11);
  for (std::uint64_t seed = 3; seed <= 30; ++seed) {
    const auto inst = random_instance(seed);
    const auto op =
      build_operator(inst.space, inst.measure, inst.space.diameter() / 3 + 1e-6, BallKind::open);
    Function f(inst.space.size());
    for (Index i = 0; i < f.size(); ++i)
      f[i] = rng.normal();
    const Function af = op.apply(f);
    const Function a_abs = op.apply(f.cwiseAbs());
    EXPECT_TRUE((a_abs.array() >= 0).all());
    EXPECT_TRUE((af.cwiseAbs().array() <= a_abs.array() + 1e-14).all());
    const Function a1 = op.apply(Function::Ones(f.size()));
    for (Index x = 0; x < f.size(); ++x)
      EXPECT_EQ(a1[x], inst.measure.in_support(x) ? 1.0 : 0.0);
  }
}

TEST(Averaging, StabilizesAboveDiameter)
{
  const auto inst = random_instance(5);
  const double diam = inst.space.diameter();
  const auto op = build_operator(inst.space, inst.measure, diam, BallKind::closed);
  EXPECT_NEAR(l1_operator_norm(op), 1.0, 1e-12);
  const auto op2 = build_operator(inst.space, inst.measure, 2 * diam, BallKind::open);
  EXPECT_NEAR(l1_operator_norm(op2), 1.0, 1e-12);
}

TEST(Averaging, SharpnessNormBelowTwoToTheD)
{
  const auto inst = gen_sharpness(2, 64);
  const auto op = build_operator(inst.space, inst.measure, 1.0, BallKind::closed);
  const double norm = l1_operator_norm(op);
  EXPECT_GT(norm, 4.0 * 64 / 65);
  EXPECT_LT(norm, 4.0);
}

TEST(Averaging, SharpnessCenterConjugateOneDim)
{
  const auto inst = gen_sharpness(1, 6);
  const auto a = conjugate_function(inst.space, inst.measure, 1.0, BallKind::closed);
  for (Index n = 1; n <= 6; ++n) {
    const double w = 1.0 / n;
    const double expected = w / (2 + w) + 2.0 / (1 + w);
    EXPECT_NEAR(a.values[inst.centers[n - 1]], expected, 1e-15);
  }
}

TEST(Greedy, LineTrace)
{
  for (double eps : { 0.5, 0.1, 0.01 }) {
    const auto g = greedy_min_measure_selection(line3(), ones(3), 1, 1.0, BallKind::closed, eps);
    EXPECT_EQ(g.selected, (std::vector<Index>{ 0, 2 }));
    EXPECT_EQ(g.thresholds, (std::vector<double>{ 2, 2 }));
    EXPECT_EQ(g.m, 2);
    EXPECT_EQ(g.domination_violations, 0);
  }
}

TEST(Greedy, AnchorOffSupportThrows)
{
  const DiscreteMeasure mu((Eigen::VectorXd(3) << 1, 0, 1).finished());
  EXPECT_THROW(greedy_min_measure_selection(line3(), mu, 1, 1.0, BallKind::closed, 0.1),
               AnchorOffSupport);
}

TEST(Greedy, ConjugateBoundedByMultiplicity)
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_instance(seed, { 2, 25, 3, true });
    const auto radii = inst.space.pairwise_distances();
    const double r = radii[radii.size() / 2];
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      const auto a = conjugate_function(inst.space, inst.measure, r, kind);
      for (double eps : kDefaultEpsilons)
        for (Index y = 0; y < inst.space.size(); ++y) {
          const auto g = greedy_min_measure_selection(inst.space, inst.measure, y, r, kind, eps);
          EXPECT_LE(a.values[y], (1 + eps) * g.m * (1 + 1e-12));
          EXPECT_EQ(g.domination_violations, 0);
          for (std::size_t k = 1; k < g.thresholds.size(); ++k)
            EXPECT_LE(g.thresholds[k - 1], g.thresholds[k]);
        }
    }
  }
}

TEST(NetBound, LineAndRandom)
{
  const auto space = line3();
  const auto mu = ones(3);
  const auto M = net_constant_M(space, BallKind::closed);
  const auto rep = verify_net_bound(space, mu, 1.0, BallKind::closed, M);
  EXPECT_TRUE(rep.pass);
  EXPECT_FALSE(rep.falsification);
  EXPECT_EQ(rep.M, 2);
  EXPECT_NEAR(rep.norm, 4.0 / 3, 1e-15);

  for (std::uint64_t seed = 10; seed < 40; ++seed) {
    const auto inst = random_instance(seed, { 2, 18, 3, true });
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      const auto m = net_constant_M(inst.space, kind);
      ASSERT_TRUE(m.exact);
      for (double r : inst.space.pairwise_distances()) {
        const auto report = verify_net_bound(inst.space, inst.measure, r, kind, m);
        EXPECT_TRUE(report.pass) << "seed " << seed << " r " << r;
      }
    }
  }
}

TEST(LpBound, LineExample)
{
  const auto space = line3();
  const auto mu = ones(3);
  const auto op = build_operator(space, mu, 1.0, BallKind::closed);
  const auto rep = lp_bound_check(op, 2.0, 2, 200);
  EXPECT_NEAR(rep.bound, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_EQ(rep.linf_violations, 0);
  EXPECT_LE(rep.max_ratio, rep.bound);
  EXPECT_NEAR(rep.ones_ratio, 1.0, 1e-15);
  EXPECT_THROW(lp_bound_check(op, 1.0, 2, 10), InvalidP);
  EXPECT_THROW(lp_bound_check(op, kInfinity, 2, 10), InvalidP);
}

TEST(LpBound, Deterministic)
{
  const auto inst = random_instance(9);
  const auto op = build_operator(inst.space, inst.measure, inst.space.diameter() / 2,
                                 BallKind::closed);
  const auto a = lp_bound_check(op, 3.0, 10, 50, 5);
  const auto b = lp_bound_check(op, 3.0, 10, 50, 5);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
}

TEST(Comparability, LineExample)
{
  const auto rep = local_comparability_constant(line3(), ones(3), BallKind::closed);
  EXPECT_DOUBLE_EQ(rep.C, 1.5);
  EXPECT_TRUE(rep.implication_holds);
  EXPECT_LE(rep.max_norm, rep.C + 1e-12);
}

TEST(Comparability, ImplicationOnRandomSpaces)
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_instance(seed, { 2, 20, 3, seed % 2 == 0 });
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      const auto rep = local_comparability_constant(inst.space, inst.measure, kind);
      EXPECT_TRUE(rep.implication_holds) << "seed " << seed;
      // independent check of the ratio at the reported witness
      if (rep.C > 1.0) {
        EXPECT_LT(inst.space.distance(rep.x, rep.y), rep.r);
        const double ratio = mu_ball(inst.space, inst.measure, rep.x, rep.r, kind) /
                             mu_ball(inst.space, inst.measure, rep.y, rep.r, kind);
        EXPECT_DOUBLE_EQ(ratio, rep.C);
      }
      for (double r : inst.space.pairwise_distances()) {
        const auto op = build_operator(inst.space, inst.measure, r, kind);
        EXPECT_LE(l1_operator_norm(op), rep.C + 1e-12);
      }
    }
  }
}

TEST(Maximal, LineExample)
{
  const std::vector<double> radii{ 0.5, 1.0, 2.0 };
  const Function m = maximal_function(line3(), ones(3), indicator(3, 1), radii);
  EXPECT_DOUBLE_EQ(m[0], 0.5);
  EXPECT_DOUBLE_EQ(m[1], 1.0);
  EXPECT_DOUBLE_EQ(m[2], 0.5);
  EXPECT_THROW(maximal_function(line3(), ones(3), indicator(3, 1), std::vector<double>{}),
               EmptyRadii);
  EXPECT_THROW(maximal_function(line3(), ones(3), indicator(3, 1), std::vector<double>{ 1.0 }),
               PreconditionError);
}

TEST(Maximal, DominatesModulus)
{
  CounterRng rng(3);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = random_instance(seed);
    Function f(inst.space.size());
    for (Index i = 0; i < f.size(); ++i)
      f[i] = rng.normal();
    const auto radii = default_radii_grid(inst.space, inst.measure);
    const Function mf = maximal_function(inst.space, inst.measure, f, radii);
    for (Index x = 0; x < f.size(); ++x)
      if (inst.measure.in_support(x))
        EXPECT_GE(mf[x], std::abs(f[x]));
  }
}

TEST(RadiiGrids, Line)
{
  const auto grid = default_radii_grid(line3(), ones(3));
  EXPECT_EQ(grid, (std::vector<double>{ 0.5, 1.0, 2.0 }));
  const auto comp = comparability_radii(line3(), ones(3));
  EXPECT_EQ(comp, (std::vector<double>{ 1.0, 1.5, 2.0 }));
}
