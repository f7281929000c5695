#include "mmslab/constructions.hpp"
#include "mmslab/nets.hpp"

#include "oracles.hpp"

#include "gtest/gtest.h"

using namespace mmslab;

namespace {

MetricSpace line3()
{
  PointCloud p(3, 1);
  p << 0, 1, 2;
  return MetricSpace::from_coordinates(p, Norm::l2);
}

MetricSpace single_point()
{
  PointCloud p(1, 2);
  p << 0.5, 0.5;
  return MetricSpace::from_coordinates(p, Norm::l2);
}

} // namespace

TEST(MaxNetInBall, SquareVerticesAroundOrigin)
{
  const auto cube = gen_cube_vertices(2);
  const Index origin = 4;
  const auto s = max_net_in_ball(cube, origin, 1.0, BallKind::closed, NetKind::strict);
  EXPECT_EQ(s.cardinality, 4);
  EXPECT_TRUE(s.exact);
  EXPECT_EQ(s.net_points, (std::vector<Index>{ 0, 1, 2, 3 }));
}

TEST(MaxNetInBall, SinglePoint)
{
  const auto s = max_net_in_ball(single_point(), 0, 1.0, BallKind::closed, NetKind::strict);
  EXPECT_EQ(s.cardinality, 1);
}

TEST(MaxNetInBall, LineStrictNet)
{
  const auto s = max_net_in_ball(line3(), 1, 1.0, BallKind::closed, NetKind::strict);
  EXPECT_EQ(s.cardinality, 2);
  EXPECT_EQ(s.net_points, (std::vector<Index>{ 0, 2 }));
  EXPECT_EQ(oracle::max_net_bruteforce(line3(), { 0, 1, 2 }, 1.0, true), 2);
}

TEST(MaxNetInBall, RejectsMismatchedKinds)
{
  EXPECT_THROW(max_net_in_ball(line3(), 1, 1.0, BallKind::closed, NetKind::non_strict),
               PreconditionError);
}

TEST(NetConstant, Examples)
{
  const auto M2 = net_constant_M(gen_cube_vertices(2), BallKind::closed);
  EXPECT_EQ(M2.cardinality, 4);
  EXPECT_TRUE(M2.exact);
  EXPECT_EQ(net_constant_M(single_point(), BallKind::closed).cardinality, 1);
  EXPECT_EQ(net_constant_M(line3(), BallKind::closed).cardinality, 2);
  EXPECT_EQ(net_constant_M(gen_cube_vertices(3), BallKind::closed).cardinality, 8);
}

TEST(NetConstant, MatchesSubsetEnumeration)
{
  RandomInstanceOptions ro;
  ro.max_points = 11;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = random_instance(seed, ro);
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      const auto M = net_constant_M(inst.space, kind);
      ASSERT_TRUE(M.exact);
      ASSERT_EQ(M.cardinality, oracle::net_constant_bruteforce(inst.space, kind))
        << "seed " << seed << " " << to_string(kind);
      ASSERT_TRUE(is_net(inst.space, M.net_points, M.radius, net_kind_for(kind)));
    }
  }
}

TEST(NetConstant, GreedyNeverBeatsExact)
{
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(seed, { 10, 18, 3, true });
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      const auto exact = net_constant_M(inst.space, kind, {}, 18);
      const auto greedy = net_constant_M(inst.space, kind, {}, 0);
      EXPECT_TRUE(exact.exact);
      EXPECT_LE(greedy.cardinality, exact.cardinality);
      EXPECT_TRUE(is_net(inst.space, greedy.net_points, greedy.radius, net_kind_for(kind)));
    }
  }
}

TEST(NetConstant, GreedyFlagWhenBallsExceedCap)
{
  const auto inst = gen_sharpness(2, 8);
  const auto M = net_constant_M(inst.space, BallKind::closed, {}, 6);
  EXPECT_FALSE(M.exact);
  EXPECT_GE(M.cardinality, 4);
}

TEST(MinCover, ExhaustiveMatchesEnumeration)
{
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(seed, { 3, 12, 2, true });
    const auto& s = inst.space;
    for (BallKind kind : { BallKind::open, BallKind::closed })
      for (double r : s.pairwise_distances()) {
        const auto targets = ball(s, 0, r, kind).members;
        const auto exact = min_ball_cover(s, targets, r / 2, kind);
        const auto greedy = greedy_ball_cover(s, targets, r / 2, kind);
        ASSERT_TRUE(exact.exact);
        ASSERT_EQ(static_cast<Index>(exact.centers.size()),
                  oracle::min_cover_bruteforce(s, targets, r / 2, kind));
        ASSERT_GE(greedy.centers.size(), exact.centers.size());
        for (Index t : targets) {
          bool covered = false;
          for (Index c : exact.centers)
            covered = covered || in_ball(s.distance(c, t), r / 2, kind);
          ASSERT_TRUE(covered);
        }
      }
  }
}

TEST(Doubling, Examples)
{
  const auto one = doubling_upper_bound(single_point(), BallKind::closed);
  EXPECT_EQ(one.upper_bound, 1);
  EXPECT_EQ(one.lower_bound, 1);

  const auto line = doubling_upper_bound(line3(), BallKind::closed);
  EXPECT_EQ(line.lower_bound, 2);
  EXPECT_EQ(line.upper_bound, 3);
  EXPECT_EQ(line.method, DoublingEstimate::Method::exhaustive);
  // B(1,2) = {0,1,2} is covered by the single closed ball B(1,1); B(1,1)
  // needs three radius-1/2 balls, which sets the upper bound
  EXPECT_EQ(min_ball_cover(line3(), std::vector<Index>{ 0, 1, 2 }, 1.0, BallKind::closed)
              .centers.size(),
            1u);
  EXPECT_EQ(min_ball_cover(line3(), std::vector<Index>{ 0, 1, 2 }, 0.5, BallKind::closed)
              .centers.size(),
            3u);

  const auto sq = doubling_upper_bound(gen_cube_vertices(2), BallKind::closed);
  EXPECT_EQ(sq.lower_bound, 4);
  EXPECT_GE(sq.upper_bound, sq.lower_bound);
}

TEST(Doubling, NetConstantNeverExceedsCover)
{
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const auto inst = random_instance(seed, { 2, 16, 3, true });
    for (BallKind kind : { BallKind::open, BallKind::closed }) {
      const auto d = doubling_upper_bound(inst.space, kind);
      EXPECT_LE(d.lower_bound, d.upper_bound);
      EXPECT_TRUE(d.lower_exact);
    }
  }
}
