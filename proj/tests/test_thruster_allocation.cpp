#include "ftc/thruster_allocation.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ftc;

namespace {

ThrusterGeometry geom() { return ThrusterGeometry::make(std::numbers::pi / 4.0, 0.2); }

}  // namespace

TEST(PseudoInverse, IsRightInverse)
{
  for (double alpha : {0.2, std::numbers::pi / 4.0, 1.3}) {
    const Mat34 T = config_matrix(alpha, 0.2);
    EXPECT_TRUE((T * pseudo_inverse(T)).isApprox(Mat3::Identity(), 1e-12));
  }
}

TEST(PseudoInverse, FortyFiveDegreeEntries)
{
  const Mat43 Tp = pseudo_inverse(config_matrix(std::numbers::pi / 4.0, 0.2));
  const double a = 1.0 / (4.0 * std::sqrt(0.5));
  Mat43 expected;
  expected << a, -a, -1.25,
              a, a, 1.25,
             -a, -a, 1.25,
             -a, a, -1.25;
  EXPECT_TRUE(Tp.isApprox(expected, 1e-12));
}

TEST(PseudoInverse, RejectsRankDeficientMatrix)
{
  Mat34 T = config_matrix(std::numbers::pi / 4.0, 0.2);
  T.row(2).setZero();
  EXPECT_THROW(pseudo_inverse(T), ValidationError);
}

TEST(Allocate, PureSurgeSplitsEvenly)
{
  ThrusterBank bank;
  const Allocation a = allocate({20.0 * std::sqrt(2.0), 0.0, 0.0}, bank, geom());
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(std::abs(a.raw(i)), 0.25, 1e-12);
  }
  EXPECT_GT(a.raw(0), 0.0);
  EXPECT_LT(a.raw(2), 0.0);
  EXPECT_FALSE(a.saturated);
}

TEST(Allocate, RoundTripWithoutSaturation)
{
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ThrusterBank bank;
  bank.u_max = 1e9;
  for (int k = 0; k < 1000; ++k) {
    const Wrench tau{50.0 * d(rng), 50.0 * d(rng), 5.0 * d(rng)};
    const Allocation a = allocate(tau, bank, geom());
    const Wrench got = achieved_wrench(a.clamped, bank, geom());
    EXPECT_LT((got.vec() - tau.vec()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Allocate, MatchedEstimateCancelsFault)
{
  ThrusterBank bank;
  bank.W << 0.6, 1.0, 0.3, 1.0;
  bank.W_hat = bank.W;
  const Wrench tau{10.0, -5.0, 1.0};
  const Allocation a = allocate(tau, bank, geom());
  EXPECT_TRUE(achieved_wrench(a.clamped, bank, geom()).vec().isApprox(tau.vec(), 1e-12));
}

TEST(Allocate, ClampsAndFlagsSaturation)
{
  ThrusterBank bank;
  const Allocation a = allocate({1000.0, 0.0, 0.0}, bank, geom());
  EXPECT_TRUE(a.saturated);
  EXPECT_LE(a.clamped.cwiseAbs().maxCoeff(), bank.u_max);
  EXPECT_GT(a.raw.cwiseAbs().maxCoeff(), bank.u_max);
}

TEST(Allocate, DropsThrusterAtFloorAndKeepsWrench)
{
  ThrusterBank bank;
  bank.W << 1.0, 0.0, 1.0, 1.0;
  bank.W_hat << 1.0, bank.w_min, 1.0, 1.0;
  const Wrench tau{8.0, 3.0, -0.5};
  const Allocation a = allocate(tau, bank, geom());
  EXPECT_TRUE(a.dropped[1]);
  EXPECT_DOUBLE_EQ(a.raw(1), 0.0);
  EXPECT_TRUE(achieved_wrench(a.clamped, bank, geom()).vec().isApprox(tau.vec(), 1e-12));
}

TEST(Allocate, KeepsFloorThrusterWhenDroppingDisabled)
{
  ThrusterBank bank;
  bank.W_hat << 1.0, bank.w_min, 1.0, 1.0;
  const Allocation a = allocate({8.0, 3.0, -0.5}, bank, geom(), {.drop_failed = false});
  EXPECT_FALSE(a.dropped[1]);
  EXPECT_NE(a.raw(1), 0.0);
}

TEST(Allocate, DropsAtMostOneThruster)
{
  ThrusterBank bank;
  bank.W_hat << bank.w_min, bank.w_min, 1.0, 1.0;
  const Allocation a = allocate({1.0, 1.0, 0.1}, bank, geom());
  EXPECT_EQ(std::count(a.dropped.begin(), a.dropped.end(), true), 1);
}

TEST(Allocate, RejectsEstimateBelowFloor)
{
  ThrusterBank bank;
  bank.W_hat(3) = 0.01;
  EXPECT_THROW(allocate({1.0, 0.0, 0.0}, bank, geom()), ValidationError);
}
