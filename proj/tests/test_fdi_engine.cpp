#include "ftc/fdi_engine.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ftc;

namespace {

constexpr double kPi = std::numbers::pi;

ThrusterGeometry geom() { return ThrusterGeometry::make(kPi / 4.0, 0.2); }

struct SignTableRow {
  int u_sign, cos_sign, sin_sign;
  SignPattern expected;
};

// Thruster 1 under a weight reduction, by sign of u1 and the quadrant of psi - alpha.
const SignTableRow kSignTable[8] = {
    {+1, +1, +1, {+1, +1, -1}}, {+1, +1, -1, {+1, -1, -1}},
    {+1, -1, +1, {-1, +1, -1}}, {+1, -1, -1, {-1, -1, -1}},
    {-1, +1, +1, {-1, -1, +1}}, {-1, +1, -1, {-1, +1, +1}},
    {-1, -1, +1, {+1, -1, +1}}, {-1, -1, -1, {+1, +1, +1}},
};

double heading_for(int cos_sign, int sin_sign, double alpha, double offset = kPi / 4.0)
{
  return alpha + std::atan2(sin_sign * std::sin(offset), cos_sign * std::cos(offset));
}

FdiInputs inputs(double t, double residual_value, ReferenceSample ref = {})
{
  FdiInputs in;
  in.t = t;
  in.e_eta = {residual_value, 0.0, 0.0};
  in.ref = ref;
  return in;
}

}  // namespace

TEST(Residual, WeightsYawByC1)
{
  EXPECT_DOUBLE_EQ(residual({3.0, 4.0, 0.0}, 5.0), 5.0);
  EXPECT_NEAR(residual({0.0, 0.0, 0.1}, 5.0), std::sqrt(0.05), 1e-15);
  EXPECT_DOUBLE_EQ(residual(Vec3::Zero(), 5.0), 0.0);
}

TEST(Threshold, BaseAndWidened)
{
  FdiConfig cfg;
  ReferenceSample smooth;
  EXPECT_NEAR(detection_threshold(cfg, smooth), 0.31, 1e-15);
  ReferenceSample joint;
  joint.smooth = false;
  EXPECT_NEAR(detection_threshold(cfg, joint), 0.31 + cfg.hold_widen, 1e-15);
  EXPECT_NEAR(detection_threshold(cfg, smooth, true), 0.31 + cfg.hold_widen, 1e-15);
  cfg.f_smooth = 0.0;
  EXPECT_NEAR(detection_threshold(cfg, smooth), cfg.c2, 1e-15);
}

TEST(Detect, StrictComparison)
{
  EXPECT_TRUE(detect(0.32, 0.31));
  EXPECT_FALSE(detect(0.31, 0.31));
  EXPECT_FALSE(detect(0.0, 0.31));
}

TEST(SignPattern, ReproducesThrusterOneTable)
{
  const ThrusterGeometry g = geom();
  for (int k = 0; k < 8; ++k) {
    const SignTableRow& row = kSignTable[k];
    for (double offset : {0.2, kPi / 4.0, 1.3}) {
      const double psi = heading_for(row.cos_sign, row.sin_sign, g.alpha, offset);
      ASSERT_EQ(std::cos(psi - g.alpha) > 0, row.cos_sign > 0);
      ASSERT_EQ(std::sin(psi - g.alpha) > 0, row.sin_sign > 0);
      const SignPattern p = predict_sign_pattern(1, 0.5 * row.u_sign, psi, g);
      EXPECT_EQ(p, row.expected) << "case " << k + 1 << " offset " << offset;
    }
  }
}

TEST(SignPattern, DeadBandGivesIndeterminate)
{
  EXPECT_EQ(predict_sign_pattern(1, 0.0, 1.0, geom()), SignPattern{});
  EXPECT_FALSE(predict_sign_pattern(2, 1e-5, 1.0, geom()).complete());
  // psi - alpha = 0 leaves no Y component for thruster 1.
  const SignPattern p = predict_sign_pattern(1, 0.5, kPi / 4.0, geom());
  EXPECT_EQ(p.s_y, 0);
  EXPECT_EQ(p.s_x, 1);
}

TEST(SignPattern, ThrustersPairUpByMirrorSymmetry)
{
  // Thruster 4 points opposite to thruster 1 in the plane with the same moment
  // sign, so the same command flips X and Y but keeps the yaw sign.
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int k = 0; k < 1000; ++k) {
    const double psi = ang(rng);
    const SignPattern p1 = predict_sign_pattern(1, 0.4, psi, geom());
    const SignPattern p4 = predict_sign_pattern(4, 0.4, psi, geom());
    EXPECT_EQ(p1.s_x, -p4.s_x);
    EXPECT_EQ(p1.s_y, -p4.s_y);
    EXPECT_EQ(p1.s_psi, p4.s_psi);
  }
}

TEST(SignPattern, RejectsBadIndex)
{
  EXPECT_THROW(predict_sign_pattern(0, 1.0, 0.0, geom()), std::out_of_range);
  EXPECT_THROW(predict_sign_pattern(5, 1.0, 0.0, geom()), std::out_of_range);
}

TEST(Identify, SyntheticCase3)
{
  FdiConfig cfg;
  cfg.delta1 = 0.02;
  cfg.delta2 = 0.01;
  const double psi = heading_for(-1, +1, kPi / 4.0);
  const auto id = identify_fault({-0.1, 0.1, -0.05}, {0.5, 0.5, -0.5, -0.5}, psi, cfg, geom());
  ASSERT_TRUE(id.has_value());
  EXPECT_EQ(*id, 1);
}

TEST(Identify, NoDeviationMeansNoMatch)
{
  EXPECT_FALSE(identify_fault(Vec3::Zero(), {0.5, 0.5, -0.5, -0.5}, 0.3, FdiConfig{}, geom()));
}

TEST(Identify, BelowThresholdDoesNotMatch)
{
  FdiConfig cfg;
  cfg.delta1 = 0.2;
  const double psi = heading_for(-1, +1, kPi / 4.0);
  EXPECT_FALSE(identify_fault({-0.1, 0.1, -0.05}, {0.5, 0.5, -0.5, -0.5}, psi, cfg, geom()));
}

// Whenever a match is returned, it is the only thruster whose predicted
// pattern is consistent with the observation.
TEST(Identify, MatchIsUnique)
{
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  FdiConfig cfg;
  const ThrusterGeometry g = geom();
  for (int k = 0; k < 1000; ++k) {
    const Vec3 e_dot(0.05 * d(rng), 0.05 * d(rng), 0.2 * d(rng));
    const Vec4 u(d(rng), d(rng), d(rng), d(rng));
    const double psi = 3.0 * d(rng);
    const auto id = identify_fault(e_dot, u, psi, cfg, g);
    int matches = 0;
    for (int i = 1; i <= 4; ++i) {
      const SignPattern p = predict_sign_pattern(i, u(i - 1), psi, g, cfg.eps_u, cfg.eps_g);
      matches += p.complete() && e_dot(0) * p.s_x > cfg.delta1 &&
                 e_dot(1) * p.s_y > cfg.delta1 && e_dot(2) * p.s_psi > cfg.delta2;
    }
    EXPECT_EQ(id.has_value(), matches == 1);
  }
}

TEST(Reconfigure, DecrementsOnlyFaultyThruster)
{
  const FdiConfig cfg;
  const Vec4 w = reconfigure_step(Vec4::Ones(), 3, cfg);
  EXPECT_TRUE(w.isApprox(Vec4(1.0, 1.0, 0.95, 1.0), 1e-15));
}

TEST(Reconfigure, FloorsAtWMin)
{
  const FdiConfig cfg;
  Vec4 w = Vec4::Ones();
  for (int k = 0; k < 100; ++k) {
    w = reconfigure_step(w, 2, cfg);
  }
  EXPECT_DOUBLE_EQ(w(1), cfg.w_min);
  EXPECT_THROW(reconfigure_step(w, 0, cfg), std::out_of_range);
}

TEST(FdiConfig, ValidateRejectsBadValues)
{
  FdiConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.T_s = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.n_consec = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = {};
  cfg.delta_w = 1.5;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(FdiConfig, MinimumUpdatePeriod)
{
  EXPECT_DOUBLE_EQ(FdiConfig::min_update_period(1.0), 2.0);
}

class FdiLoop : public ::testing::Test {
 protected:
  FdiConfig cfg;
  double dt = 0.01;
  FdiState state;
  Vec4 w_hat = Vec4::Ones();

  void SetUp() override
  {
    cfg.arm_time = 1.0;
    cfg.n_consec = 3;
    cfg.T_s = 0.05;
  }

  FdiUpdate feed(double t, double r, const Vec3& e_dot = Vec3::Zero(),
                 const Vec4& u = Vec4::Zero(), ReferenceSample ref = {})
  {
    FdiInputs in = inputs(t, r, ref);
    in.e_eta_dot = e_dot;
    in.u_cmd = u;
    in.psi = heading_for(-1, +1, kPi / 4.0);
    FdiUpdate upd = fdi_update(state, in, w_hat, dt, cfg, geom());
    state = upd.state;
    if (upd.w_hat) {
      w_hat = *upd.w_hat;
    }
    return upd;
  }
};

TEST_F(FdiLoop, DisarmedBeforeArmTime)
{
  for (int k = 0; k < 50; ++k) {
    feed(0.01 * k, 5.0);
  }
  EXPECT_FALSE(state.b_trig);
  EXPECT_TRUE(state.identified_log.empty());
  EXPECT_DOUBLE_EQ(state.residual, 5.0);
}

TEST_F(FdiLoop, TriggersAfterConsecutiveSamples)
{
  feed(2.00, 0.5);
  feed(2.01, 0.5);
  EXPECT_FALSE(state.b_trig);
  feed(2.02, 0.1);  // resets the count
  feed(2.03, 0.5);
  feed(2.04, 0.5);
  EXPECT_FALSE(state.b_trig);
  feed(2.05, 0.5);
  EXPECT_TRUE(state.b_trig);
  EXPECT_TRUE(state.b_first_check);
  ASSERT_EQ(state.identified_log.size(), 1u);
  EXPECT_EQ(state.identified_log[0].kind, FdiEvent::Kind::Trigger);
}

TEST_F(FdiLoop, NonSmoothReferenceOpensHoldWindow)
{
  ReferenceSample joint;
  joint.smooth = false;
  feed(2.0, 0.4, Vec3::Zero(), Vec4::Zero(), joint);
  for (int k = 1; k < 10; ++k) {
    feed(2.0 + 0.01 * k, 0.4);
  }
  EXPECT_FALSE(state.b_trig);
  EXPECT_NEAR(state.threshold, 0.31 + cfg.hold_widen, 1e-12);
  // Past the hold window the same residual trips the detector.
  for (int k = 0; k < 5; ++k) {
    feed(2.0 + cfg.hold_window + 0.01 * k, 0.4);
  }
  EXPECT_TRUE(state.b_trig);
}

TEST_F(FdiLoop, IdentifiesThenDecrementsEveryPeriod)
{
  const Vec3 case3(-0.1, 0.1, -0.05);
  const Vec4 u(0.5, 0.5, -0.5, -0.5);
  double t = 2.0;
  for (int k = 0; k < 3; ++k, t += dt) {
    feed(t, 0.5);
  }
  ASSERT_TRUE(state.b_trig);
  feed(t, 0.5, case3, u);
  t += dt;
  ASSERT_TRUE(state.fault_num.has_value());
  EXPECT_EQ(*state.fault_num, 1);
  EXPECT_FALSE(state.b_first_check);

  // T_s = 0.05 s is five steps; the identification step already counts as one.
  int updates = 0;
  for (int k = 0; k < 19; ++k, t += dt) {
    updates += feed(t, 0.5).w_hat.has_value();
  }
  EXPECT_EQ(updates, 4);
  EXPECT_NEAR(w_hat(0), 1.0 - 4 * cfg.delta_w, 1e-12);
  EXPECT_TRUE(w_hat.tail<3>().isApprox(Vec3::Ones(), 0.0));
}

TEST_F(FdiLoop, FallingEdgeClearsAndRearms)
{
  double t = 2.0;
  for (int k = 0; k < 3; ++k, t += dt) {
    feed(t, 0.5);
  }
  feed(t, 0.5, {-0.1, 0.1, -0.05}, {0.5, 0.5, -0.5, -0.5});
  t += dt;
  ASSERT_TRUE(state.fault_num);
  feed(t, 0.1);
  t += dt;
  EXPECT_FALSE(state.b_trig);
  EXPECT_FALSE(state.fault_num.has_value());
  EXPECT_EQ(state.identified_log.back().kind, FdiEvent::Kind::Cleared);
  for (int k = 0; k < 3; ++k, t += dt) {
    feed(t, 0.5);
  }
  EXPECT_TRUE(state.b_trig);
  EXPECT_TRUE(state.b_first_check);
}

TEST_F(FdiLoop, NoDecrementWithoutIdentification)
{
  double t = 2.0;
  for (int k = 0; k < 200; ++k, t += dt) {
    EXPECT_FALSE(feed(t, 0.5).w_hat.has_value());
  }
  EXPECT_TRUE(state.b_trig);
  EXPECT_TRUE(state.b_first_check);
}
