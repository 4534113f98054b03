#include "ftc/tracking_controller.hpp"
#include "ftc/trajectory.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ftc;

namespace {

ControllerGains default_gains()
{
  return ControllerGains::make({1, 1, 10}, {100, 100, 300}, {1, 1, 10}, {100, 100, 300});
}

VehicleState random_state(std::mt19937& rng)
{
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> vel(-1.5, 1.5);
  return {pos(rng), pos(rng), ang(rng), vel(rng), vel(rng), 0.3 * vel(rng)};
}

}  // namespace

TEST(Gains, DefaultGainsGiveUnitDecayRate)
{
  EXPECT_DOUBLE_EQ(default_gains().lambda, 1.0);
}

TEST(Gains, DecayRateIsSmallestRatio)
{
  const ControllerGains g =
      ControllerGains::make({2, 1, 1}, {1, 1, 1}, {1, 3, 3}, {4, 4, 0.8});
  EXPECT_DOUBLE_EQ(g.lambda, 0.5);
}

TEST(Gains, RejectNonPositive)
{
  EXPECT_THROW(ControllerGains::make({1, 0, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}),
               ValidationError);
  EXPECT_THROW(ControllerGains::make({1, 1, 1}, {1, 1, 1}, {1, 1, -2}, {1, 1, 1}),
               ValidationError);
}

TEST(PoseError, YawTakenOnTheCircle)
{
  const Vec3 e = pose_error({0.0, 0.0, 3.1}, {0.0, 0.0, -3.1});
  EXPECT_NEAR(e(2), 6.2 - 2.0 * std::numbers::pi, 1e-12);
}

TEST(PoseError, ZeroOnReference)
{
  const Vec3 eta(10.0, 15.0, std::numbers::pi / 2.0);
  EXPECT_TRUE(pose_error(eta, eta).isZero(0.0));
}

TEST(Stabilization, OnReferenceEqualsBodyFrameReferenceVelocity)
{
  ReferenceSample ref;
  ref.eta_d = {10.0, 15.0, std::numbers::pi / 2.0};
  ref.eta_d_dot = {0.0, 1.0, 0.0};
  const Vec3 a = stabilization_function(ref, Vec3::Zero(), std::numbers::pi / 2.0, default_gains());
  EXPECT_NEAR(a(0), 1.0, 1e-15);
  EXPECT_NEAR(a(1), 0.0, 1e-15);
  EXPECT_NEAR(a(2), 0.0, 1e-15);
}

TEST(Stabilization, DerivativeMatchesFiniteDifferenceAlongMotion)
{
  std::mt19937 rng(21);
  const ControllerGains g = default_gains();
  const TrajectoryPlan plan = TrajectoryPlan::default_plan();
  std::uniform_real_distribution<double> tt(310.0, 590.0);
  const double h = 1e-6;
  for (int k = 0; k < 200; ++k) {
    const double t = tt(rng);
    const VehicleState s = random_state(rng);
    auto alpha_at = [&](double dt) {
      const Vec3 eta = s.eta() + dt * kinematics_rhs(s);
      const VehicleState sh = VehicleState::from(eta, s.nu());
      const ReferenceSample ref = plan.sample(t + dt);
      return stabilization_function(ref, pose_error(ref.eta_d, eta), sh.psi, g);
    };
    const Vec3 fd = (alpha_at(h) - alpha_at(-h)) / (2.0 * h);
    const ReferenceSample ref = plan.sample(t);
    const Vec3 an = stabilization_derivative(ref, s, pose_error(ref.eta_d, s.eta()), g);
    EXPECT_TRUE(an.isApprox(fd, 1e-6)) << an.transpose() << " vs " << fd.transpose();
  }
}

// With the commanded wrench delivered exactly, V2_dot equals
// -e_eta' A1 e_eta - e_nu' A2 e_nu at every state.
TEST(ControlLaw, LyapunovRateIdentityHolds)
{
  std::mt19937 rng(99);
  const VehicleParams p = VehicleParams::bluerov2_heavy_3dof();
  const TrajectoryPlan plan = TrajectoryPlan::default_plan();
  std::uniform_real_distribution<double> tt(0.0, 600.0);
  for (const ControllerGains& g :
       {default_gains(),
        ControllerGains::make({2, 1, 5}, {50, 80, 100}, {0.5, 1, 4}, {30, 90, 200})}) {
    for (int k = 0; k < 1000; ++k) {
      const VehicleState s = random_state(rng);
      const ReferenceSample ref = plan.sample(tt(rng));
      const TrackingErrors e = tracking_errors(s, ref, g);
      const Wrench tau = control_law(s, ref, e, g, p);
      const Vec3 nu_dot = dynamics_rhs(s, tau.vec(), p);
      const Vec3 e_eta_dot = pose_error_rate(ref, s);
      const Vec3 e_nu_dot = stabilization_derivative(ref, s, e.e_eta, g) - nu_dot;
      const double v_dot = e.e_eta.dot(g.gamma1.cwiseProduct(e_eta_dot)) +
                           e.e_nu.dot(g.gamma2.cwiseProduct(e_nu_dot));
      const double bound = lyapunov_rate_bound(e, g);
      EXPECT_NEAR(v_dot, bound, 1e-8 * std::max(1.0, std::abs(bound)));
      EXPECT_LE(bound, 0.0);
      EXPECT_LE(bound, -g.lambda * lyapunov_value(e, g) + 1e-12);
    }
  }
}

TEST(ControlLaw, OnReferenceCommandsDragCompensation)
{
  const VehicleParams p = VehicleParams::bluerov2_heavy_3dof();
  const ControllerGains g = default_gains();
  const VehicleState s{10.0, 20.0, std::numbers::pi / 2.0, 1.0, 0.0, 0.0};
  ReferenceSample ref;
  ref.eta_d = s.eta();
  ref.eta_d_dot = {0.0, 1.0, 0.0};
  const TrackingErrors e = tracking_errors(s, ref, g);
  EXPECT_TRUE(e.e_eta.isZero(1e-15));
  EXPECT_TRUE(e.e_nu.isZero(1e-15));
  const Wrench tau = control_law(s, ref, e, g, p);
  EXPECT_NEAR(tau.tau_u, p.lin_damping(0, 0) + p.quad_damping(0), 1e-12);
  EXPECT_NEAR(tau.tau_v, 0.0, 1e-12);
  EXPECT_NEAR(tau.tau_r, 0.0, 1e-12);
}

TEST(Lyapunov, ValueIsQuadraticForm)
{
  TrackingErrors e;
  e.e_eta = {1.0, 0.0, 0.1};
  e.e_nu = {0.0, 0.2, 0.0};
  EXPECT_NEAR(lyapunov_value(e, default_gains()), 0.5 * (1.0 + 10 * 0.01) + 0.5 * 100 * 0.04, 1e-12);
}
