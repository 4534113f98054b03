#include "ftc/simulator.hpp"

#include <gtest/gtest.h>

using namespace ftc;

namespace {

Scenario short_default_run(double duration)
{
  Scenario sc;
  sc.name = "short";
  sc.sim.duration = duration;
  return sc;
}

Scenario at_rest()
{
  Scenario sc;
  Segment hold{Segment::Mode::Hold, 100.0};
  sc.plan = TrajectoryPlan(Vec3(2.0, -3.0, 0.4), {hold});
  sc.sim.initial_state = VehicleState{2.0, -3.0, 0.4, 0.0, 0.0, 0.0};
  sc.sim.duration = 5.0;
  return sc;
}

}  // namespace

TEST(FaultSchedule, EmptyMeansHealthy)
{
  const FaultSchedule empty;
  const ThrusterBank bank;
  for (double t : {0.0, 100.0, 1e4}) {
    EXPECT_TRUE(apply_fault_schedule(t, empty, bank).isApprox(Vec4::Ones(), 0.0));
  }
}

TEST(FaultSchedule, StepsExactlyAtEventTime)
{
  const FaultSchedule s({{100.0, 2, 0.6}});
  const ThrusterBank bank;
  EXPECT_DOUBLE_EQ(apply_fault_schedule(99.99, s, bank)(1), 1.0);
  EXPECT_DOUBLE_EQ(apply_fault_schedule(100.0, s, bank)(1), 0.6);
  EXPECT_DOUBLE_EQ(apply_fault_schedule(100.0, s, bank)(0), 1.0);
}

TEST(FaultSchedule, SequentialEventsAccumulate)
{
  const FaultSchedule s({{100.0, 1, 0.3}, {200.0, 3, 0.2}, {300.5, 4, 0.1}, {400.0, 2, 0.0}});
  EXPECT_TRUE(s.check(50.0).empty());
  const Vec4 w = apply_fault_schedule(500.0, s, ThrusterBank{});
  EXPECT_TRUE(w.isApprox(Vec4(0.3, 0.0, 0.2, 0.1), 0.0));
}

TEST(FaultSchedule, CheckFlagsEachAssumption)
{
  auto contains = [](const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v) {
      if (s.find(needle) != std::string::npos) {
        return true;
      }
    }
    return false;
  };
  EXPECT_TRUE(contains(FaultSchedule({{10.0, 1, 0.5}}).check(50.0), "Assumption 1"));
  EXPECT_TRUE(
      contains(FaultSchedule({{100.0, 1, 0.5}, {150.0, 1, 0.7}}).check(50.0), "Assumption 2"));
  EXPECT_TRUE(
      contains(FaultSchedule({{100.0, 1, 0.5}, {100.0, 2, 0.7}}).check(50.0), "Assumption 3"));
  EXPECT_FALSE(FaultSchedule({{100.0, 5, 0.5}}).check(50.0).empty());
  EXPECT_FALSE(FaultSchedule({{100.0, 1, -0.1}}).check(50.0).empty());
}

TEST(Simulator, EquilibriumIsPreserved)
{
  Simulator sim(at_rest());
  const VehicleState x0 = sim.state();
  for (int k = 0; k < 500; ++k) {
    sim.step();
    EXPECT_LT((sim.state().eta() - x0.eta()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(sim.state().nu().cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_DOUBLE_EQ(sim.time(), 5.0);
}

TEST(Simulator, ConvergesFromRestBeforeFiftySeconds)
{
  const RunSummary s = run_scenario(short_default_run(100.0));
  ASSERT_TRUE(s.convergence_time.has_value());
  EXPECT_LT(*s.convergence_time, 50.0);
  EXPECT_TRUE(s.detections.empty());
}

TEST(Simulator, FaultAppliesAtScheduledStep)
{
  Scenario sc = short_default_run(100.5);
  sc.faults = FaultSchedule({{100.0, 2, 0.6}});
  Simulator sim(sc);
  while (sim.time() < 99.985) {
    sim.step();
  }
  EXPECT_DOUBLE_EQ(sim.bank().W(1), 1.0);
  sim.step();
  EXPECT_NEAR(sim.time(), 100.0, 1e-9);
  EXPECT_DOUBLE_EQ(sim.bank().W(1), 0.6);
}

TEST(Simulator, WeightOverridePinsTrueWeights)
{
  Simulator sim(short_default_run(10.0));
  sim.set_weight_override(Vec4(1.0, 1.0, 0.5, 1.0));
  sim.step();
  EXPECT_DOUBLE_EQ(sim.bank().W(2), 0.5);
  sim.set_weight_override(std::nullopt);
  EXPECT_DOUBLE_EQ(sim.bank().W(2), 1.0);
}

TEST(Simulator, RepeatRunsAreBitIdentical)
{
  Scenario sc = short_default_run(150.0);
  sc.faults = FaultSchedule({{100.0, 3, 0.4}});
  std::vector<SimRow> a, b;
  run_scenario(sc, [&](const SimRow& r) { a.push_back(r); });
  run_scenario(sc, [&](const SimRow& r) { b.push_back(r); });
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k].state.eta(), b[k].state.eta()) << k;
    ASSERT_EQ(a[k].state.nu(), b[k].state.nu()) << k;
    ASSERT_EQ(a[k].W_hat, b[k].W_hat) << k;
  }
}

TEST(Simulator, RowsFollowDecimation)
{
  Scenario sc = short_default_run(2.0);
  sc.sim.decimation = 20;
  std::vector<double> t;
  run_scenario(sc, [&](const SimRow& r) { t.push_back(r.t); });
  ASSERT_EQ(t.size(), 11u);
  EXPECT_DOUBLE_EQ(t.front(), 0.0);
  EXPECT_NEAR(t[1], 0.2, 1e-12);
  EXPECT_NEAR(t.back(), 2.0, 1e-12);
}

TEST(Simulator, DivergenceGuardAborts)
{
  Scenario sc = short_default_run(100.0);
  sc.sim.divergence_limit = 20.0;
  int rows = 0;
  try {
    run_scenario(sc, [&](const SimRow&) { ++rows; });
    FAIL() << "expected a divergence abort";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 100.0);
    EXPECT_NE(std::string(e.what()).find("diverged"), std::string::npos);
  }
  EXPECT_GT(rows, 0);
}

TEST(Simulator, SingleFaultIsIdentifiedAndReconfigured)
{
  Scenario sc = short_default_run(250.0);
  sc.faults = FaultSchedule({{100.0, 2, 0.6}});
  const RunSummary s = run_scenario(sc);
  ASSERT_FALSE(s.identifications.empty());
  EXPECT_EQ(s.identifications.front().second, 2);
  EXPECT_EQ(s.premature_identifications, 0);
  ASSERT_EQ(s.faults.size(), 1u);
  EXPECT_TRUE(s.faults[0].reconfiguration_ok);
  EXPECT_LE(std::abs(s.final_w_hat(1) - 0.6), 0.1 + 1e-9);
}

TEST(Simulator, NoFaultNoDetections)
{
  const RunSummary s = run_scenario(short_default_run(600.0));
  EXPECT_TRUE(s.detections.empty());
  EXPECT_EQ(s.false_triggers, 0);
  EXPECT_LT(s.max_residual, 0.31);
  EXPECT_TRUE(s.final_w_hat.isApprox(Vec4::Ones(), 0.0));
}
