#pragma once

#include "ftc/fdi_engine.hpp"
#include "ftc/thruster_allocation.hpp"
#include "ftc/trajectory.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ftc {

struct FaultEvent {
  double time = 0.0;
  int thruster = 1;  ///< 1-based
  double weight = 1.0;
};

/// Time-ordered single-thruster weight reductions.
class FaultSchedule {
 public:
  FaultSchedule() = default;
  explicit FaultSchedule(std::vector<FaultEvent> events) : events_(std::move(events)) {}

  const std::vector<FaultEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  /// Returns one message per violated assumption; empty when valid.
  /// Faults start only after `arm_time`, only reduce a weight, and hit one
  /// thruster at a time.
  std::vector<std::string> check(double arm_time) const;

 private:
  std::vector<FaultEvent> events_;
};

/// True weights in effect at time t (events with time <= t applied).
Vec4 apply_fault_schedule(double t, const FaultSchedule& schedule, const ThrusterBank& bank);

struct SimConfig {
  double dt = 0.01;
  double duration = 600.0;
  int decimation = 10;
  VehicleState initial_state;
  double reconverge_window = 200.0;  ///< s allowed for the residual to settle after a fault
  double convergence_delta = 0.05;   ///< bound on |e_eta| used for t_c
  double divergence_limit = 1e6;
};

struct Scenario {
  std::string name = "scenario";
  std::string description;
  VehicleParams vehicle = VehicleParams::bluerov2_heavy_3dof();
  ThrusterGeometry geometry = ThrusterGeometry::make(std::numbers::pi / 4.0, 0.2);
  Vec4 K = Vec4::Constant(40.0);
  double u_max = 1.0;
  ControllerGains gains;
  FdiConfig fdi;
  AllocationOptions allocation;
  TrajectoryPlan plan = TrajectoryPlan::default_plan();
  FaultSchedule faults;
  SimConfig sim;
  std::vector<std::string> overrides;  ///< verbatim key=value strings applied at load
};

/// Everything the controller computed at one instant.
struct ControlSnapshot {
  ReferenceSample ref;
  TrackingErrors errors;
  Vec3 e_eta_dot = Vec3::Zero();
  Wrench tau_c;
  Allocation alloc;
  Wrench tau;
  double V2 = 0.0;
};

/// One output row. Column order is fixed by record_io.
struct SimRow {
  double t = 0.0;
  VehicleState state;
  Vec3 eta_d = Vec3::Zero();
  Vec3 e_eta = Vec3::Zero();
  double residual = 0.0;
  double threshold = 0.0;
  bool b_trig = false;
  int fault_num = 0;
  Vec4 W = Vec4::Ones();
  Vec4 W_hat = Vec4::Ones();
  Vec4 u_cmd = Vec4::Zero();
  Wrench tau_c;
  Wrench tau;
  double V2 = 0.0;
  bool saturated = false;
};

/// Closed-loop simulation: plant, controller, allocation and FDI at one rate.
class Simulator {
 public:
  explicit Simulator(const Scenario& scenario);

  /// One control cycle of length dt.
  void step();

  double time() const { return static_cast<double>(steps_) * dt_; }
  long steps() const { return steps_; }
  const VehicleState& state() const { return state_; }
  const ThrusterBank& bank() const { return bank_; }
  const FdiState& fdi() const { return fdi_; }
  const ControlSnapshot& snapshot() const { return snap_; }
  const Scenario& scenario() const { return scenario_; }
  SimRow row() const;

  /// Pins the true weights, ignoring the schedule, until cleared.
  void set_weight_override(std::optional<Vec4> w);

 private:
  ControlSnapshot control_at(double t, const VehicleState& s) const;
  Vec4 weights_at(double t) const;
  void refresh_snapshot();

  Scenario scenario_;
  double dt_;
  long steps_ = 0;
  VehicleState state_;
  ThrusterBank bank_;
  FdiState fdi_;
  ControlSnapshot snap_;
  std::optional<Vec4> weight_override_;
};

struct FaultOutcome {
  FaultEvent event;
  std::optional<double> detection_time;
  std::optional<int> identified;
  std::optional<double> identification_time;
  bool reconverged = false;
  std::optional<double> reconverge_time;
  double w_hat_at_end = 1.0;
  double estimate_error = 0.0;
  bool reconfiguration_ok = false;
};

struct RunSummary {
  std::string name;
  double dt = 0.0;
  double duration = 0.0;
  long steps = 0;
  std::vector<std::pair<double, double>> detections;      ///< (time, residual)
  std::vector<std::pair<double, int>> identifications;    ///< (time, thruster)
  std::vector<FaultOutcome> faults;
  int false_triggers = 0;            ///< triggers before the first fault
  int premature_identifications = 0; ///< identifications before the first fault
  Vec4 final_w = Vec4::Ones();
  Vec4 final_w_hat = Vec4::Ones();
  double max_residual = 0.0;  ///< after arming, outside hold windows
  double max_residual_time = 0.0;
  std::optional<double> convergence_time;
  long saturation_steps = 0;
  int reconfiguration_failures = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> overrides;
};

using RowSink = std::function<void(const SimRow&)>;

/// Runs start to end, streaming every `decimation`-th row to `sink`.
/// Throws DivergenceError on blow-up; rows emitted so far stay emitted.
RunSummary run_scenario(const Scenario& scenario, const RowSink& sink = {});

}  // namespace ftc
