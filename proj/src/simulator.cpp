#include "ftc/simulator.hpp"

#include <chrono>
#include <sstream>

namespace ftc {

std::vector<std::string> FaultSchedule::check(double arm_time) const
{
  std::vector<std::string> issues;
  Vec4 current = Vec4::Ones();
  for (std::size_t k = 0; k < events_.size(); ++k) {
    const FaultEvent& e = events_[k];
    const std::string at = "faults[" + std::to_string(k) + "]: ";
    if (e.thruster < 1 || e.thruster > kNumThrusters) {
      issues.push_back(at + "thruster index must be 1..4");
      continue;
    }
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
      issues.push_back(at + "weight must lie in [0, 1]");
    }
    if (k == 0 && !(e.time > arm_time)) {
      issues.push_back(at + "Assumption 1 violated: first fault at t=" + std::to_string(e.time) +
                       " s is not after the convergence time " + std::to_string(arm_time) + " s");
    }
    if (k > 0 && !(e.time > events_[k - 1].time)) {
      issues.push_back(at + "Assumption 3 violated: event times must be strictly increasing "
                            "(one thruster at a time)");
    }
    const double before = current(e.thruster - 1);
    if (!(e.weight < before)) {
      issues.push_back(at + "Assumption 2 violated: weight of thruster " +
                       std::to_string(e.thruster) + " increases or stays (" +
                       std::to_string(before) + " -> " + std::to_string(e.weight) + ")");
    }
    current(e.thruster - 1) = std::min(before, e.weight);
  }
  return issues;
}

Vec4 apply_fault_schedule(double t, const FaultSchedule& schedule, const ThrusterBank& bank)
{
  (void)bank;
  Vec4 w = Vec4::Ones();
  for (const FaultEvent& e : schedule.events()) {
    if (e.time > t + 1e-9) {
      break;
    }
    w(e.thruster - 1) = e.weight;
  }
  return w;
}

namespace {

struct Derivative {
  Vec3 eta_dot;
  Vec3 nu_dot;
};

}  // namespace

Simulator::Simulator(const Scenario& scenario) : scenario_(scenario), dt_(scenario.sim.dt)
{
  if (!(dt_ > 0.0)) {
    throw ValidationError("sim.dt must be > 0");
  }
  state_ = scenario_.sim.initial_state;
  state_.psi = wrap_angle(state_.psi);
  bank_.K = scenario_.K;
  bank_.u_max = scenario_.u_max;
  bank_.w_min = scenario_.fdi.w_min;
  bank_.W = weights_at(0.0);
  bank_.W_hat = Vec4::Ones();
  bank_.validate();
  refresh_snapshot();
  fdi_.residual = residual(snap_.errors.e_eta, scenario_.fdi.c1);
  fdi_.threshold = detection_threshold(scenario_.fdi, snap_.ref);
}

Vec4 Simulator::weights_at(double t) const
{
  if (weight_override_) {
    return *weight_override_;
  }
  return apply_fault_schedule(t, scenario_.faults, bank_);
}

void Simulator::set_weight_override(std::optional<Vec4> w)
{
  weight_override_ = std::move(w);
  bank_.W = weights_at(time());
  refresh_snapshot();
}

ControlSnapshot Simulator::control_at(double t, const VehicleState& s) const
{
  ControlSnapshot c;
  c.ref = scenario_.plan.sample(t);
  c.errors = tracking_errors(s, c.ref, scenario_.gains);
  c.e_eta_dot = pose_error_rate(c.ref, s);
  c.tau_c = control_law(s, c.ref, c.errors, scenario_.gains, scenario_.vehicle);
  c.alloc = allocate(c.tau_c, bank_, scenario_.geometry, scenario_.allocation);
  c.tau = achieved_wrench(c.alloc.clamped, bank_, scenario_.geometry);
  c.V2 = lyapunov_value(c.errors, scenario_.gains);
  return c;
}

void Simulator::refresh_snapshot()
{
  snap_ = control_at(time(), state_);
  bank_.u_cmd = snap_.alloc.clamped;
}

void Simulator::step()
{
  const double t = time();
  const VehicleParams& vp = scenario_.vehicle;

  // Controller and allocation run inside every stage; W and W_hat are held.
  auto rhs = [&](double ts, const Vec3& eta, const Vec3& nu) {
    const VehicleState s{eta(0), eta(1), eta(2), nu(0), nu(1), nu(2)};
    const ControlSnapshot c = control_at(ts, s);
    return Derivative{rotation_matrix(eta(2)) * nu, eval_fv(nu, vp) + vp.control_gain * c.tau.vec()};
  };

  const Vec3 eta0 = state_.eta();
  const Vec3 nu0 = state_.nu();
  const double h = dt_;
  const Derivative k1{kinematics_rhs(state_), eval_fv(nu0, vp) + vp.control_gain * snap_.tau.vec()};
  const Derivative k2 = rhs(t + 0.5 * h, eta0 + 0.5 * h * k1.eta_dot, nu0 + 0.5 * h * k1.nu_dot);
  const Derivative k3 = rhs(t + 0.5 * h, eta0 + 0.5 * h * k2.eta_dot, nu0 + 0.5 * h * k2.nu_dot);
  const Derivative k4 = rhs(t + h, eta0 + h * k3.eta_dot, nu0 + h * k3.nu_dot);
  const Vec3 eta1 =
      eta0 + (h / 6.0) * (k1.eta_dot + 2.0 * k2.eta_dot + 2.0 * k3.eta_dot + k4.eta_dot);
  const Vec3 nu1 = nu0 + (h / 6.0) * (k1.nu_dot + 2.0 * k2.nu_dot + 2.0 * k3.nu_dot + k4.nu_dot);

  const VehicleState next = VehicleState::from(eta1, nu1);
  const double limit = scenario_.sim.divergence_limit;
  if (!next.finite() || eta1.cwiseAbs().maxCoeff() > limit || nu1.cwiseAbs().maxCoeff() > limit) {
    std::ostringstream msg;
    msg << "state diverged at t=" << t + h << " s (|eta|max=" << eta1.cwiseAbs().maxCoeff()
        << ", |nu|max=" << nu1.cwiseAbs().maxCoeff() << ")";
    throw DivergenceError(t + h, msg.str());
  }

  const Vec4 u_applied = snap_.alloc.clamped;
  state_ = next;
  ++steps_;
  const double t1 = time();

  const ReferenceSample ref = scenario_.plan.sample(t1);
  FdiInputs in;
  in.e_eta = pose_error(ref.eta_d, state_.eta());
  in.e_eta_dot = pose_error_rate(ref, state_);
  in.u_cmd = u_applied;
  in.psi = state_.psi;
  in.ref = ref;
  in.t = t1;
  FdiUpdate upd = fdi_update(std::move(fdi_), in, bank_.W_hat, dt_, scenario_.fdi,
                             scenario_.geometry);
  fdi_ = std::move(upd.state);
  if (upd.w_hat) {
    bank_.W_hat = *upd.w_hat;
  }

  bank_.W = weights_at(t1);
  refresh_snapshot();
}

SimRow Simulator::row() const
{
  SimRow r;
  r.t = time();
  r.state = state_;
  r.eta_d = snap_.ref.eta_d;
  r.e_eta = snap_.errors.e_eta;
  r.residual = fdi_.residual;
  r.threshold = fdi_.threshold;
  r.b_trig = fdi_.b_trig;
  r.fault_num = fdi_.fault_num.value_or(0);
  r.W = bank_.W;
  r.W_hat = bank_.W_hat;
  r.u_cmd = snap_.alloc.clamped;
  r.tau_c = snap_.tau_c;
  r.tau = snap_.tau;
  r.V2 = snap_.V2;
  r.saturated = snap_.alloc.saturated;
  return r;
}

namespace {

/// Per-fault bookkeeping while a run progresses.
struct FaultWindow {
  FaultOutcome outcome;
  double end = 0.0;
  std::optional<double> last_bad;
};

}  // namespace

RunSummary run_scenario(const Scenario& scenario, const RowSink& sink)
{
  const auto wall0 = std::chrono::steady_clock::now();
  Simulator sim(scenario);
  const SimConfig& cfg = scenario.sim;
  const FdiConfig& fdi_cfg = scenario.fdi;
  const long n_steps = std::lround(cfg.duration / cfg.dt);
  const int decimation = std::max(1, cfg.decimation);

  RunSummary sum;
  sum.name = scenario.name;
  sum.dt = cfg.dt;
  sum.duration = cfg.duration;
  sum.overrides = scenario.overrides;

  const auto& events = scenario.faults.events();
  const double first_fault = events.empty() ? 1e300 : events.front().time;
  std::vector<FaultWindow> windows;
  for (std::size_t k = 0; k < events.size(); ++k) {
    FaultWindow w;
    w.outcome.event = events[k];
    w.end = k + 1 < events.size() ? events[k + 1].time : cfg.duration;
    windows.push_back(w);
  }

  std::optional<double> last_far;  // last time |e_eta| exceeded the convergence bound
  std::size_t log_seen = 0;

  auto observe = [&](const Simulator& s) {
    const double t = s.time();
    const FdiState& f = s.fdi();
    const ControlSnapshot& c = s.snapshot();

    if (c.alloc.saturated) {
      ++sum.saturation_steps;
    }
    if (t < first_fault && c.errors.e_eta.norm() > cfg.convergence_delta) {
      last_far = t;
    }
    const bool in_hold = t - f.last_nonsmooth < fdi_cfg.hold_window - 1e-9;
    if (t >= fdi_cfg.arm_time - 1e-9 && !in_hold && f.residual > sum.max_residual) {
      sum.max_residual = f.residual;
      sum.max_residual_time = t;
    }

    for (; log_seen < f.identified_log.size(); ++log_seen) {
      const FdiEvent& ev = f.identified_log[log_seen];
      if (ev.kind == FdiEvent::Kind::Trigger) {
        sum.detections.emplace_back(ev.time, ev.value);
        if (ev.time < first_fault) {
          ++sum.false_triggers;
        }
      } else if (ev.kind == FdiEvent::Kind::Identified) {
        sum.identifications.emplace_back(ev.time, ev.thruster);
        if (ev.time < first_fault) {
          ++sum.premature_identifications;
        }
      }
      for (FaultWindow& w : windows) {
        if (ev.time < w.outcome.event.time - 1e-9 || ev.time >= w.end - 1e-9) {
          continue;
        }
        if (ev.kind == FdiEvent::Kind::Trigger && !w.outcome.detection_time) {
          w.outcome.detection_time = ev.time;
        }
        if (ev.kind == FdiEvent::Kind::Identified && !w.outcome.identified) {
          w.outcome.identified = ev.thruster;
          w.outcome.identification_time = ev.time;
        }
      }
    }

    for (FaultWindow& w : windows) {
      if (t < w.outcome.event.time - 1e-9 || t >= w.end - 1e-9) {
        continue;
      }
      if (f.b_trig || f.residual > f.threshold) {
        w.last_bad = t;
      }
      const int i = w.outcome.event.thruster - 1;
      w.outcome.w_hat_at_end = s.bank().W_hat(i);
    }
  };

  observe(sim);
  if (sink) {
    sink(sim.row());
  }
  for (long k = 0; k < n_steps; ++k) {
    sim.step();
    observe(sim);
    if (sink && (sim.steps() % decimation == 0 || sim.steps() == n_steps)) {
      sink(sim.row());
    }
  }

  sum.steps = sim.steps();
  sum.final_w = sim.bank().W;
  sum.final_w_hat = sim.bank().W_hat;
  if (!last_far) {
    sum.convergence_time = 0.0;
  } else if (*last_far + cfg.dt < std::min(first_fault, cfg.duration)) {
    sum.convergence_time = *last_far + cfg.dt;
  }

  for (FaultWindow& w : windows) {
    FaultOutcome& o = w.outcome;
    const double settled = w.last_bad ? *w.last_bad + cfg.dt : o.event.time;
    if (settled < w.end - 1e-9) {
      o.reconverge_time = settled;
    }
    o.reconverged = o.reconverge_time && (*o.reconverge_time - o.event.time) <= cfg.reconverge_window;
    o.estimate_error = std::abs(o.w_hat_at_end - o.event.weight);
    o.reconfiguration_ok = o.reconverged && o.identified == o.event.thruster &&
                           o.estimate_error <= 2.0 * fdi_cfg.delta_w + 1e-9;
    if (!o.reconfiguration_ok) {
      ++sum.reconfiguration_failures;
    }
    sum.faults.push_back(o);
  }

  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return sum;
}

}  // namespace ftc
