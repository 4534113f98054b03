#include "ftc/fdi_engine.hpp"

#include <cmath>

namespace ftc {

namespace {

int sign_of(double v, double dead_band)
{
  if (std::abs(v) < dead_band) {
    return 0;
  }
  return v > 0.0 ? 1 : -1;
}

}  // namespace

void FdiConfig::validate() const
{
  const std::pair<const char*, double> positive[] = {
      {"c1", c1},         {"c2", c2},           {"delta1", delta1}, {"delta2", delta2},
      {"T_s", T_s},       {"delta_w", delta_w}, {"eps_u", eps_u},   {"eps_g", eps_g},
      {"w_min", w_min}};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0)) {
      throw ValidationError(std::string("fdi.") + name + " must be > 0");
    }
  }
  if (!(f_smooth >= 0.0) || !(hold_window >= 0.0) || !(hold_widen >= 0.0) || !(arm_time >= 0.0)) {
    throw ValidationError("fdi.f_smooth, hold_window, hold_widen and arm_time must be >= 0");
  }
  if (!(delta_w < 1.0)) {
    throw ValidationError("fdi.delta_w must be < 1");
  }
  if (!(w_min < 1.0)) {
    throw ValidationError("fdi.w_min must be < 1");
  }
  if (n_consec < 1) {
    throw ValidationError("fdi.n_consec must be >= 1");
  }
}

double residual(const Vec3& e_eta, double c1)
{
  return std::sqrt(e_eta(0) * e_eta(0) + e_eta(1) * e_eta(1) + c1 * e_eta(2) * e_eta(2));
}

double detection_threshold(const FdiConfig& cfg, const ReferenceSample& ref, bool in_hold_window)
{
  const bool widen = in_hold_window || !ref.smooth;
  return cfg.c2 + cfg.f_smooth + (widen ? cfg.hold_widen : 0.0);
}

SignPattern predict_sign_pattern(int i, double u_i, double psi, const ThrusterGeometry& geom,
                                 double eps_u, double eps_g)
{
  if (i < 1 || i > kNumThrusters) {
    throw std::out_of_range("thruster index must be 1..4");
  }
  if (std::abs(u_i) < eps_u) {
    return {};
  }
  const Vec3 b = geom.t_conf.col(i - 1);
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  // Navigation-frame direction of the thrust line.
  const double d_x = c * b(0) - s * b(1);
  const double d_y = s * b(0) + c * b(1);
  const double u_sign = u_i > 0.0 ? 1.0 : -1.0;

  SignPattern p;
  p.s_x = std::abs(d_x) < eps_g ? 0 : sign_of(u_sign * d_x, 0.0);
  p.s_y = std::abs(d_y) < eps_g ? 0 : sign_of(u_sign * d_y, 0.0);
  p.s_psi = std::abs(b(2)) < eps_g ? 0 : sign_of(u_sign * b(2), 0.0);
  return p;
}

std::optional<int> identify_fault(const Vec3& e_eta_dot, const Vec4& u_cmd, double psi,
                                  const FdiConfig& cfg, const ThrusterGeometry& geom)
{
  std::optional<int> match;
  for (int i = 1; i <= kNumThrusters; ++i) {
    const SignPattern p = predict_sign_pattern(i, u_cmd(i - 1), psi, geom, cfg.eps_u, cfg.eps_g);
    if (!p.complete()) {
      continue;
    }
    const bool hit = e_eta_dot(0) * p.s_x > cfg.delta1 && e_eta_dot(1) * p.s_y > cfg.delta1 &&
                     e_eta_dot(2) * p.s_psi > cfg.delta2;
    if (!hit) {
      continue;
    }
    if (match) {
      return std::nullopt;  // ambiguous; wait for a cleaner sample
    }
    match = i;
  }
  return match;
}

Vec4 reconfigure_step(const Vec4& w_hat, int fault_num, const FdiConfig& cfg)
{
  if (fault_num < 1 || fault_num > kNumThrusters) {
    throw std::out_of_range("thruster index must be 1..4");
  }
  Vec4 out = w_hat;
  out(fault_num - 1) = std::max(out(fault_num - 1) - cfg.delta_w, cfg.w_min);
  return out;
}

FdiUpdate fdi_update(FdiState fdi, const FdiInputs& in, const Vec4& w_hat, double dt,
                     const FdiConfig& cfg, const ThrusterGeometry& geom)
{
  FdiUpdate out;
  if (!in.ref.smooth) {
    fdi.last_nonsmooth = in.t;
  }
  const bool in_hold = in.t - fdi.last_nonsmooth < cfg.hold_window - 1e-9;
  fdi.residual = residual(in.e_eta, cfg.c1);
  fdi.threshold = detection_threshold(cfg, in.ref, in_hold);

  if (in.t < cfg.arm_time - 1e-9) {
    out.state = std::move(fdi);
    return out;
  }

  const bool above = detect(fdi.residual, fdi.threshold);
  fdi.above_count = above ? fdi.above_count + 1 : 0;

  if (!fdi.b_trig) {
    if (fdi.above_count >= cfg.n_consec) {
      fdi.b_trig = true;
      fdi.b_first_check = true;
      fdi.fault_num.reset();
      fdi.w_time = 0.0;
      fdi.update_ticks = 0;
      fdi.identified_log.push_back({FdiEvent::Kind::Trigger, in.t, 0, fdi.residual});
    }
  } else if (!above) {
    // Falling edge: re-arm for the next fault.
    fdi.b_trig = false;
    fdi.b_first_check = false;
    fdi.identified_log.push_back(
        {FdiEvent::Kind::Cleared, in.t, fdi.fault_num.value_or(0), fdi.residual});
    fdi.fault_num.reset();
    fdi.w_time = 0.0;
    fdi.update_ticks = 0;
    out.state = std::move(fdi);
    return out;
  }

  if (!fdi.b_trig) {
    out.state = std::move(fdi);
    return out;
  }

  if (fdi.b_first_check) {
    if (auto id = identify_fault(in.e_eta_dot, in.u_cmd, in.psi, cfg, geom)) {
      fdi.fault_num = id;
      fdi.b_first_check = false;
      fdi.identified_log.push_back({FdiEvent::Kind::Identified, in.t, *id, fdi.residual});
    }
  }

  if (fdi.fault_num) {
    const long period = std::max(1L, std::lround(cfg.T_s / dt));
    ++fdi.update_ticks;
    if (fdi.update_ticks >= period) {
      const Vec4 next = reconfigure_step(w_hat, *fdi.fault_num, cfg);
      fdi.identified_log.push_back(
          {FdiEvent::Kind::WeightUpdate, in.t, *fdi.fault_num, next(*fdi.fault_num - 1)});
      out.w_hat = next;
      fdi.update_ticks = 0;
    }
    fdi.w_time = static_cast<double>(fdi.update_ticks) * dt;
  }

  out.state = std::move(fdi);
  return out;
}

}  // namespace ftc
