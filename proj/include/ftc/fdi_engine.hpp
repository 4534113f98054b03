#pragma once

#include "ftc/tracking_controller.hpp"

#include <array>
#include <optional>
#include <vector>

namespace ftc {

struct FdiConfig {
  double c1 = 5.0;            ///< yaw weighting in the residual
  double c2 = 0.01;           ///< base threshold, m
  double f_smooth = 0.3;      ///< reference-smoothness allowance, m
  double hold_window = 5.0;   ///< s after a non-smooth reference sample
  double hold_widen = 0.3;    ///< extra threshold inside the hold window, m
  double delta1 = 0.002;      ///< position error-rate threshold, m/s
  double delta2 = 0.01;       ///< yaw error-rate threshold, rad/s
  double T_s = 5.0;           ///< weight update period, s
  double delta_w = 0.05;      ///< weight decrement per update
  double eps_u = 1e-3;        ///< command dead-band
  double eps_g = 1e-3;        ///< geometric factor dead-band
  double w_min = 0.05;        ///< estimate floor
  int n_consec = 5;           ///< samples above threshold before triggering
  double arm_time = 50.0;     ///< FDI stays disarmed before the loop has converged, s

  void validate() const;

  /// Shortest update period that lets the tracking loop settle between
  /// decrements: two closed-loop time constants.
  static double min_update_period(double lambda) { return 2.0 / lambda; }
};

struct FdiEvent {
  enum class Kind { Trigger, Identified, WeightUpdate, Cleared };
  Kind kind = Kind::Trigger;
  double time = 0.0;
  int thruster = 0;  ///< 1-based; 0 when not applicable
  double value = 0.0;  ///< residual on trigger/clear, new estimate on update
};

struct FdiState {
  bool b_trig = false;
  bool b_first_check = false;
  std::optional<int> fault_num;  ///< 1-based thruster index
  double w_time = 0.0;
  long update_ticks = 0;  ///< w_time in whole steps
  int above_count = 0;
  double residual = 0.0;
  double threshold = 0.0;
  double last_nonsmooth = -1e300;
  std::vector<FdiEvent> identified_log;
};

/// Signs of (x_e_dot, y_e_dot, psi_e_dot); 0 means indeterminate.
struct SignPattern {
  int s_x = 0;
  int s_y = 0;
  int s_psi = 0;

  bool complete() const { return s_x != 0 && s_y != 0 && s_psi != 0; }
  friend bool operator==(const SignPattern&, const SignPattern&) = default;
};

/// sqrt(x_e^2 + y_e^2 + c1 psi_e^2).
double residual(const Vec3& e_eta, double c1);

/// c2 + f, widened while `in_hold_window`.
double detection_threshold(const FdiConfig& cfg, const ReferenceSample& ref,
                           bool in_hold_window = false);

/// Strict comparison.
inline bool detect(double residual_value, double threshold) { return residual_value > threshold; }

/// Predicted error-rate signs when thruster `i` (1-based) loses thrust while
/// commanded `u_i` at heading `psi`.
SignPattern predict_sign_pattern(int i, double u_i, double psi, const ThrusterGeometry& geom,
                                 double eps_u = 1e-3, double eps_g = 1e-3);

/// Unique thruster whose predicted pattern the observed error rates exceed.
std::optional<int> identify_fault(const Vec3& e_eta_dot, const Vec4& u_cmd, double psi,
                                  const FdiConfig& cfg, const ThrusterGeometry& geom);

/// Decrements the estimate of `fault_num` (1-based) by delta_w, floored at w_min.
Vec4 reconfigure_step(const Vec4& w_hat, int fault_num, const FdiConfig& cfg);

struct FdiInputs {
  Vec3 e_eta = Vec3::Zero();
  Vec3 e_eta_dot = Vec3::Zero();
  Vec4 u_cmd = Vec4::Zero();
  double psi = 0.0;
  ReferenceSample ref;
  double t = 0.0;
};

struct FdiUpdate {
  FdiState state;
  std::optional<Vec4> w_hat;
};

/// One control-step pass of the detect / identify / reconfigure loop.
FdiUpdate fdi_update(FdiState fdi, const FdiInputs& in, const Vec4& w_hat, double dt,
                     const FdiConfig& cfg, const ThrusterGeometry& geom);

}  // namespace ftc
