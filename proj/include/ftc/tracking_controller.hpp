#pragma once

#include "ftc/vehicle_model.hpp"

namespace ftc {

/// Backstepping gains. All four matrices are diagonal; only the diagonals are
/// stored.
struct ControllerGains {
  Vec3 gamma1 = Vec3(1.0, 1.0, 10.0);
  Vec3 gamma2 = Vec3(100.0, 100.0, 300.0);
  Vec3 a1 = Vec3(1.0, 1.0, 10.0);
  Vec3 a2 = Vec3(100.0, 100.0, 300.0);
  double lambda = 1.0;

  /// Validates positivity and derives lambda.
  static ControllerGains make(const Vec3& gamma1, const Vec3& gamma2, const Vec3& a1,
                              const Vec3& a2);

  /// Smallest singular value over Gamma1^-1 A1 and Gamma2^-1 A2.
  static double decay_rate(const Vec3& gamma1, const Vec3& gamma2, const Vec3& a1,
                           const Vec3& a2);
};

struct ReferenceSample {
  Vec3 eta_d = Vec3::Zero();
  Vec3 eta_d_dot = Vec3::Zero();
  Vec3 eta_d_ddot = Vec3::Zero();
  /// False at segment joints, where the derivatives are right limits.
  bool smooth = true;
  int segment = 0;
};

struct TrackingErrors {
  Vec3 e_eta = Vec3::Zero();
  Vec3 e_nu = Vec3::Zero();
  Vec3 alpha_nu = Vec3::Zero();
};

/// eta_d - eta with the yaw component taken on the circle.
Vec3 pose_error(const Vec3& eta_d, const Vec3& eta);

/// e_eta_dot = eta_d_dot - J nu.
Vec3 pose_error_rate(const ReferenceSample& ref, const VehicleState& state);

/// alpha_nu = J^T (eta_d_dot + Gamma1^-1 A1 e_eta).
Vec3 stabilization_function(const ReferenceSample& ref, const Vec3& e_eta, double psi,
                            const ControllerGains& gains);

/// Analytic time derivative of alpha_nu along the vehicle motion.
Vec3 stabilization_derivative(const ReferenceSample& ref, const VehicleState& state,
                              const Vec3& e_eta, const ControllerGains& gains);

TrackingErrors tracking_errors(const VehicleState& state, const ReferenceSample& ref,
                               const ControllerGains& gains);

/// Commanded body wrench:
///   tau_c = B^-1 (alpha_dot - F_V + Gamma2^-1 A2 e_nu + Gamma2^-1 J^T Gamma1 e_eta).
/// With these two coupling terms V2 obeys V2_dot = -e_eta' A1 e_eta - e_nu' A2 e_nu
/// exactly when the wrench is delivered.
Wrench control_law(const VehicleState& state, const ReferenceSample& ref,
                   const TrackingErrors& errors, const ControllerGains& gains,
                   const VehicleParams& params);

/// V2 = 1/2 e_eta' Gamma1 e_eta + 1/2 e_nu' Gamma2 e_nu.
double lyapunov_value(const TrackingErrors& errors, const ControllerGains& gains);

/// Closed-loop V2_dot under perfect wrench delivery: -e_eta' A1 e_eta - e_nu' A2 e_nu.
double lyapunov_rate_bound(const TrackingErrors& errors, const ControllerGains& gains);

}  // namespace ftc
