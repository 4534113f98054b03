#pragma once

#include "ftc/types.hpp"

namespace ftc {

/// 3DOF horizontal-plane model parameters.
///
/// `inertia` is rigid-body plus added mass. Damping is
/// D(nu) = lin_damping + diag(quad_damping .* |nu|). `control_gain` is the
/// B matrix multiplying the body wrench; for a physical vehicle it equals
/// inertia^-1.
struct VehicleParams {
  Mat3 inertia = Mat3::Identity();
  Mat3 lin_damping = Mat3::Zero();
  Vec3 quad_damping = Vec3::Zero();
  Mat3 control_gain = Mat3::Identity();

  /// Throws ValidationError when inertia or B is not positive definite.
  void validate() const;

  /// Planar reduction of a BlueROV2 Heavy class vehicle; B = M^-1.
  static VehicleParams bluerov2_heavy_3dof();
};

struct ThrusterGeometry {
  double alpha = std::numbers::pi / 4.0;
  double l = 0.2;
  Mat34 t_conf = Mat34::Zero();

  /// Builds the geometry; rejects degenerate orientation or arm.
  static ThrusterGeometry make(double alpha, double l);
};

struct ThrusterBank {
  Vec4 K = Vec4::Constant(40.0);
  Vec4 W = Vec4::Ones();
  Vec4 W_hat = Vec4::Ones();
  Vec4 u_cmd = Vec4::Zero();
  double u_max = 1.0;
  double w_min = 0.05;

  void validate() const;
};

/// Body-to-navigation rotation J(psi).
Mat3 rotation_matrix(double psi);

/// Time derivative of J(psi) given the yaw rate.
Mat3 rotation_matrix_dot(double psi, double r);

/// eta_dot = J(psi) nu.
Vec3 kinematics_rhs(const VehicleState& state);

/// Coriolis-centripetal matrix for the horizontal plane built from a symmetric
/// inertia matrix.
Mat3 coriolis_matrix(const Vec3& nu, const Mat3& inertia);

/// F_V(nu) = -M^-1 (C(nu) nu + D(nu) nu).
Vec3 eval_fv(const Vec3& nu, const VehicleParams& params);

/// Analytic Jacobian dF_V/dnu.
Mat3 fv_jacobian(const Vec3& nu, const VehicleParams& params);

/// Configuration matrix of the X thruster layout.
Mat34 config_matrix(double alpha, double l);

/// F_i = K_i W_i u_i.
Vec4 thrust_forces(const Vec4& u_cmd, const ThrusterBank& bank);

/// nu_dot = F_V(nu) + B tau.
Vec3 dynamics_rhs(const VehicleState& state, const Vec3& tau, const VehicleParams& params);

}  // namespace ftc
