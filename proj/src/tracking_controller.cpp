#include "ftc/tracking_controller.hpp"

#include <algorithm>

namespace ftc {

ControllerGains ControllerGains::make(const Vec3& gamma1, const Vec3& gamma2, const Vec3& a1,
                                      const Vec3& a2)
{
  for (const Vec3* g : {&gamma1, &gamma2, &a1, &a2}) {
    if (!g->allFinite() || !(g->minCoeff() > 0.0)) {
      throw ValidationError("controller gains must be strictly positive");
    }
  }
  return {gamma1, gamma2, a1, a2, decay_rate(gamma1, gamma2, a1, a2)};
}

double ControllerGains::decay_rate(const Vec3& gamma1, const Vec3& gamma2, const Vec3& a1,
                                   const Vec3& a2)
{
  // Diagonal products: the singular values are the absolute entries.
  const double k1 = a1.cwiseQuotient(gamma1).cwiseAbs().minCoeff();
  const double k2 = a2.cwiseQuotient(gamma2).cwiseAbs().minCoeff();
  return std::min(k1, k2);
}

Vec3 pose_error(const Vec3& eta_d, const Vec3& eta)
{
  Vec3 e = eta_d - eta;
  e(2) = wrap_angle(e(2));
  return e;
}

Vec3 pose_error_rate(const ReferenceSample& ref, const VehicleState& state)
{
  return ref.eta_d_dot - rotation_matrix(state.psi) * state.nu();
}

Vec3 stabilization_function(const ReferenceSample& ref, const Vec3& e_eta, double psi,
                            const ControllerGains& gains)
{
  const Vec3 k1 = gains.a1.cwiseQuotient(gains.gamma1);
  return rotation_matrix(psi).transpose() * (ref.eta_d_dot + k1.cwiseProduct(e_eta));
}

Vec3 stabilization_derivative(const ReferenceSample& ref, const VehicleState& state,
                              const Vec3& e_eta, const ControllerGains& gains)
{
  const Vec3 k1 = gains.a1.cwiseQuotient(gains.gamma1);
  const Mat3 j_inv = rotation_matrix(state.psi).transpose();
  const Mat3 j_dot = rotation_matrix_dot(state.psi, state.r);
  const Vec3 e_eta_dot = pose_error_rate(ref, state);
  const Vec3 inner = ref.eta_d_dot + k1.cwiseProduct(e_eta);
  return j_inv * (ref.eta_d_ddot + k1.cwiseProduct(e_eta_dot)) - j_inv * j_dot * j_inv * inner;
}

TrackingErrors tracking_errors(const VehicleState& state, const ReferenceSample& ref,
                               const ControllerGains& gains)
{
  TrackingErrors e;
  e.e_eta = pose_error(ref.eta_d, state.eta());
  e.alpha_nu = stabilization_function(ref, e.e_eta, state.psi, gains);
  e.e_nu = e.alpha_nu - state.nu();
  return e;
}

Wrench control_law(const VehicleState& state, const ReferenceSample& ref,
                   const TrackingErrors& errors, const ControllerGains& gains,
                   const VehicleParams& params)
{
  const Vec3 alpha_dot = stabilization_derivative(ref, state, errors.e_eta, gains);
  const Vec3 fv = eval_fv(state.nu(), params);
  const Mat3 j = rotation_matrix(state.psi);
  const Vec3 k2 = gains.a2.cwiseQuotient(gains.gamma2);
  const Vec3 coupling =
      (j.transpose() * gains.gamma1.cwiseProduct(errors.e_eta)).cwiseQuotient(gains.gamma2);
  const Vec3 rhs = alpha_dot - fv + k2.cwiseProduct(errors.e_nu) + coupling;
  return Wrench::from(params.control_gain.partialPivLu().solve(rhs));
}

double lyapunov_value(const TrackingErrors& errors, const ControllerGains& gains)
{
  return 0.5 * errors.e_eta.dot(gains.gamma1.cwiseProduct(errors.e_eta)) +
         0.5 * errors.e_nu.dot(gains.gamma2.cwiseProduct(errors.e_nu));
}

double lyapunov_rate_bound(const TrackingErrors& errors, const ControllerGains& gains)
{
  return -errors.e_eta.dot(gains.a1.cwiseProduct(errors.e_eta)) -
         errors.e_nu.dot(gains.a2.cwiseProduct(errors.e_nu));
}

}  // namespace ftc
