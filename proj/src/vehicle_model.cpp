#include "ftc/vehicle_model.hpp"

#include <Eigen/Eigenvalues>

namespace ftc {

namespace {

bool positive_definite(const Mat3& m)
{
  if (!m.allFinite()) {
    return false;
  }
  // Symmetric part carries the quadratic form.
  const Mat3 sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(sym);
  return eig.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

void VehicleParams::validate() const
{
  if (!inertia.isApprox(inertia.transpose(), 1e-12) || !positive_definite(inertia)) {
    throw ValidationError("inertia must be symmetric positive definite");
  }
  if (!positive_definite(control_gain)) {
    throw ValidationError("control gain B must be positive definite");
  }
  if (!lin_damping.allFinite() || !quad_damping.allFinite()) {
    throw ValidationError("damping terms must be finite");
  }
}

VehicleParams VehicleParams::bluerov2_heavy_3dof()
{
  VehicleParams p;
  p.inertia = Vec3(19.9, 20.6, 0.25).asDiagonal();
  p.lin_damping = Vec3(2.5, 2.5, 0.3).asDiagonal();
  p.quad_damping = Vec3(2.5, 3.0, 0.3);
  p.control_gain = p.inertia.inverse();
  return p;
}

ThrusterGeometry ThrusterGeometry::make(double alpha, double l)
{
  return {alpha, l, config_matrix(alpha, l)};
}

void ThrusterBank::validate() const
{
  for (int i = 0; i < kNumThrusters; ++i) {
    if (!(K(i) > 0.0)) {
      throw ValidationError("thrust coefficient K" + std::to_string(i + 1) + " must be > 0");
    }
    if (!(W(i) >= 0.0 && W(i) <= 1.0)) {
      throw ValidationError("true weight W" + std::to_string(i + 1) + " outside [0, 1]");
    }
    if (!(W_hat(i) >= w_min && W_hat(i) <= 1.0)) {
      throw ValidationError("estimated weight W_hat" + std::to_string(i + 1) +
                            " outside [w_min, 1]");
    }
  }
  if (!(u_max > 0.0)) {
    throw ValidationError("u_max must be > 0");
  }
}

Mat3 rotation_matrix(double psi)
{
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  Mat3 j;
  j << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return j;
}

Mat3 rotation_matrix_dot(double psi, double r)
{
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  Mat3 jd;
  jd << -s, -c, 0.0,
        c, -s, 0.0,
        0.0, 0.0, 0.0;
  return r * jd;
}

Vec3 kinematics_rhs(const VehicleState& state)
{
  return rotation_matrix(state.psi) * state.nu();
}

Mat3 coriolis_matrix(const Vec3& nu, const Mat3& inertia)
{
  // Horizontal-plane reduction of the 6DOF rigid-body plus added-mass form.
  const double a1 = inertia.row(0).dot(nu);
  const double a2 = inertia.row(1).dot(nu);
  Mat3 c;
  c << 0.0, 0.0, -a2,
       0.0, 0.0, a1,
       a2, -a1, 0.0;
  return c;
}

Vec3 eval_fv(const Vec3& nu, const VehicleParams& params)
{
  const Vec3 damping = params.lin_damping * nu +
                       params.quad_damping.cwiseProduct(nu.cwiseAbs()).cwiseProduct(nu);
  const Vec3 coriolis = coriolis_matrix(nu, params.inertia) * nu;
  return -params.inertia.ldlt().solve(coriolis + damping);
}

Mat3 fv_jacobian(const Vec3& nu, const VehicleParams& params)
{
  const Mat3& m = params.inertia;
  const double a1 = m.row(0).dot(nu);
  const double a2 = m.row(1).dot(nu);

  // d(C(nu) nu)/dnu. C(nu) nu = [-a2 r, a1 r, a2 u - a1 v].
  Mat3 dc;
  dc.row(0) = -nu(2) * m.row(1);
  dc(0, 2) += -a2;
  dc.row(1) = nu(2) * m.row(0);
  dc(1, 2) += a1;
  dc.row(2) = nu(0) * m.row(1) - nu(1) * m.row(0);
  dc(2, 0) += a2;
  dc(2, 1) += -a1;

  // d(q_i |nu_i| nu_i)/dnu_i = 2 q_i |nu_i|.
  Mat3 dd = params.lin_damping;
  dd.diagonal() += 2.0 * params.quad_damping.cwiseProduct(nu.cwiseAbs());

  return -m.ldlt().solve(dc + dd);
}

Mat34 config_matrix(double alpha, double l)
{
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2.0)) {
    throw ValidationError("thruster orientation alpha must lie in (0, pi/2); the configuration "
                          "matrix is rank deficient otherwise");
  }
  if (!(l > 0.0)) {
    throw ValidationError("moment arm l must be > 0; the configuration matrix is rank "
                          "deficient otherwise");
  }
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Mat34 t;
  t << c, c, -c, -c,
       -s, s, -s, s,
       -l, l, l, -l;
  return t;
}

Vec4 thrust_forces(const Vec4& u_cmd, const ThrusterBank& bank)
{
  return bank.K.cwiseProduct(bank.W).cwiseProduct(u_cmd);
}

Vec3 dynamics_rhs(const VehicleState& state, const Vec3& tau, const VehicleParams& params)
{
  return eval_fv(state.nu(), params) + params.control_gain * tau;
}

}  // namespace ftc
