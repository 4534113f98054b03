#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ftc {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;

inline constexpr int kNumThrusters = 4;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(a + std::numbers::pi, two_pi);
  if (w <= 0.0) {
    w += two_pi;
  }
  return w - std::numbers::pi;
}

/// Pose in the navigation frame plus body-frame velocity.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double u = 0.0;
  double v = 0.0;
  double r = 0.0;

  Vec3 eta() const { return {x, y, psi}; }
  Vec3 nu() const { return {u, v, r}; }

  static VehicleState from(const Vec3& eta, const Vec3& nu)
  {
    return {eta(0), eta(1), wrap_angle(eta(2)), nu(0), nu(1), nu(2)};
  }

  bool finite() const
  {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(psi) && std::isfinite(u) &&
           std::isfinite(v) && std::isfinite(r);
  }
};

/// Body-frame force/moment: surge force, sway force, yaw moment.
struct Wrench {
  double tau_u = 0.0;
  double tau_v = 0.0;
  double tau_r = 0.0;

  Vec3 vec() const { return {tau_u, tau_v, tau_r}; }
  static Wrench from(const Vec3& t) { return {t(0), t(1), t(2)}; }
};

/// Configuration or invariant violation detected before or during setup.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The closed loop left the numerically sane region.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, const std::string& what)
      : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace ftc
