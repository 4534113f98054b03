#include "ftc/trajectory.hpp"

#include <algorithm>

namespace ftc {

namespace {

// Joints closer than this to a sample time count as hit.
constexpr double kJointTol = 1e-9;

}  // namespace

TrajectoryPlan::TrajectoryPlan(Vec3 initial_pose, std::vector<Segment> segments)
    : initial_pose_(std::move(initial_pose)), segments_(std::move(segments))
{
  double t = 0.0;
  Vec3 pose = initial_pose_;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (!(s.duration > 0.0)) {
      throw ValidationError("trajectory segment " + std::to_string(i) + " duration must be > 0");
    }
    starts_.push_back(t);
    start_poses_.push_back(pose);
    const ReferenceSample end = evaluate(static_cast<int>(i), s.duration);
    pose = end.eta_d;
    t += s.duration;
  }
  starts_.push_back(t);
  start_poses_.push_back(pose);
}

std::vector<double> TrajectoryPlan::joints() const
{
  if (starts_.size() <= 2) {
    return {};
  }
  return {starts_.begin() + 1, starts_.end() - 1};
}

ReferenceSample TrajectoryPlan::evaluate(int index, double tau) const
{
  const Segment& s = segments_[static_cast<std::size_t>(index)];
  const Vec3& p0 = start_poses_[static_cast<std::size_t>(index)];
  ReferenceSample r;
  r.segment = index;
  switch (s.mode) {
    case Segment::Mode::Hold:
      r.eta_d = p0;
      break;
    case Segment::Mode::Straight: {
      const double heading = s.has_heading ? s.heading : p0(2);
      const Vec3 rate(s.speed * std::cos(heading), s.speed * std::sin(heading), 0.0);
      r.eta_d = Vec3(p0(0), p0(1), heading) + tau * rate;
      r.eta_d_dot = rate;
      break;
    }
    case Segment::Mode::Turn: {
      const double psi0 = p0(2);
      const double psi = psi0 + s.yaw_rate * tau;
      const double c = std::cos(psi);
      const double sn = std::sin(psi);
      if (std::abs(s.yaw_rate) > 0.0) {
        const double radius = s.speed / s.yaw_rate;
        r.eta_d = Vec3(p0(0) + radius * (sn - std::sin(psi0)),
                       p0(1) - radius * (c - std::cos(psi0)), psi);
      } else {
        r.eta_d = Vec3(p0(0) + s.speed * tau * c, p0(1) + s.speed * tau * sn, psi);
      }
      r.eta_d_dot = Vec3(s.speed * c, s.speed * sn, s.yaw_rate);
      r.eta_d_ddot = Vec3(-s.speed * s.yaw_rate * sn, s.speed * s.yaw_rate * c, 0.0);
      break;
    }
  }
  r.eta_d(2) = wrap_angle(r.eta_d(2));
  return r;
}

ReferenceSample TrajectoryPlan::sample(double t) const
{
  if (segments_.empty()) {
    ReferenceSample r;
    r.eta_d = initial_pose_;
    r.eta_d(2) = wrap_angle(r.eta_d(2));
    return r;
  }
  const double end = starts_.back();
  if (t >= end) {
    ReferenceSample r;
    r.eta_d = start_poses_.back();
    r.eta_d(2) = wrap_angle(r.eta_d(2));
    r.segment = static_cast<int>(segments_.size());
    r.smooth = std::abs(t - end) > kJointTol;
    return r;
  }
  const auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, std::max(t, 0.0));
  const int index = static_cast<int>(std::distance(starts_.begin(), it)) - 1;
  const double tau = std::max(t, 0.0) - starts_[static_cast<std::size_t>(index)];
  ReferenceSample r = evaluate(index, tau);
  r.smooth = !(index > 0 && tau <= kJointTol);
  return r;
}

TrajectoryPlan TrajectoryPlan::default_plan(double turn_duration)
{
  const double north = std::numbers::pi / 2.0;
  Segment line;
  line.mode = Segment::Mode::Straight;
  line.duration = 300.0;
  line.speed = 1.0;
  line.heading = north;
  line.has_heading = true;
  Segment turn;
  turn.mode = Segment::Mode::Turn;
  turn.duration = turn_duration;
  turn.speed = 1.0;
  turn.yaw_rate = 0.05;
  return {Vec3(10.0, 5.0, north), {line, turn}};
}

ReferenceSample reference_trajectory(double t, const TrajectoryPlan& plan)
{
  if (!(t >= 0.0)) {
    throw std::invalid_argument("reference time must be >= 0");
  }
  return plan.sample(t);
}

}  // namespace ftc
