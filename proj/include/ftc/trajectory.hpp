#pragma once

#include "ftc/tracking_controller.hpp"

#include <vector>

namespace ftc {

struct Segment {
  enum class Mode { Hold, Straight, Turn };
  Mode mode = Mode::Hold;
  double duration = 0.0;
  double speed = 0.0;     ///< straight/turn: signed speed along the heading, m/s
  double heading = 0.0;   ///< straight: course and yaw, rad
  double yaw_rate = 0.0;  ///< turn: rad/s
  bool has_heading = false;  ///< straight without heading keeps the incoming yaw
};

/// Piecewise-analytic reference. Each segment starts where the previous one ended.
class TrajectoryPlan {
 public:
  TrajectoryPlan() = default;
  TrajectoryPlan(Vec3 initial_pose, std::vector<Segment> segments);

  const Vec3& initial_pose() const { return initial_pose_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double total_duration() const { return starts_.empty() ? 0.0 : starts_.back(); }

  /// Start times of segments 1..n-1.
  std::vector<double> joints() const;

  ReferenceSample sample(double t) const;

  /// The plan of the numerical study: north-bound line at 1 m/s for 300 s,
  /// then a 0.05 rad/s turn.
  static TrajectoryPlan default_plan(double turn_duration = 300.0);

 private:
  ReferenceSample evaluate(int index, double tau) const;

  Vec3 initial_pose_ = Vec3::Zero();
  std::vector<Segment> segments_;
  std::vector<double> starts_;     // segment start times, plus end time
  std::vector<Vec3> start_poses_;  // pose at each segment start, plus end pose
};

/// Samples the plan; past the end the final pose is held.
ReferenceSample reference_trajectory(double t, const TrajectoryPlan& plan);

}  // namespace ftc
