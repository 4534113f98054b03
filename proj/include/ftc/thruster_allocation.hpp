#pragma once

#include "ftc/vehicle_model.hpp"

#include <array>

namespace ftc {

/// Minimum-norm right inverse T^T (T T^T)^-1. Throws on rank-deficient input.
Mat43 pseudo_inverse(const Mat34& t_conf);

struct Allocation {
  Vec4 raw = Vec4::Zero();      ///< before saturation
  Vec4 clamped = Vec4::Zero();  ///< what the plant receives
  bool saturated = false;
  /// Thrusters excluded because their estimate sits at the floor.
  std::array<bool, kNumThrusters> dropped{};
};

struct AllocationOptions {
  /// Exclude thrusters whose estimated weight has reached w_min and
  /// redistribute over the remaining three.
  bool drop_failed = true;
};

/// u_hat = W_hat^-1 K^-1 T^+ tau_c, then clamped to +-u_max.
Allocation allocate(const Wrench& tau_c, const ThrusterBank& bank, const ThrusterGeometry& geom,
                    const AllocationOptions& opts = {});

/// tau = T K W u.
Wrench achieved_wrench(const Vec4& u_cmd, const ThrusterBank& bank, const ThrusterGeometry& geom);

}  // namespace ftc
