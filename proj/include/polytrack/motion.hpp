#pragma once

#include "polytrack/common.hpp"
#include "polytrack/geometry.hpp"

namespace polytrack {

/// 2:1 kinematic state: position, heading, speed, speed rate, turn rate.
/// Vector layout is [gx, gy, h, s, s_dot, omega].
struct KinematicState {
  Vec2 g = Vec2::Zero();
  double h = 0.0;       // [rad], kept in [0, 2*pi)
  double s = 0.0;       // [m/s]
  double s_dot = 0.0;   // [m/s^2]
  double omega = 0.0;   // [rad/s]

  Vec6 to_vector() const;
  static KinematicState from_vector(const Vec6& v);
  Pose pose() const { return {g, h}; }
  bool finite() const;
};

/// One discrete step x_{k+1} = x_k + T F(x_k, w_k) + w_k where the position
/// row of F averages the velocity vector at (h_k, s_k) and at the propagated
/// (h_k + T omega + w_h, s_k + T s_dot + w_s) (Tustin discretization).
KinematicState step(const KinematicState& x, const Vec6& noise, double dt);

/// Analytic linearization of `step` at (x, w = 0):
///   wrt_state = I + T dF/dx,  wrt_noise = I + T dF/dw.
struct MotionJacobians {
  Mat6 wrt_state;
  Mat6 wrt_noise;
};

MotionJacobians jacobians(const KinematicState& x, double dt);

}  // namespace polytrack
