#include "polytrack/motion.hpp"

#include <cmath>

namespace polytrack {

Vec6 KinematicState::to_vector() const {
  Vec6 v;
  v << g.x(), g.y(), h, s, s_dot, omega;
  return v;
}

KinematicState KinematicState::from_vector(const Vec6& v) {
  KinematicState x;
  x.g = v.head<2>();
  x.h = v[2];
  x.s = v[3];
  x.s_dot = v[4];
  x.omega = v[5];
  return x;
}

bool KinematicState::finite() const {
  return to_vector().allFinite();
}

KinematicState step(const KinematicState& x, const Vec6& noise, double dt) {
  if (dt <= 0.0) throw Error(ErrorCode::kParameter, "step: dt must be > 0");
  const double h_next = x.h + dt * x.omega + noise[2];
  const double s_next = x.s + dt * x.s_dot + noise[3];
  const Vec2 vel_avg =
      0.5 * (s_next * Vec2(std::cos(h_next), std::sin(h_next)) +
             x.s * Vec2(std::cos(x.h), std::sin(x.h)));
  KinematicState out;
  out.g = x.g + dt * vel_avg + noise.head<2>();
  out.h = wrap_two_pi(h_next);
  out.s = s_next;
  out.s_dot = x.s_dot + noise[4];
  out.omega = x.omega + noise[5];
  return out;
}

MotionJacobians jacobians(const KinematicState& x, double dt) {
  if (dt <= 0.0) throw Error(ErrorCode::kParameter, "jacobians: dt must be > 0");
  const double h_next = x.h + dt * x.omega;
  const double s_next = x.s + dt * x.s_dot;
  const double c0 = std::cos(x.h), s0 = std::sin(x.h);
  const double c1 = std::cos(h_next), s1 = std::sin(h_next);

  const Vec2 df_dh = 0.5 * (s_next * Vec2(-s1, c1) + x.s * Vec2(-s0, c0));
  const Vec2 df_ds = 0.5 * Vec2(c1 + c0, s1 + s0);
  const Vec2 df_dsdot = 0.5 * dt * Vec2(c1, s1);
  const Vec2 df_domega = 0.5 * dt * s_next * Vec2(-s1, c1);

  MotionJacobians j;
  j.wrt_state = Mat6::Identity();
  j.wrt_state.block<2, 1>(0, 2) = dt * df_dh;
  j.wrt_state.block<2, 1>(0, 3) = dt * df_ds;
  j.wrt_state.block<2, 1>(0, 4) = dt * df_dsdot;
  j.wrt_state.block<2, 1>(0, 5) = dt * df_domega;
  j.wrt_state(2, 5) = dt;
  j.wrt_state(3, 4) = dt;

  // the additive noise term contributes the identity; the heading and speed
  // noises additionally enter the Tustin average
  j.wrt_noise = Mat6::Identity();
  j.wrt_noise.block<2, 1>(0, 2) = dt * 0.5 * s_next * Vec2(-s1, c1);
  j.wrt_noise.block<2, 1>(0, 3) = dt * 0.5 * Vec2(c1, s1);
  return j;
}

}  // namespace polytrack
