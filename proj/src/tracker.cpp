#include "polytrack/tracker.hpp"

#include <cmath>

namespace polytrack {

std::optional<PoseObservation> static_estimates(const Dataset& dataset,
                                                const Vec2& g_prev,
                                                double min_displacement) {
  if (dataset.empty()) return std::nullopt;
  Vec2 mean = Vec2::Zero();
  for (const Vec2& y : dataset.points) mean += y;
  mean /= dataset.size();

  PoseObservation obs;
  obs.g = mean;
  const Vec2 d = mean - g_prev;
  if (d.norm() > min_displacement) {
    obs.heading = wrap_two_pi(std::atan2(d.y(), d.x()));
  }
  return obs;
}

Tracker::Tracker(const KinematicState& x0, const Mat6& p0,
                 const Mat6& process_noise, const Mat3& virtual_noise)
    : x_(x0), p_(p0), q_(process_noise), e_(virtual_noise) {}

void Tracker::predict(double dt) {
  if (dt == 0.0) return;
  const MotionJacobians j = jacobians(x_, dt);
  x_ = step(x_, Vec6::Zero(), dt);
  p_ = j.wrt_state * p_ * j.wrt_state.transpose() +
       j.wrt_noise * q_ * j.wrt_noise.transpose();
  p_ = 0.5 * (p_ + p_.transpose());
}

void Tracker::correct(const Vec3& pose_obs) {
  // C = [I3 0]: the pose occupies the leading state components
  const Mat3 s = p_.topLeftCorner<3, 3>() + e_;
  const Eigen::LDLT<Mat3> ldlt(s);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical, "correct: singular innovation covariance");
  }
  const Eigen::Matrix<double, 6, 3> gain =
      ldlt.solve(p_.leftCols<3>().transpose()).transpose();

  Vec3 innovation;
  innovation.head<2>() = pose_obs.head<2>() - x_.g;
  innovation[2] = wrap_pi(pose_obs[2] - x_.h);
  if (!innovation.allFinite() || !gain.allFinite()) {
    throw Error(ErrorCode::kNumerical, "correct: non-finite correction");
  }

  Vec6 xv = x_.to_vector() + gain * innovation;
  xv[2] = wrap_two_pi(xv[2]);
  x_ = KinematicState::from_vector(xv);

  p_ -= gain * p_.topRows<3>();
  p_ = 0.5 * (p_ + p_.transpose());
}

}  // namespace polytrack
