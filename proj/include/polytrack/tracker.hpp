#pragma once

#include "polytrack/common.hpp"
#include "polytrack/motion.hpp"
#include "polytrack/scattering.hpp"

#include <optional>

namespace polytrack {

/// Static pose observation built from one dataset: the mean measurement and,
/// when the displacement from the previous position is observable, the
/// displacement heading.
struct PoseObservation {
  Vec2 g = Vec2::Zero();
  std::optional<double> heading;
};

/// Mean measurement plus displacement heading. Returns nullopt for an empty
/// dataset (caller skips the correction); the heading is nullopt when the
/// displacement from g_prev stays below min_displacement (caller reuses the
/// predicted heading).
std::optional<PoseObservation> static_estimates(const Dataset& dataset,
                                                const Vec2& g_prev,
                                                double min_displacement = 1e-3);

/// Extended Kalman tracker over the 2:1 motion model with a 3-D virtual pose
/// measurement (position + heading). Single-owner mutable state.
class Tracker {
 public:
  Tracker(const KinematicState& x0, const Mat6& p0, const Mat6& process_noise,
          const Mat3& virtual_noise);

  /// EKF prediction over dt seconds. dt == 0 is a no-op (two datasets taken
  /// at the same instant are processed as sequential corrections).
  void predict(double dt);

  /// Kalman correction on the virtual measurement [g, h]; the heading
  /// residual is wrapped to (-pi, pi] before the gain is applied.
  void correct(const Vec3& pose_obs);

  const KinematicState& state() const { return x_; }
  const Mat6& covariance() const { return p_; }
  const Mat6& process_noise() const { return q_; }
  const Mat3& virtual_noise() const { return e_; }

 private:
  KinematicState x_;
  Mat6 p_;
  Mat6 q_;
  Mat3 e_;
};

}  // namespace polytrack
