#pragma once

#include "polytrack/common.hpp"
#include "polytrack/dictionary.hpp"
#include "polytrack/geometry.hpp"
#include "polytrack/scattering.hpp"

#include <vector>

namespace polytrack {

/// Probability vector over dictionary classes, maintained in log space and
/// kept normalized (log-sum-exp == 0 up to rounding).
class ClassDistribution {
 public:
  /// Uniform over `count` classes.
  explicit ClassDistribution(std::size_t count);
  /// Normalizes the given unnormalized log weights.
  static ClassDistribution from_log_weights(std::vector<double> log_weights);

  std::size_t size() const { return logp_.size(); }
  double log_prob(std::size_t i) const { return logp_[i]; }
  double prob(std::size_t i) const;
  const std::vector<double>& log_probs() const { return logp_; }
  /// Most probable class; ties break toward the lowest index.
  std::size_t argmax() const;

 private:
  explicit ClassDistribution(std::vector<double> logp) : logp_(std::move(logp)) {}
  std::vector<double> logp_;
};

/// Chapman-Kolmogorov prediction under the symmetric sticky kernel:
/// p'(i) = (I*delta - 1)/(I - 1) p(i) + (1 - delta)/(I - 1).
/// Requires delta in (1/I, 1] (ranking-preserving range); delta == 1 is the
/// identity.
ClassDistribution predict_class(const ClassDistribution& p, double delta);

struct ClassUpdate {
  ClassDistribution posterior;
  /// All log-likelihoods were -inf: the prior is kept and flagged.
  bool degenerate = false;
};

/// Bayes update with per-class log-likelihoods, normalized in log space.
ClassUpdate update_class(const ClassDistribution& predicted,
                         const std::vector<double>& logliks);

/// Inverse roto-translation of every measurement into the estimated
/// barycentric frame: y -> U(h)' (y - g).
Dataset whiten_dataset(const Dataset& dataset, const Pose& pose);

struct ShaperResult {
  ClassDistribution posterior;
  std::size_t modal_class = 0;
  ShapeVector shape_world;
  std::vector<double> logliks;
  bool degenerate_update = false;
};

/// One shaper cycle: whiten the dataset by the tracker pose, evaluate all
/// class dataset log-likelihoods under R+ = U(h)' R U(h) + delta_r (optionally
/// in parallel; results are identical either way), fuse with the predicted
/// class distribution, pick the modal class and dewhiten its shape vector to
/// the world frame.
ShaperResult shaper_step(const Dataset& dataset, const Pose& pose,
                         const ClassDistribution& prior, const Dictionary& dict,
                         SensorKind kind, const Mat2& sensor_noise,
                         const Mat2& delta_r, double delta, bool parallel);

}  // namespace polytrack
