#include "polytrack/shaper.hpp"

#include "polytrack/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace polytrack {

ClassDistribution::ClassDistribution(std::size_t count)
    : logp_(count, -std::log(static_cast<double>(count))) {
  if (count == 0) {
    throw Error(ErrorCode::kParameter, "ClassDistribution: empty");
  }
}

ClassDistribution ClassDistribution::from_log_weights(std::vector<double> log_weights) {
  if (log_weights.empty()) {
    throw Error(ErrorCode::kParameter, "ClassDistribution: empty");
  }
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) {
    throw Error(ErrorCode::kNumerical, "ClassDistribution: weights sum to zero");
  }
  for (double& w : log_weights) w -= lse;
  return ClassDistribution(std::move(log_weights));
}

double ClassDistribution::prob(std::size_t i) const { return std::exp(logp_[i]); }

std::size_t ClassDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logp_.size(); ++i) {
    if (logp_[i] > logp_[best]) best = i;
  }
  return best;
}

ClassDistribution predict_class(const ClassDistribution& p, double delta) {
  const double count = static_cast<double>(p.size());
  if (!(delta > 1.0 / count && delta <= 1.0)) {
    throw Error(ErrorCode::kParameter, "predict_class: delta must lie in (1/I, 1]");
  }
  if (delta == 1.0) return p;
  const double coef = (count * delta - 1.0) / (count - 1.0);
  const double floor = (1.0 - delta) / (count - 1.0);
  std::vector<double> lw(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    lw[i] = std::log(coef * std::exp(p.log_prob(i)) + floor);
  }
  return ClassDistribution::from_log_weights(std::move(lw));
}

ClassUpdate update_class(const ClassDistribution& predicted,
                         const std::vector<double>& logliks) {
  if (logliks.size() != predicted.size()) {
    throw Error(ErrorCode::kParameter, "update_class: size mismatch");
  }
  std::vector<double> lw(predicted.size());
  bool any_finite = false;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    if (std::isnan(logliks[i])) {
      throw Error(ErrorCode::kNumerical, "update_class: NaN log-likelihood");
    }
    lw[i] = predicted.log_prob(i) + logliks[i];
    any_finite = any_finite || std::isfinite(lw[i]);
  }
  if (!any_finite) return {predicted, true};
  return {ClassDistribution::from_log_weights(std::move(lw)), false};
}

Dataset whiten_dataset(const Dataset& dataset, const Pose& pose) {
  const Mat2 ut = rotation(pose.h).transpose();
  Dataset out;
  out.scan_index = dataset.scan_index;
  out.points.reserve(dataset.points.size());
  for (const Vec2& y : dataset.points) out.points.push_back(ut * (y - pose.g));
  return out;
}

namespace {

// Per-class likelihoods write to disjoint slots, so the schedule cannot
// change the values; chunked threads keep the loop deterministic.
void for_each_class(std::size_t count, bool parallel,
                    const std::function<void(std::size_t)>& body) {
  if (!parallel || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

ShaperResult shaper_step(const Dataset& dataset, const Pose& pose,
                         const ClassDistribution& prior, const Dictionary& dict,
                         SensorKind kind, const Mat2& sensor_noise,
                         const Mat2& delta_r, double delta, bool parallel) {
  if (prior.size() != dict.size()) {
    throw Error(ErrorCode::kParameter, "shaper_step: prior size mismatch");
  }
  const Dataset whitened = whiten_dataset(dataset, pose);
  // rotate the noise covariance into the whitened frame (identity for
  // isotropic R), then inflate for the whitener uncertainty
  const Mat2 u = rotation(pose.h);
  const Mat2 r_plus = u.transpose() * sensor_noise * u + delta_r;

  std::vector<double> logliks(dict.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for_each_class(dict.size(), parallel, [&](std::size_t i) {
    try {
      logliks[i] = dataset_loglik(whitened, dict.entry(i), kind, r_plus);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  const ClassDistribution predicted = predict_class(prior, delta);
  ClassUpdate update = update_class(predicted, logliks);
  const std::size_t modal = update.posterior.argmax();

  return ShaperResult{.posterior = std::move(update.posterior),
                      .modal_class = modal,
                      .shape_world = dewhiten(dict.entry(modal).shape, pose),
                      .logliks = std::move(logliks),
                      .degenerate_update = update.degenerate};
}

}  // namespace polytrack
