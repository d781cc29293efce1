#pragma once

#include "polytrack/common.hpp"
#include "polytrack/geometry.hpp"
#include "polytrack/scattering.hpp"

#include <cstdint>
#include <vector>

namespace polytrack {

struct DictionaryEntry;

/// Per-(measurement, edge) quadratic terms of the square completion with
/// A = V_i - V_{i+1} and B = y - V_i:
///   a = A' R^-1 A,  b = B' R^-1 A,  gauss_b = log N(B; 0, R).
struct EdgeQuadratics {
  double a = 0.0;
  double b = 0.0;
  double gauss_b = 0.0;
};

/// log(Phi(x2) - Phi(x1)) for x2 >= x1, stable in both tails. Plain CDF
/// differences underflow beyond ~8 sigma; this routine switches between a
/// midpoint expansion, scaled-erfc tail forms and the direct erf difference.
double log_normal_cdf_diff(double x1, double x2);

/// log N(x; 0, R); throws kParameter when R is not symmetric positive definite.
double log_gaussian2(const Vec2& x, const Mat2& R);

/// Exact single-edge log-likelihood (closed form of the Gaussian-segment
/// convolution). Edges shorter than 1e-9 * max(|v0|, |v1|, 1) fall back to
/// the point-object Gaussian centered at v0.
double edge_loglik(const Vec2& y, const Vec2& v0, const Vec2& v1, const Mat2& R);

/// Length-weighted mixture of single-edge likelihoods, log-sum-exp combined.
double contour_loglik(const Vec2& y, const EdgePartition& partition, const Mat2& R);

/// Uniform surface samples backing the Monte Carlo likelihood.
struct ParticleSet {
  std::vector<Vec2> particles;
  int source_id = -1;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(particles.size()); }
};

ParticleSet build_particles(const ShapeVector& shape, const Triangulation& tri,
                            int count, std::uint64_t seed);

/// Monte Carlo single-measurement log-likelihood: log mean_i N(y; z_i, R).
double mc_loglik(const Vec2& y, const ParticleSet& particles, const Mat2& R);

/// log Binomial(m; trials, success); m > trials gives -inf (a value, not an
/// error).
double binomial_logpmf(int m, const CardinalityParams& params);

/// Dataset log-likelihood: binomial cardinality factor plus the sum of
/// per-measurement terms (exact contour or Monte Carlo surface). The inflated
/// covariance R+ = R + Delta R is applied here by the caller. Requires the
/// entry's cardinality parameters for `kind` (and its particle cache for the
/// surface case) to be precomputed.
double dataset_loglik(const Dataset& dataset, const DictionaryEntry& entry,
                      SensorKind kind, const Mat2& r_plus);

/// Precomputed state for repeated exact-contour evaluations against one
/// (partition, R) pair; cost per call is O(n).
class ContourLikelihood {
 public:
  ContourLikelihood(const EdgePartition& partition, const Mat2& R);
  double operator()(const Vec2& y) const;

 private:
  struct EdgeTerm {
    Vec2 v0;
    Vec2 ria;       // R^-1 A
    double a;
    double sqrt_a;
    double log_w;
    bool degenerate;
  };
  std::vector<EdgeTerm> edges_;
  Mat2 r_inv_;
  double log_norm_;  // -log(2*pi) - 0.5*logdet(R)
};

/// Same for Monte Carlo evaluations against one (particle set, R) pair;
/// cost per call is O(N).
class SurfaceLikelihood {
 public:
  SurfaceLikelihood(const ParticleSet& particles, const Mat2& R);
  double operator()(const Vec2& y) const;

 private:
  const ParticleSet* particles_;
  double i00_, i01_, i11_;
  double log_norm_;
};

}  // namespace polytrack
