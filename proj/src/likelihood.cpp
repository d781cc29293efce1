#include "polytrack/likelihood.hpp"

#include "polytrack/dictionary.hpp"

#include <cmath>
#include <limits>

namespace polytrack {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kHalfLog2Pi = 0.5 * kLog2Pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrtPi = 1.7724538509055160273;
const double kNegInf = -std::numeric_limits<double>::infinity();

// exp(s^2) erfc(s) for s >= 0. erfc alone underflows near s ~ 27; past the
// exp(s^2) overflow boundary the asymptotic series is accurate to ~1e-13.
double erfcx_positive(double s) {
  if (s < 25.0) return std::exp(s * s) * std::erfc(s);
  const double q = 1.0 / (2.0 * s * s);
  const double series =
      1.0 + q * (-1.0 + q * (3.0 + q * (-15.0 + q * (105.0 + q * -945.0))));
  return series / (s * kSqrtPi);
}

struct SpdInverse {
  Mat2 inv;
  double logdet;
};

SpdInverse invert_spd(const Mat2& R) {
  const double asym = std::abs(R(0, 1) - R(1, 0));
  const double scale = R.cwiseAbs().maxCoeff();
  const double det = R(0, 0) * R(1, 1) - R(0, 1) * R(1, 0);
  if (asym > 1e-9 * scale || det <= 0.0 || R(0, 0) <= 0.0) {
    throw Error(ErrorCode::kParameter, "covariance matrix is not SPD");
  }
  SpdInverse out;
  out.inv << R(1, 1) / det, -R(0, 1) / det, -R(1, 0) / det, R(0, 0) / det;
  out.logdet = std::log(det);
  return out;
}

double quad_form(const Mat2& inv, const Vec2& x) {
  return inv(0, 0) * x.x() * x.x() + 2.0 * inv(0, 1) * x.x() * x.y() +
         inv(1, 1) * x.y() * x.y();
}

double edge_epsilon(const Vec2& v0, const Vec2& v1) {
  return 1e-9 * std::max({v0.norm(), v1.norm(), 1.0});
}

}  // namespace

double log_normal_cdf_diff(double x1, double x2) {
  const double delta = x2 - x1;
  if (!(delta > 0.0)) return kNegInf;
  const double xm = 0.5 * (x1 + x2);
  if (delta * std::max(1.0, std::abs(xm)) < 1e-3) {
    // midpoint expansion of the pdf integral; relative error O(delta^4 xm^4)
    const double corr = std::log1p((xm * xm - 1.0) * delta * delta / 24.0);
    return -kHalfLog2Pi - 0.5 * xm * xm + std::log(delta) + corr;
  }
  if (x1 >= 0.0) {
    const double s1 = x1 * kInvSqrt2;
    const double s2 = x2 * kInvSqrt2;
    const double d =
        erfcx_positive(s1) - std::exp(s1 * s1 - s2 * s2) * erfcx_positive(s2);
    if (!(d > 0.0)) return kNegInf;
    return -s1 * s1 + std::log(0.5 * d);
  }
  if (x2 <= 0.0) return log_normal_cdf_diff(-x2, -x1);
  // interval straddles zero: the erf values have opposite signs, no cancellation
  return std::log(0.5 * (std::erf(x2 * kInvSqrt2) - std::erf(x1 * kInvSqrt2)));
}

double log_gaussian2(const Vec2& x, const Mat2& R) {
  const SpdInverse g = invert_spd(R);
  return -0.5 * quad_form(g.inv, x) - kLog2Pi - 0.5 * g.logdet;
}

namespace {

// shared core: quadratics -> log of the closed-form edge likelihood
double edge_loglik_from_quadratics(const EdgeQuadratics& q) {
  // N(B;0,R) / N(b/sqrt(a);0,1) * [Phi((a+b)/sqrt(a)) - Phi(b/sqrt(a))] / sqrt(a),
  // assembled in log space: the plain ratio overflows for distant measurements.
  const double sqrt_a = std::sqrt(q.a);
  const double x1 = q.b / sqrt_a;
  const double x2 = sqrt_a + x1;
  return q.gauss_b + 0.5 * q.b * q.b / q.a + kHalfLog2Pi - 0.5 * std::log(q.a) +
         log_normal_cdf_diff(x1, x2);
}

}  // namespace

double edge_loglik(const Vec2& y, const Vec2& v0, const Vec2& v1, const Mat2& R) {
  const SpdInverse g = invert_spd(R);
  const Vec2 b_vec = y - v0;
  const double gauss_b = -0.5 * quad_form(g.inv, b_vec) - kLog2Pi - 0.5 * g.logdet;
  if ((v1 - v0).norm() < edge_epsilon(v0, v1)) {
    return gauss_b;  // point-object limit: Gaussian centered at v0
  }
  const Vec2 a_vec = v0 - v1;
  EdgeQuadratics q;
  q.a = a_vec.dot(g.inv * a_vec);
  q.b = b_vec.dot(g.inv * a_vec);
  q.gauss_b = gauss_b;
  return edge_loglik_from_quadratics(q);
}

ContourLikelihood::ContourLikelihood(const EdgePartition& partition, const Mat2& R) {
  const SpdInverse g = invert_spd(R);
  r_inv_ = g.inv;
  log_norm_ = -kLog2Pi - 0.5 * g.logdet;
  edges_.reserve(partition.edges.size());
  for (std::size_t i = 0; i < partition.edges.size(); ++i) {
    const Edge& e = partition.edges[i];
    EdgeTerm term;
    term.v0 = e.a;
    term.log_w = std::log(partition.weights[i]);
    term.degenerate = (e.b - e.a).norm() < edge_epsilon(e.a, e.b);
    if (!term.degenerate) {
      const Vec2 a_vec = e.a - e.b;
      term.ria = r_inv_ * a_vec;
      term.a = a_vec.dot(term.ria);
      term.sqrt_a = std::sqrt(term.a);
    }
    edges_.push_back(term);
  }
}

double ContourLikelihood::operator()(const Vec2& y) const {
  LogSumExp acc;
  for (const EdgeTerm& t : edges_) {
    const Vec2 b_vec = y - t.v0;
    const double gauss_b = -0.5 * quad_form(r_inv_, b_vec) + log_norm_;
    double ll;
    if (t.degenerate) {
      ll = gauss_b;
    } else {
      const double b = b_vec.dot(t.ria);
      const double x1 = b / t.sqrt_a;
      ll = gauss_b + 0.5 * b * b / t.a + kHalfLog2Pi - std::log(t.sqrt_a) +
           log_normal_cdf_diff(x1, t.sqrt_a + x1);
    }
    acc.add(t.log_w + ll);
  }
  return acc.value();
}

double contour_loglik(const Vec2& y, const EdgePartition& partition, const Mat2& R) {
  return ContourLikelihood(partition, R)(y);
}

ParticleSet build_particles(const ShapeVector& shape, const Triangulation& tri,
                            int count, std::uint64_t seed) {
  if (count < 1) {
    throw Error(ErrorCode::kParameter, "build_particles: count must be >= 1");
  }
  (void)shape;  // particles are fully determined by the triangulation
  ParticleSet out;
  out.seed = seed;
  out.particles.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    out.particles.push_back(sample_surface_point(tri, rng));
  }
  return out;
}

SurfaceLikelihood::SurfaceLikelihood(const ParticleSet& particles, const Mat2& R)
    : particles_(&particles) {
  if (particles.size() < 1) {
    throw Error(ErrorCode::kPrecondition, "mc_loglik: empty particle set");
  }
  const SpdInverse g = invert_spd(R);
  i00_ = g.inv(0, 0);
  i01_ = g.inv(0, 1);
  i11_ = g.inv(1, 1);
  log_norm_ = -kLog2Pi - 0.5 * g.logdet - std::log(particles.size());
}

double SurfaceLikelihood::operator()(const Vec2& y) const {
  LogSumExp acc;
  for (const Vec2& z : particles_->particles) {
    const double dx = y.x() - z.x();
    const double dy = y.y() - z.y();
    acc.add(-0.5 * (i00_ * dx * dx + 2.0 * i01_ * dx * dy + i11_ * dy * dy));
  }
  return log_norm_ + acc.value();
}

double mc_loglik(const Vec2& y, const ParticleSet& particles, const Mat2& R) {
  return SurfaceLikelihood(particles, R)(y);
}

double binomial_logpmf(int m, const CardinalityParams& params) {
  const int mu = params.trials;
  const double p = params.success;
  if (m < 0 || m > mu) return kNegInf;
  if (p <= 0.0) return m == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return m == mu ? 0.0 : kNegInf;
  const double log_choose = std::lgamma(mu + 1.0) - std::lgamma(m + 1.0) -
                            std::lgamma(mu - m + 1.0);
  return log_choose + m * std::log(p) + (mu - m) * std::log1p(-p);
}

double dataset_loglik(const Dataset& dataset, const DictionaryEntry& entry,
                      SensorKind kind, const Mat2& r_plus) {
  const CardinalityParams& cp = entry.cardinality(kind);
  double ll = binomial_logpmf(dataset.size(), cp);
  if (dataset.empty() || std::isinf(ll)) return ll;
  if (kind == SensorKind::kContour) {
    const ContourLikelihood eval(entry.partition, r_plus);
    for (const Vec2& y : dataset.points) ll += eval(y);
  } else {
    if (!entry.particles) {
      throw Error(ErrorCode::kPrecondition,
                  "dataset_loglik: no particle set cached for entry " + entry.name);
    }
    const SurfaceLikelihood eval(*entry.particles, r_plus);
    for (const Vec2& y : dataset.points) ll += eval(y);
  }
  return ll;
}

}  // namespace polytrack
