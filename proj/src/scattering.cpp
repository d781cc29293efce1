#include "polytrack/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace polytrack {

std::string to_string(SensorKind kind) {
  return kind == SensorKind::kContour ? "contour" : "surface";
}

CardinalityParams cardinality_params(const ShapeVector& shape,
                                     const SensorConfig& sensor,
                                     double reflectivity) {
  if (sensor.resolution <= 0.0) {
    throw Error(ErrorCode::kParameter, "cardinality_params: resolution must be > 0");
  }
  if (reflectivity < 0.0 || reflectivity > 1.0 || sensor.eta < 0.0 || sensor.eta > 1.0) {
    throw Error(ErrorCode::kParameter, "cardinality_params: reflectivity/eta outside [0,1]");
  }
  const double measure = sensor.kind == SensorKind::kContour
                             ? contour_length(shape)
                             : std::abs(barycenter_area(shape).area);
  CardinalityParams p;
  p.trials = static_cast<int>(std::llround(measure / sensor.resolution));
  p.success = reflectivity * sensor.eta;
  return p;
}

int sample_cardinality(const CardinalityParams& params, Rng& rng) {
  return rng.binomial(params.trials, params.success);
}

namespace {

// index of the first cumulative weight >= u
std::size_t pick_index(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

Vec2 sample_contour_point(const EdgePartition& partition, Rng& rng) {
  const std::size_t i = pick_index(partition.cumulative, rng.uniform01());
  const Edge& e = partition.edges[i];
  const double t = rng.uniform01();
  return (1.0 - t) * e.a + t * e.b;
}

Vec2 sample_triangle_point(const Triangle& tri, Rng& rng) {
  const double a1 = rng.uniform01();
  const double a2 = rng.uniform01();
  const double r = std::sqrt(a1);
  return (1.0 - r) * tri.a + r * (1.0 - a2) * tri.b + r * a2 * tri.c;
}

Vec2 sample_surface_point(const Triangulation& tri, Rng& rng) {
  const std::size_t i = pick_index(tri.cumulative, rng.uniform01());
  return sample_triangle_point(tri.triangles[i], rng);
}

Dataset generate_scan(const ShapeVector& shape_world, const SensorConfig& sensor,
                      const CardinalityParams& params, Rng& rng) {
  Eigen::LLT<Mat2> llt(sensor.noise);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kParameter, "generate_scan: noise covariance not SPD");
  }
  const Mat2 chol = llt.matrixL();

  const int m = sample_cardinality(params, rng);
  Dataset out;
  out.points.reserve(static_cast<std::size_t>(m));
  if (sensor.kind == SensorKind::kContour) {
    const EdgePartition part = edge_partition(shape_world);
    for (int j = 0; j < m; ++j) {
      out.points.push_back(sample_contour_point(part, rng) + chol * rng.gaussian2());
    }
  } else {
    const Triangulation tri = triangulate(shape_world);
    for (int j = 0; j < m; ++j) {
      out.points.push_back(sample_surface_point(tri, rng) + chol * rng.gaussian2());
    }
  }
  return out;
}

}  // namespace polytrack
