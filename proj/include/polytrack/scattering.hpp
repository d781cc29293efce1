#pragma once

#include "polytrack/common.hpp"
#include "polytrack/geometry.hpp"

#include <string>
#include <vector>

namespace polytrack {

enum class SensorKind { kContour, kSurface };

std::string to_string(SensorKind kind);

/// One simulated sensor: scattering kind, Gaussian noise covariance,
/// resolution (length for contour sensors, area for surface sensors),
/// lighting power and scan period.
struct SensorConfig {
  SensorKind kind = SensorKind::kContour;
  Mat2 noise = Mat2::Identity();  // R [m^2]
  double resolution = 1.0;        // r [m] or [m^2]
  double eta = 1.0;               // lighting power in [0,1]
  double period = 0.1;            // T [s]
};

/// Binomial cardinality model: trials = round(measure / resolution),
/// success = reflectivity * eta.
struct CardinalityParams {
  int trials = 0;
  double success = 0.0;

  double mean() const { return trials * success; }
  /// trials == 0 marks an object below the sensor resolution (not an error).
  bool below_resolution() const { return trials == 0; }
};

/// One sensor scan: a finite (possibly empty) set of planar measurements.
struct Dataset {
  std::vector<Vec2> points;
  int scan_index = 0;

  int size() const { return static_cast<int>(points.size()); }
  bool empty() const { return points.empty(); }
};

CardinalityParams cardinality_params(const ShapeVector& shape,
                                     const SensorConfig& sensor,
                                     double reflectivity);

int sample_cardinality(const CardinalityParams& params, Rng& rng);

/// Uniform point on the contour: edge by inverse-transform sampling on the
/// cumulative weights, then uniform along the segment.
Vec2 sample_contour_point(const EdgePartition& partition, Rng& rng);

/// Uniform point inside a triangle via the square-root barycentric map.
Vec2 sample_triangle_point(const Triangle& tri, Rng& rng);

/// Uniform point on the surface: triangle by area weight, then
/// sample_triangle_point.
Vec2 sample_surface_point(const Triangulation& tri, Rng& rng);

/// Full scan simulation: binomial cardinality, scattering points on the
/// world-frame shape, additive Gaussian noise through the Cholesky factor
/// of the sensor covariance.
Dataset generate_scan(const ShapeVector& shape_world, const SensorConfig& sensor,
                      const CardinalityParams& params, Rng& rng);

}  // namespace polytrack
