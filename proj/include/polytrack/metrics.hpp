#pragma once

#include "polytrack/common.hpp"
#include "polytrack/geometry.hpp"

namespace polytrack {

/// Per-scan estimation scores.
struct ScanScore {
  int scan = 0;
  double npe = 0.0;  // dimensionless
  double iou = 0.0;  // in [0, 1]
  double chd = 0.0;  // [m]
};

/// Normalized position error: |g_true - g_est| / rho_min.
double npe(const Vec2& g_true, const Vec2& g_est, double rho_min);

/// Intersection over union of the two polygon surfaces, rasterized over the
/// joint bounding box. cell_size <= 0 picks min(diameter)/512. Throws on
/// degenerate rasterizations (both shapes below one cell).
double iou(const ShapeVector& a, const ShapeVector& b, double cell_size = 0.0);

/// Symmetric Chamfer distance between the two contours, each direction
/// approximated with `samples` arc-length-uniform points against the other
/// polygon's segments. Requires samples >= 16.
double chamfer(const ShapeVector& a, const ShapeVector& b, int samples = 1024);

}  // namespace polytrack
