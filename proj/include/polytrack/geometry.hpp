#pragma once

#include "polytrack/common.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace polytrack {

enum class Frame { kBarycentric, kWorld };

/// Planar position plus heading angle in [0, 2*pi).
struct Pose {
  Vec2 g = Vec2::Zero();
  double h = 0.0;
};

/// Counter-clockwise rotation by h.
Mat2 rotation(double h);

/// Closed polygonal chain (linear spline) defined by its ordered vertices.
///
/// A barycentric-frame shape is expected to be centered at the origin, listed
/// counter-clockwise, mirror-symmetric about the horizontal axis and simple;
/// `validate` measures each property. World-frame shapes only carry the
/// structural requirements (distinct vertices, no collinear triples, simple,
/// counter-clockwise).
class ShapeVector {
 public:
  ShapeVector(std::vector<Vec2> vertices, Frame frame);

  int size() const { return static_cast<int>(vertices_.size()); }
  const Vec2& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  Frame frame() const { return frame_; }

  /// Largest pairwise vertex distance; scale for relative tolerances.
  double diameter() const;

 private:
  std::vector<Vec2> vertices_;
  Frame frame_;
};

/// Reverses the vertex order (keeping the first vertex first) when the signed
/// area is negative, so downstream code can assume counter-clockwise input.
ShapeVector normalized_ccw(ShapeVector shape);

struct Edge {
  Vec2 a;
  Vec2 b;
};

/// Contour split into edges with normalized length weights; `cumulative`
/// holds the weight prefix sums used by inverse-transform sampling.
struct EdgePartition {
  std::vector<Edge> edges;
  std::vector<double> lengths;
  std::vector<double> weights;
  std::vector<double> cumulative;
  double total_length = 0.0;
};

struct Triangle {
  Vec2 a;
  Vec2 b;
  Vec2 c;
};

/// Ear-clipping triangulation: n-2 triangles with disjoint interiors whose
/// absolute areas sum to the polygon area. `indices` trace each corner back
/// to a shape vertex.
struct Triangulation {
  std::vector<Triangle> triangles;
  std::vector<std::array<int, 3>> indices;
  std::vector<double> areas;
  std::vector<double> weights;
  std::vector<double> cumulative;
  double total_area = 0.0;
};

struct ValidityCheck {
  bool pass = true;
  double defect = 0.0;  // measured magnitude of the property (see validate)
};

/// Per-property report. Defects are: smallest pairwise vertex distance
/// (distinct), smallest perpendicular deviation over consecutive triples
/// (non_collinear), number of crossing segment pairs (simple), signed area
/// (ccw), barycenter norm (barycentered), largest mirrored-vertex mismatch
/// (symmetric). The last two apply to barycentric-frame shapes only.
struct ValidityReport {
  ValidityCheck distinct;
  ValidityCheck non_collinear;
  ValidityCheck simple;
  ValidityCheck ccw;
  std::optional<ValidityCheck> barycentered;
  std::optional<ValidityCheck> symmetric;

  bool structurally_valid() const {
    return distinct.pass && non_collinear.pass && simple.pass && ccw.pass;
  }
  /// Structural checks plus barycenter; asymmetry is reported, not forbidden.
  bool valid() const {
    return structurally_valid() && (!barycentered || barycentered->pass);
  }
  std::string describe() const;
};

ValidityReport validate(const ShapeVector& shape);

/// Point on the spline at curve parameter alpha in [0, 1]; alpha in
/// [(i-1)/n, i/n] maps linearly onto the segment V_i -> V_{i+1}.
Vec2 interpolate(double alpha, const ShapeVector& shape);

struct BarycenterArea {
  Vec2 g;
  double area;  // signed; positive for counter-clockwise chains
};

/// Shoelace signed area and area barycenter (origin-fan triangle mixture).
BarycenterArea barycenter_area(const ShapeVector& shape);

double contour_length(const ShapeVector& shape);

EdgePartition edge_partition(const ShapeVector& shape);

Triangulation triangulate(const ShapeVector& shape);

/// Places a barycentric shape at a world pose: V -> U(h) V + g.
ShapeVector dewhiten(const ShapeVector& shape, const Pose& pose);

/// Inverse of dewhiten: V -> U(h)' (V - g).
ShapeVector whiten(const ShapeVector& shape, const Pose& pose);

/// Ramer-Douglas-Peucker simplification on the closed chain. The output
/// vertex set is a subsequence of the input and every removed vertex lies
/// within `tol` of the simplified contour. Throws kDecimationFailed when the
/// result loses simplicity, distinctness or (barycentric frame) symmetry.
ShapeVector decimate(const ShapeVector& shape, double tol);

// Small geometric utilities shared by metrics, sampling and tests.
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
bool point_in_polygon(const Vec2& p, const ShapeVector& shape);
/// Max / min distance from the origin to the contour of a barycentric shape.
double outer_radius(const ShapeVector& shape);
double inner_radius(const ShapeVector& shape);

}  // namespace polytrack
