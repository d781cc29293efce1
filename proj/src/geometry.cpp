#include "polytrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace polytrack {

namespace {

constexpr double kCollinearTolRel = 1e-9;   // x shape diameter
constexpr double kBarycenterTol = 1e-6;     // [m]
constexpr double kSymmetryTolRel = 1e-6;    // x shape diameter
constexpr double kAreaTol = 1e-12;          // [m^2]

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0));
}

double signed_area(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    acc += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * acc;
}

bool strictly_inside_triangle(const Vec2& p, const Vec2& a, const Vec2& b,
                              const Vec2& c, double eps) {
  const double d1 = cross(a, b, p);
  const double d2 = cross(b, c, p);
  const double d3 = cross(c, a, p);
  return d1 > eps && d2 > eps && d3 > eps;
}

}  // namespace

Mat2 rotation(double h) {
  const double c = std::cos(h), s = std::sin(h);
  Mat2 u;
  u << c, -s, s, c;
  return u;
}

ShapeVector::ShapeVector(std::vector<Vec2> vertices, Frame frame)
    : vertices_(std::move(vertices)), frame_(frame) {
  if (vertices_.size() < 3) {
    throw Error(ErrorCode::kInvalidShape, "shape needs at least 3 vertices");
  }
}

double ShapeVector::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      best = std::max(best, (vertices_[i] - vertices_[j]).norm());
    }
  }
  return best;
}

ShapeVector normalized_ccw(ShapeVector shape) {
  std::vector<Vec2> v = shape.vertices();
  if (signed_area(v) < 0.0) {
    std::reverse(v.begin() + 1, v.end());  // keep the leading (axis) vertex
  }
  return ShapeVector(std::move(v), shape.frame());
}

std::string ValidityReport::describe() const {
  std::ostringstream os;
  auto line = [&os](const char* name, const ValidityCheck& c) {
    os << name << (c.pass ? ": pass" : ": FAIL") << " (defect " << c.defect << ")\n";
  };
  line("distinct", distinct);
  line("non_collinear", non_collinear);
  line("simple", simple);
  line("ccw", ccw);
  if (barycentered) line("barycentered", *barycentered);
  if (symmetric) line("symmetric", *symmetric);
  return os.str();
}

ValidityReport validate(const ShapeVector& shape) {
  const auto& v = shape.vertices();
  const int n = shape.size();
  const double diam = shape.diameter();
  ValidityReport rep;

  double min_pair = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      min_pair = std::min(min_pair, (v[i] - v[j]).norm());
    }
  }
  rep.distinct = {min_pair > kCollinearTolRel * diam, min_pair};

  // perpendicular deviation of the middle vertex from the chord, wrap included
  double min_dev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    const Vec2& c = v[(i + 2) % n];
    const double chord = (c - a).norm();
    const double dev = chord > 0.0 ? std::abs(cross(a, c, b)) / chord
                                   : std::numeric_limits<double>::infinity();
    min_dev = std::min(min_dev, dev);
  }
  rep.non_collinear = {min_dev > kCollinearTolRel * diam, min_dev};

  int crossings = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) ++crossings;
    }
  }
  rep.simple = {crossings == 0, static_cast<double>(crossings)};

  const double area = signed_area(v);
  rep.ccw = {area > kAreaTol, area};

  if (shape.frame() == Frame::kBarycentric) {
    if (std::abs(area) > kAreaTol) {
      const double g_norm = barycenter_area(shape).g.norm();
      rep.barycentered = ValidityCheck{g_norm <= kBarycenterTol, g_norm};
    } else {
      rep.barycentered = ValidityCheck{false, std::numeric_limits<double>::infinity()};
    }

    // Vertex-wise surrogate of the parametric mirror condition: V_j matches
    // diag(1,-1) V_{n+2-j} under index wrap (V_1 sits on the symmetry axis).
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const Vec2& m = v[(n - j) % n];
      worst = std::max(worst, (v[j] - Vec2(m.x(), -m.y())).norm());
    }
    rep.symmetric = {worst <= kSymmetryTolRel * diam, worst};
  }
  return rep;
}

Vec2 interpolate(double alpha, const ShapeVector& shape) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kDomain, "interpolate: alpha outside [0,1]");
  }
  const int n = shape.size();
  const double s = alpha * n;
  // snap to vertices so alpha = i/n returns V_{i+1} exactly
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-12 * n) {
    return shape.vertex(static_cast<int>(r) % n);
  }
  const int i = std::min(static_cast<int>(s), n - 1);
  const double t = s - i;
  return (1.0 - t) * shape.vertex(i) + t * shape.vertex((i + 1) % n);
}

BarycenterArea barycenter_area(const ShapeVector& shape) {
  const auto& v = shape.vertices();
  const int n = shape.size();
  double area = 0.0;
  Vec2 moment = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    const double ai = 0.5 * (p.x() * q.y() - q.x() * p.y());
    area += ai;
    moment += ai * (p + q) / 3.0;
  }
  if (std::abs(area) < kAreaTol) {
    throw Error(ErrorCode::kDegenerateShape, "barycenter_area: degenerate shape");
  }
  return {moment / area, area};
}

double contour_length(const ShapeVector& shape) {
  const auto& v = shape.vertices();
  const int n = shape.size();
  double len = 0.0;
  for (int i = 0; i < n; ++i) len += (v[(i + 1) % n] - v[i]).norm();
  return len;
}

EdgePartition edge_partition(const ShapeVector& shape) {
  const auto& v = shape.vertices();
  const int n = shape.size();
  EdgePartition part;
  part.edges.reserve(n);
  part.lengths.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    const double len = (b - a).norm();
    if (len <= 0.0) {
      throw Error(ErrorCode::kInvalidShape, "edge_partition: zero-length edge");
    }
    part.edges.push_back({a, b});
    part.lengths.push_back(len);
    part.total_length += len;
  }
  part.weights.resize(n);
  part.cumulative.resize(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    part.weights[i] = part.lengths[i] / part.total_length;
    acc += part.weights[i];
    part.cumulative[i] = acc;
  }
  part.cumulative.back() = 1.0;
  return part;
}

Triangulation triangulate(const ShapeVector& shape) {
  ValidityReport rep = validate(shape);
  if (!rep.simple.pass || !rep.distinct.pass) {
    throw Error(ErrorCode::kInvalidShape, "triangulate: polygon is not simple");
  }
  const auto& v = shape.vertices();
  const int n = shape.size();
  const double diam = shape.diameter();
  const double eps = 1e-12 * diam * diam;

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (signed_area(v) < 0.0) std::reverse(idx.begin(), idx.end());

  Triangulation tri;
  tri.triangles.reserve(n - 2);

  auto emit = [&](int ia, int ib, int ic) {
    tri.indices.push_back({ia, ib, ic});
    tri.triangles.push_back({v[ia], v[ib], v[ic]});
  };

  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    auto find_ear = [&](double convex_floor) {
      for (int i = 0; i < m; ++i) {
        const Vec2& a = v[idx[(i + m - 1) % m]];
        const Vec2& b = v[idx[i]];
        const Vec2& c = v[idx[(i + 1) % m]];
        if (cross(a, b, c) <= convex_floor) continue;  // reflex or flat corner
        bool contains = false;
        for (int j = 0; j < m && !contains; ++j) {
          if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
          contains = strictly_inside_triangle(v[idx[j]], a, b, c, eps);
        }
        if (!contains) return i;
      }
      return -1;
    };
    int ear = find_ear(eps);
    // clipping can leave a zero-area remainder (all collinear); accept flat
    // corners then, which emits degenerate triangles of zero weight
    if (ear < 0) ear = find_ear(-eps);
    if (ear < 0) {
      throw Error(ErrorCode::kInvalidShape, "triangulate: no ear found");
    }
    emit(idx[(ear + m - 1) % m], idx[ear], idx[(ear + 1) % m]);
    idx.erase(idx.begin() + ear);
  }
  emit(idx[0], idx[1], idx[2]);

  tri.areas.resize(tri.triangles.size());
  for (std::size_t i = 0; i < tri.triangles.size(); ++i) {
    const Triangle& t = tri.triangles[i];
    tri.areas[i] = 0.5 * std::abs(cross(t.a, t.b, t.c));
    tri.total_area += tri.areas[i];
  }
  tri.weights.resize(tri.areas.size());
  tri.cumulative.resize(tri.areas.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < tri.areas.size(); ++i) {
    tri.weights[i] = tri.areas[i] / tri.total_area;
    acc += tri.weights[i];
    tri.cumulative[i] = acc;
  }
  tri.cumulative.back() = 1.0;
  return tri;
}

ShapeVector dewhiten(const ShapeVector& shape, const Pose& pose) {
  const Mat2 u = rotation(pose.h);
  std::vector<Vec2> out;
  out.reserve(shape.vertices().size());
  for (const Vec2& p : shape.vertices()) out.push_back(u * p + pose.g);
  return ShapeVector(std::move(out), Frame::kWorld);
}

ShapeVector whiten(const ShapeVector& shape, const Pose& pose) {
  const Mat2 ut = rotation(pose.h).transpose();
  std::vector<Vec2> out;
  out.reserve(shape.vertices().size());
  for (const Vec2& p : shape.vertices()) out.push_back(ut * (p - pose.g));
  return ShapeVector(std::move(out), Frame::kBarycentric);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const Vec2& p, const ShapeVector& shape) {
  const auto& v = shape.vertices();
  const int n = shape.size();
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y() > p.y()) != (v[j].y() > p.y())) {
      const double x = v[i].x() + (p.y() - v[i].y()) * (v[j].x() - v[i].x()) /
                                      (v[j].y() - v[i].y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double outer_radius(const ShapeVector& shape) {
  double best = 0.0;
  for (const Vec2& p : shape.vertices()) best = std::max(best, p.norm());
  return best;
}

double inner_radius(const ShapeVector& shape) {
  const auto& v = shape.vertices();
  const int n = shape.size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(Vec2::Zero(), v[i], v[(i + 1) % n]));
  }
  return best;
}

ShapeVector decimate(const ShapeVector& shape, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::kDomain, "decimate: negative tolerance");
  const auto& v = shape.vertices();
  const int n = shape.size();
  if (n == 3) return shape;

  std::vector<bool> keep(n, false);

  const std::function<void(const std::vector<int>&, int, int)> rdp =
      [&](const std::vector<int>& chain, int lo, int hi) {
        if (hi - lo < 2) return;
        const Vec2& a = v[chain[lo]];
        const Vec2& b = v[chain[hi]];
        double dmax = -1.0;
        int split = -1;
        for (int i = lo + 1; i < hi; ++i) {
          const double d = point_segment_distance(v[chain[i]], a, b);
          if (d > dmax) {
            dmax = d;
            split = i;
          }
        }
        if (dmax > tol) {
          keep[chain[split]] = true;
          rdp(chain, lo, split);
          rdp(chain, split, hi);
        }
      };

  const ValidityReport in_rep = validate(shape);
  if (in_rep.symmetric && in_rep.symmetric->pass) {
    // Decimate the upper half-chain only and mirror the kept set; running RDP
    // independently on both halves can break symmetry on distance ties.
    const int half = n / 2;  // on the axis for even n, start of a pair for odd n
    keep[0] = keep[half] = true;
    std::vector<int> chain(half + 1);
    for (int i = 0; i <= half; ++i) chain[i] = i;
    rdp(chain, 0, half);
    for (int j = 1; j < n; ++j) {
      if (keep[j]) keep[(n - j) % n] = true;
    }
  } else {
    // anchor the closed chain at vertex 0 and the vertex farthest from it
    int far = 1;
    for (int i = 2; i < n; ++i) {
      if ((v[i] - v[0]).norm() > (v[far] - v[0]).norm()) far = i;
    }
    keep[0] = keep[far] = true;
    std::vector<int> chain_a, chain_b;
    for (int i = 0; i <= far; ++i) chain_a.push_back(i);
    for (int i = far; i < n; ++i) chain_b.push_back(i);
    chain_b.push_back(0);
    rdp(chain_a, 0, static_cast<int>(chain_a.size()) - 1);
    rdp(chain_b, 0, static_cast<int>(chain_b.size()) - 1);
  }

  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(v[i]);
  }
  if (out.size() < 3) {
    throw Error(ErrorCode::kDecimationFailed, "decimate: fewer than 3 vertices left");
  }
  ShapeVector result(std::move(out), shape.frame());
  const ValidityReport rep = validate(result);
  const bool symmetry_ok = !rep.symmetric || rep.symmetric->pass;
  // barycenter drift is inherent to vertex removal, so it is not enforced here
  if (!rep.structurally_valid() || !symmetry_ok) {
    throw Error(ErrorCode::kDecimationFailed,
                "decimate: result lost validity\n" + rep.describe());
  }
  return result;
}

}  // namespace polytrack
