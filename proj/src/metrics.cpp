#include "polytrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace polytrack {

double npe(const Vec2& g_true, const Vec2& g_est, double rho_min) {
  if (rho_min <= 0.0) throw Error(ErrorCode::kParameter, "npe: rho_min must be > 0");
  return (g_true - g_est).norm() / rho_min;
}

namespace {

struct Box {
  double x0, y0, x1, y1;
  bool intersects(const Box& o) const {
    return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
  }
};

Box bounding_box(const ShapeVector& s) {
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& v : s.vertices()) {
    b.x0 = std::min(b.x0, v.x());
    b.y0 = std::min(b.y0, v.y());
    b.x1 = std::max(b.x1, v.x());
    b.y1 = std::max(b.y1, v.y());
  }
  return b;
}

// scanline rasterization: even-odd fill of cell centers, one bit per cell
class CellMask {
 public:
  CellMask(int nx, int ny) : nx_(nx), words_((static_cast<std::size_t>(nx) * ny + 63) / 64, 0) {}

  void fill(const ShapeVector& s, double x0, double y0, double cell, int ny) {
    const auto& v = s.vertices();
    const int n = s.size();
    std::vector<double> xs;
    for (int j = 0; j < ny; ++j) {
      const double yc = y0 + (j + 0.5) * cell;
      xs.clear();
      for (int i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        if ((p.y() > yc) != (q.y() > yc)) {
          xs.push_back(p.x() + (yc - p.y()) * (q.x() - p.x()) / (q.y() - p.y()));
        }
      }
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        // cells whose center lies in [xs[k], xs[k+1])
        const int i0 = std::max(0, static_cast<int>(std::ceil((xs[k] - x0) / cell - 0.5)));
        const int i1 = std::min(nx_ - 1,
                                static_cast<int>(std::floor((xs[k + 1] - x0) / cell - 0.5)));
        for (int i = i0; i <= i1; ++i) set(j, i);
      }
    }
  }

  static std::pair<std::int64_t, std::int64_t> intersection_union(const CellMask& a,
                                                                  const CellMask& b) {
    std::int64_t inter = 0, uni = 0;
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
      inter += __builtin_popcountll(a.words_[w] & b.words_[w]);
      uni += __builtin_popcountll(a.words_[w] | b.words_[w]);
    }
    return {inter, uni};
  }

 private:
  void set(int row, int col) {
    const std::size_t bit = static_cast<std::size_t>(row) * nx_ + col;
    words_[bit >> 6] |= 1ULL << (bit & 63);
  }
  int nx_;
  std::vector<std::uint64_t> words_;
};

}  // namespace

double iou(const ShapeVector& a, const ShapeVector& b, double cell_size) {
  double cell = cell_size;
  if (cell <= 0.0) cell = std::min(a.diameter(), b.diameter()) / 512.0;
  if (!(cell > 0.0)) {
    throw Error(ErrorCode::kDegenerateShape, "iou: degenerate shapes");
  }
  const Box ba = bounding_box(a);
  const Box bb = bounding_box(b);
  if (!ba.intersects(bb)) return 0.0;

  const double x0 = std::min(ba.x0, bb.x0) - 0.5 * cell;
  const double y0 = std::min(ba.y0, bb.y0) - 0.5 * cell;
  const double x1 = std::max(ba.x1, bb.x1) + 0.5 * cell;
  const double y1 = std::max(ba.y1, bb.y1) + 0.5 * cell;
  const int nx = static_cast<int>(std::ceil((x1 - x0) / cell));
  const int ny = static_cast<int>(std::ceil((y1 - y0) / cell));
  if (static_cast<std::int64_t>(nx) * ny > (1LL << 26)) {
    throw Error(ErrorCode::kParameter, "iou: raster grid too large; increase cell size");
  }

  CellMask ma(nx, ny), mb(nx, ny);
  ma.fill(a, x0, y0, cell, ny);
  mb.fill(b, x0, y0, cell, ny);
  const auto [inter, uni] = CellMask::intersection_union(ma, mb);
  if (uni == 0) {
    throw Error(ErrorCode::kDegenerateShape, "iou: shapes below raster resolution");
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double min_distance_to_contour(const Vec2& p, const ShapeVector& s) {
  const auto& v = s.vertices();
  const int n = s.size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % n]));
  }
  return best;
}

// arc-length-weighted mean of the point-to-contour distance, midpoint rule
double fps(const ShapeVector& from, const ShapeVector& to, int samples) {
  const auto& v = from.vertices();
  const int n = from.size();
  const double total = contour_length(from);
  double acc = 0.0;
  int edge = 0;
  double edge_start = 0.0;
  double edge_len = (v[1 % n] - v[0]).norm();
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) / samples * total;
    while (t > edge_start + edge_len && edge + 1 < n) {
      edge_start += edge_len;
      ++edge;
      edge_len = (v[(edge + 1) % n] - v[edge]).norm();
    }
    const double local = std::clamp((t - edge_start) / edge_len, 0.0, 1.0);
    const Vec2 p = (1.0 - local) * v[edge] + local * v[(edge + 1) % n];
    acc += min_distance_to_contour(p, to);
  }
  return acc / samples;
}

}  // namespace

double chamfer(const ShapeVector& a, const ShapeVector& b, int samples) {
  if (samples < 16) throw Error(ErrorCode::kParameter, "chamfer: samples must be >= 16");
  return 0.5 * (fps(a, b, samples) + fps(b, a, samples));
}

}  // namespace polytrack
