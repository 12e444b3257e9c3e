#include "curator/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include "curator/error.hpp"

namespace curator::geometry {

namespace {

// Points closer than this are treated as the same crossing.
constexpr double kPointTolerance = 1e-7;

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 q) {
  return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
}

struct Box {
  double min_x, min_y, max_x, max_y;

  static Box of(std::span<const Vec2> pts) {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : pts) {
      b.min_x = std::min(b.min_x, p.x);
      b.min_y = std::min(b.min_y, p.y);
      b.max_x = std::max(b.max_x, p.x);
      b.max_y = std::max(b.max_y, p.y);
    }
    return b;
  }

  [[nodiscard]] bool overlaps(const Box& o, double pad = 0.0) const {
    return min_x <= o.max_x + pad && o.min_x <= max_x + pad && min_y <= o.max_y + pad &&
           o.min_y <= max_y + pad;
  }
};

// Intersection point of two non-collinear segments, if they meet.
std::optional<Vec2> transversal_point(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 == 0 && o2 == 0) {
    return std::nullopt;  // collinear: overlap is not a crossing
  }
  const bool meet = (o1 != o2 && o3 != o4) || (o1 == 0 && on_segment(a, b, c)) ||
                    (o2 == 0 && on_segment(a, b, d)) || (o3 == 0 && on_segment(c, d, a)) ||
                    (o4 == 0 && on_segment(c, d, b));
  if (!meet) {
    return std::nullopt;
  }
  if (o1 == 0) return c;
  if (o2 == 0) return d;
  if (o3 == 0) return a;
  if (o4 == 0) return b;
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double t = cross(c - a, s) / cross(r, s);
  return a + r * t;
}

bool near(Vec2 a, Vec2 b) { return distance(a, b) <= kPointTolerance; }

// First derivative of f over a strictly increasing grid s. Second-order
// accurate at interior and boundary points.
std::vector<double> gradient(const std::vector<double>& f, const std::vector<double>& s) {
  const std::size_t n = f.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = s[i] - s[i - 1];
    const double h2 = s[i + 1] - s[i];
    g[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
           h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double d1 = s[1] - s[0];
    const double d2 = s[2] - s[1];
    g[0] = -(2.0 * d1 + d2) / (d1 * (d1 + d2)) * f[0] + (d1 + d2) / (d1 * d2) * f[1] -
           d1 / (d2 * (d1 + d2)) * f[2];
  }
  {
    const double d1 = s[n - 2] - s[n - 3];
    const double d2 = s[n - 1] - s[n - 2];
    g[n - 1] = d2 / (d1 * (d1 + d2)) * f[n - 3] - (d1 + d2) / (d1 * d2) * f[n - 2] +
               (2.0 * d2 + d1) / (d2 * (d1 + d2)) * f[n - 1];
  }
  return g;
}

double mean_abs(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc / static_cast<double>(v.size());
}

}  // namespace

Path Path::from_points(std::vector<Vec2> waypoints) {
  if (waypoints.size() < 2) {
    throw DomainError("path needs at least 2 waypoints");
  }
  std::vector<double> s(waypoints.size(), 0.0);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double step = distance(waypoints[i - 1], waypoints[i]);
    if (step == 0.0) {
      throw DomainError("path has repeated consecutive waypoints");
    }
    s[i] = s[i - 1] + step;
  }
  return Path(std::move(waypoints), std::move(s));
}

Path Path::with_arclengths(std::vector<Vec2> waypoints, std::vector<double> arclengths) {
  if (waypoints.size() < 2 || arclengths.size() != waypoints.size()) {
    throw DomainError("path needs at least 2 waypoints with one arclength each");
  }
  if (arclengths.front() != 0.0) {
    throw DomainError("path arclengths must start at 0");
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i] == waypoints[i - 1]) {
      throw DomainError("path has repeated consecutive waypoints");
    }
    if (!(arclengths[i] > arclengths[i - 1])) {
      throw DomainError("path arclengths must increase");
    }
  }
  return Path(std::move(waypoints), std::move(arclengths));
}

std::vector<Vec2> dedupe_consecutive(std::span<const Vec2> points) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  return out;
}

Path resample_arclength(std::span<const Vec2> polyline, std::size_t count) {
  if (count < 3) {
    throw DomainError("resample_arclength needs count >= 3");
  }
  const auto pts = dedupe_consecutive(polyline);
  if (pts.size() < 2) {
    throw DomainError("resample_arclength: zero-length polyline");
  }
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
  }
  const double total = cum.back();

  std::vector<Vec2> out(count);
  std::vector<double> s(count);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double target =
        (i + 1 == count) ? total : total * static_cast<double>(i) / static_cast<double>(count - 1);
    while (seg + 2 < pts.size() && cum[seg + 1] < target) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double t = std::clamp((target - cum[seg]) / span, 0.0, 1.0);
    out[i] = pts[seg] + (pts[seg + 1] - pts[seg]) * t;
    s[i] = target;
  }
  out.front() = pts.front();
  out.back() = pts.back();
  return Path::with_arclengths(std::move(out), std::move(s));
}

CurvatureProfile curvature_profile(const Path& path) {
  const std::size_t n = path.size();
  if (n < 3) {
    throw DomainError("curvature_profile needs at least 3 waypoints");
  }
  const auto& w = path.waypoints();
  const auto& s = path.arclengths();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = w[i].x;
    y[i] = w[i].y;
  }
  const auto dx = gradient(x, s);
  const auto dy = gradient(y, s);
  const auto ddx = gradient(dx, s);
  const auto ddy = gradient(dy, s);

  CurvatureProfile out;
  out.kappa.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double speed_sq = dx[i] * dx[i] + dy[i] * dy[i];
    const double k = (dx[i] * ddy[i] - dy[i] * ddx[i]) / (speed_sq * std::sqrt(speed_sq));
    out.kappa[i] = std::abs(k) < kCurvatureFloor ? 0.0 : k;
  }
  out.kappa_dot = gradient(out.kappa, s);
  return out;
}

double curve_complexity(const CurvatureProfile& profile) {
  return mean_abs(profile.kappa) + mean_abs(profile.kappa_dot);
}

double polyline_complexity(std::span<const Vec2> polyline, std::size_t waypoints) {
  const auto pts = dedupe_consecutive(polyline);
  if (pts.size() < 3) {
    return 0.0;
  }
  return curve_complexity(curvature_profile(resample_arclength(pts, waypoints)));
}

std::size_t pair_crossings(const Path& a, const Path& b) {
  const auto& pa = a.waypoints();
  const auto& pb = b.waypoints();
  if (!Box::of(pa).overlaps(Box::of(pb))) {
    return 0;
  }
  std::vector<Vec2> hits;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
    const Box sa = Box::of(std::span<const Vec2>(&pa[i], 2));
    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      if (!sa.overlaps(Box::of(std::span<const Vec2>(&pb[j], 2)))) continue;
      const auto p = transversal_point(pa[i], pa[i + 1], pb[j], pb[j + 1]);
      if (!p) continue;
      const bool joint = (near(*p, a.front()) || near(*p, a.back())) &&
                         (near(*p, b.front()) || near(*p, b.back()));
      if (joint) continue;
      if (std::none_of(hits.begin(), hits.end(), [&](Vec2 h) { return near(h, *p); })) {
        hits.push_back(*p);
      }
    }
  }
  return hits.size();
}

CrossingCounts count_crossings(std::span<const Path> lanes) {
  CrossingCounts out;
  out.per_lane.assign(lanes.size(), 0);
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    for (std::size_t j = i + 1; j < lanes.size(); ++j) {
      const std::size_t n = pair_crossings(lanes[i], lanes[j]);
      out.per_lane[i] += n;
      out.per_lane[j] += n;
    }
  }
  out.total = std::accumulate(out.per_lane.begin(), out.per_lane.end(), std::size_t{0});
  return out;
}

Projection project_onto(Vec2 q, const Path& path) {
  const auto& w = path.waypoints();
  const auto& s = path.arclengths();
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const Vec2 d = w[i + 1] - w[i];
    const double len_sq = dot(d, d);
    const double t = std::clamp(dot(q - w[i], d) / len_sq, 0.0, 1.0);
    const Vec2 foot = w[i] + d * t;
    const double dist = distance(q, foot);
    if (dist < best.distance) {
      best.distance = dist;
      best.foot = foot;
      best.segment = i;
      best.arclength = s[i] + (s[i + 1] - s[i]) * t;
      best.tangent = d * (1.0 / std::sqrt(len_sq));
    }
  }
  return best;
}

double point_polyline_distance(Vec2 q, const Path& path) { return project_onto(q, path).distance; }

double point_points_distance(Vec2 q, std::span<const Vec2> points) {
  if (points.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  double best = distance(q, points[0]);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec2 d = points[i + 1] - points[i];
    const double len_sq = dot(d, d);
    const double t = len_sq > 0.0 ? std::clamp(dot(q - points[i], d) / len_sq, 0.0, 1.0) : 0.0;
    best = std::min(best, distance(q, points[i] + d * t));
  }
  return best;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
         (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

bool point_in_polygon(Vec2 q, const Polygon& polygon) {
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[j];
    const Vec2 b = polygon[i];
    if (orientation(a, b, q) == 0 && on_segment(a, b, q)) {
      return true;
    }
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x_at = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (q.x < x_at) inside = !inside;
    }
  }
  return inside;
}

double point_polygon_distance(Vec2 q, const Polygon& polygon) {
  if (point_in_polygon(q, polygon)) {
    return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 edge[2] = {polygon[j], polygon[i]};
    best = std::min(best, point_points_distance(q, edge));
  }
  return best;
}

bool polygon_polyline_intersects(const Polygon& polygon, const Path& path) {
  const auto& w = path.waypoints();
  if (!Box::of(polygon).overlaps(Box::of(w))) {
    return false;
  }
  const std::size_t n = polygon.size();
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if (segments_intersect(w[k], w[k + 1], polygon[j], polygon[i])) return true;
    }
  }
  return point_in_polygon(w.front(), polygon);
}

bool is_simple_polygon(const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon[i] == polygon[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace curator::geometry
