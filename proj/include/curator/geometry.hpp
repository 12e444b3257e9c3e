#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace curator::geometry {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const noexcept = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return norm(a - b); }

using Polygon = std::vector<Vec2>;

/// Ordered waypoints with their cumulative arc-length.
///
/// Invariants: at least two waypoints, consecutive waypoints distinct,
/// arclengths nondecreasing with arclengths[0] == 0. A path built from raw
/// points measures chord lengths; a resampled path carries the arc-length
/// positions of the source curve it was sampled from.
class Path {
 public:
  /// Builds a path whose arclengths are cumulative chord lengths.
  /// Throws DomainError when the invariants do not hold.
  static Path from_points(std::vector<Vec2> waypoints);

  /// Builds a path with caller-supplied arclengths (same invariants).
  static Path with_arclengths(std::vector<Vec2> waypoints,
                              std::vector<double> arclengths);

  [[nodiscard]] const std::vector<Vec2>& waypoints() const noexcept { return waypoints_; }
  [[nodiscard]] const std::vector<double>& arclengths() const noexcept { return arclengths_; }
  [[nodiscard]] std::size_t size() const noexcept { return waypoints_.size(); }
  [[nodiscard]] double length() const noexcept { return arclengths_.back(); }
  [[nodiscard]] Vec2 front() const noexcept { return waypoints_.front(); }
  [[nodiscard]] Vec2 back() const noexcept { return waypoints_.back(); }

 private:
  Path(std::vector<Vec2> w, std::vector<double> s)
      : waypoints_(std::move(w)), arclengths_(std::move(s)) {}

  std::vector<Vec2> waypoints_;
  std::vector<double> arclengths_;
};

/// Signed curvature (left turns positive) and its arc-length derivative at
/// every waypoint of a path.
struct CurvatureProfile {
  std::vector<double> kappa;
  std::vector<double> kappa_dot;
};

/// Drops consecutive duplicate points. The result may have fewer than two
/// points when the input is degenerate.
std::vector<Vec2> dedupe_consecutive(std::span<const Vec2> points);

/// Samples `count` points at equal arc-length spacing by linear interpolation.
/// Endpoints are preserved. Throws DomainError when count < 3 or the
/// polyline has zero length.
Path resample_arclength(std::span<const Vec2> polyline, std::size_t count);

inline constexpr double kCurvatureFloor = 1e-9;  ///< 1/m

/// Finite-difference curvature: second-order central differences at
/// interior points, second-order one-sided differences at the endpoints.
/// Curvature below kCurvatureFloor is rounding noise and reads as zero.
CurvatureProfile curvature_profile(const Path& path);

/// Mean of |kappa| plus mean of |kappa_dot|.
double curve_complexity(const CurvatureProfile& profile);

/// Resample to `waypoints` points and evaluate curve_complexity. Returns 0
/// for polylines with fewer than three distinct points.
double polyline_complexity(std::span<const Vec2> polyline, std::size_t waypoints);

struct CrossingCounts {
  std::vector<std::size_t> per_lane;
  std::size_t total = 0;
};

/// Number of distinct points where two centerlines cross, excluding points
/// that are an endpoint of both (lane-graph joins). Collinear overlaps are
/// not transversal and are not counted.
std::size_t pair_crossings(const Path& a, const Path& b);

/// v_c for every lane against all others, and their sum.
CrossingCounts count_crossings(std::span<const Path> lanes);

struct Projection {
  double distance = 0.0;
  double arclength = 0.0;  ///< position of the foot point along the path
  Vec2 foot;
  std::size_t segment = 0;
  Vec2 tangent;  ///< unit direction of the segment holding the foot point
};

/// Closest point on the path to q.
Projection project_onto(Vec2 q, const Path& path);

/// Exact minimum Euclidean distance from q to any segment of the path.
double point_polyline_distance(Vec2 q, const Path& path);

/// Same as point_polyline_distance over raw points; a single point is allowed.
double point_points_distance(Vec2 q, std::span<const Vec2> points);

/// Closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Boundary counts as inside.
bool point_in_polygon(Vec2 q, const Polygon& polygon);

/// 0 when q lies inside or on the polygon.
double point_polygon_distance(Vec2 q, const Polygon& polygon);

/// True iff some path segment touches the polygon boundary or a waypoint lies
/// inside the polygon.
bool polygon_polyline_intersects(const Polygon& polygon, const Path& path);

/// At least three vertices and no two non-adjacent edges touch.
bool is_simple_polygon(const Polygon& polygon);

}  // namespace curator::geometry
