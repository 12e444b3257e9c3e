#include "curator/complexity_infra.hpp"

#include <algorithm>
#include <limits>

#include "curator/stats.hpp"

namespace curator {

namespace {

// Union of disks around the ego positions, with a bounding box for cheap
// rejection.
class Roi {
 public:
  Roi(std::vector<Vec2> centers, double radius) : centers_(std::move(centers)), radius_(radius) {
    for (const auto& c : centers_) {
      min_x_ = std::min(min_x_, c.x - radius_);
      min_y_ = std::min(min_y_, c.y - radius_);
      max_x_ = std::max(max_x_, c.x + radius_);
      max_y_ = std::max(max_y_, c.y + radius_);
    }
  }

  [[nodiscard]] bool contains(Vec2 q) const {
    if (q.x < min_x_ || q.x > max_x_ || q.y < min_y_ || q.y > max_y_) return false;
    return std::any_of(centers_.begin(), centers_.end(),
                       [&](Vec2 c) { return geometry::distance(c, q) <= radius_; });
  }

  [[nodiscard]] bool touches_lane(const MapIndex& index, std::size_t lane) const {
    for (const auto& c : centers_) {
      if (index.lane_box_distance(lane, c) > radius_) continue;
      if (index.lane_distance(lane, c) <= radius_) return true;
    }
    return false;
  }

  [[nodiscard]] bool touches_polygon(const Polygon& poly) const {
    return std::any_of(centers_.begin(), centers_.end(), [&](Vec2 c) {
      return geometry::point_polygon_distance(c, poly) <= radius_;
    });
  }

 private:
  std::vector<Vec2> centers_;
  double radius_;
  double min_x_ = std::numeric_limits<double>::infinity();
  double min_y_ = std::numeric_limits<double>::infinity();
  double max_x_ = -std::numeric_limits<double>::infinity();
  double max_y_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<Vec2> ego_positions(const Snippet& s) {
  std::vector<Vec2> pts;
  pts.reserve(s.frames.size());
  for (const auto& f : s.frames) pts.push_back(f.ego_pose.position());
  return geometry::dedupe_consecutive(pts);
}

InfraFeatures infra_features(const Snippet& s, const MapIndex& index, double roi_radius) {
  InfraFeatures out;
  if (s.frames.empty()) return out;
  const SceneMap& m = index.map();
  const Roi roi(ego_positions(s), roi_radius);

  std::vector<std::size_t> vehicle_lanes;
  std::vector<std::size_t> bike_lanes;
  for (std::size_t i = 0; i < index.lane_count(); ++i) {
    if (!roi.touches_lane(index, i)) continue;
    (index.lane(i).is_bike_lane ? bike_lanes : vehicle_lanes).push_back(i);
  }

  if (!vehicle_lanes.empty()) {
    double acc = 0.0;
    for (auto i : vehicle_lanes) acc += index.lane_complexity(i);
    out.curve_mean = acc / static_cast<double>(vehicle_lanes.size());
  }
  if (!bike_lanes.empty()) {
    double acc = 0.0;
    for (auto i : bike_lanes) acc += index.lane_complexity(i);
    out.bike_curve = acc / static_cast<double>(bike_lanes.size());
  }
  std::size_t crossings = 0;
  for (auto i : vehicle_lanes) {
    for (auto j : vehicle_lanes) {
      if (i != j) crossings += index.crossings(i, j);
    }
  }
  out.crossing_total = static_cast<double>(crossings);

  std::size_t bike_crossings = 0;
  for (auto b : bike_lanes) {
    for (auto i : vehicle_lanes) bike_crossings += index.crossings(b, i);
    for (auto j : bike_lanes) {
      if (j != b) bike_crossings += index.crossings(b, j);
    }
  }
  out.bike_crossing = static_cast<double>(bike_crossings);

  for (const auto& f : s.frames) {
    const Vec2 p = f.ego_pose.position();
    if (std::any_of(m.intersections.begin(), m.intersections.end(),
                    [&](const Intersection& x) { return geometry::point_in_polygon(p, x.polygon); })) {
      out.at_intersection = 1.0;
      break;
    }
  }
  for (const auto& x : m.intersections) {
    if (!roi.touches_polygon(x.polygon)) continue;
    out.intersection_roads += x.incoming_roads;
    for (int n : x.road_lane_counts) out.intersection_lanes += n;
  }
  for (const auto& c : m.traffic_controls) {
    if (!roi.contains(c.position)) continue;
    if (c.kind == ControlKind::kTrafficLight) {
      out.traffic_lights += 1.0;
    } else {
      out.signs += 1.0;
    }
  }
  for (std::size_t c = 0; c < m.crosswalks.size(); ++c) {
    if (!roi.touches_polygon(m.crosswalks[c].polygon)) continue;
    for (auto i : vehicle_lanes) {
      if (index.crosswalk_overlaps(c, i)) out.crosswalk_lane_overlaps += 1.0;
    }
  }
  std::vector<double> heights;
  for (const auto& h : m.height_samples) {
    if (roi.contains({h.x, h.y})) heights.push_back(h.z);
  }
  out.height_var = population_variance(heights);
  return out;
}

InfraFeatures infra_features(const Snippet& s, const SceneMap& m, double roi_radius,
                             std::size_t path_waypoints) {
  const MapIndex index(m, path_waypoints);
  return infra_features(s, index, roi_radius);
}

}  // namespace curator
