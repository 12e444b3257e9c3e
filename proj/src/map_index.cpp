#include "curator/map_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curator/error.hpp"

namespace curator {

namespace {

double angle_between(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

}  // namespace

MapIndex::MapIndex(const SceneMap& map, std::size_t path_waypoints) : map_(&map) {
  const std::size_t n = map.lanes.size();
  paths_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pts = geometry::dedupe_consecutive(map.lanes[i].centerline);
    if (pts.size() < 2) {
      throw InputError("lane " + map.lanes[i].id + " has fewer than 2 distinct points");
    }
    paths_.push_back(geometry::Path::from_points(pts));
    complexity_.push_back(geometry::polyline_complexity(pts, path_waypoints));
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : pts) {
      b.min_x = std::min(b.min_x, p.x);
      b.min_y = std::min(b.min_y, p.y);
      b.max_x = std::max(b.max_x, p.x);
      b.max_y = std::max(b.max_y, p.y);
    }
    boxes_.push_back(b);
    ids_.emplace(map.lanes[i].id, i);
  }
  crossing_matrix_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t c = geometry::pair_crossings(paths_[i], paths_[j]);
      crossing_matrix_[i * n + j] = c;
      crossing_matrix_[j * n + i] = c;
    }
  }
  crosswalk_matrix_.assign(map.crosswalks.size() * n, 0);
  for (std::size_t c = 0; c < map.crosswalks.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      crosswalk_matrix_[c * n + i] =
          geometry::polygon_polyline_intersects(map.crosswalks[c].polygon, paths_[i]) ? 1 : 0;
    }
  }
}

double MapIndex::lane_width(std::size_t lane, double fallback) const {
  return map_->lanes[lane].width.value_or(fallback);
}

std::size_t MapIndex::crossings(std::size_t a, std::size_t b) const {
  return crossing_matrix_[a * paths_.size() + b];
}

bool MapIndex::crosswalk_overlaps(std::size_t crosswalk, std::size_t lane) const {
  return crosswalk_matrix_[crosswalk * paths_.size() + lane] != 0;
}

std::optional<std::size_t> MapIndex::lane_by_id(std::string_view id) const {
  const auto it = ids_.find(std::string(id));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

double MapIndex::lane_box_distance(std::size_t lane, Vec2 q) const {
  const Box& b = boxes_[lane];
  const double dx = std::max({b.min_x - q.x, 0.0, q.x - b.max_x});
  const double dy = std::max({b.min_y - q.y, 0.0, q.y - b.max_y});
  return std::hypot(dx, dy);
}

double MapIndex::lane_distance(std::size_t lane, Vec2 q) const {
  return geometry::point_polyline_distance(q, paths_[lane]);
}

std::optional<LaneMatch> MapIndex::match(Vec2 q, double heading, double max_distance,
                                        bool aligned_only) const {
  std::optional<LaneMatch> aligned;
  std::optional<LaneMatch> any;
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (map_->lanes[i].is_bike_lane) continue;
    if (lane_box_distance(i, q) > max_distance) continue;
    const auto proj = geometry::project_onto(q, paths_[i]);
    if (proj.distance > max_distance) continue;
    const LaneMatch m{i, proj.distance, proj.arclength};
    if (!any || proj.distance < any->distance) any = m;
    const double lane_heading = std::atan2(proj.tangent.y, proj.tangent.x);
    if (angle_between(lane_heading, heading) <= std::numbers::pi / 4.0 &&
        (!aligned || proj.distance < aligned->distance)) {
      aligned = m;
    }
  }
  if (aligned || aligned_only) return aligned;
  return any;
}

bool MapIndex::are_neighbors(std::size_t a, std::size_t b) const {
  const Lane& la = map_->lanes[a];
  const Lane& lb = map_->lanes[b];
  return la.left_neighbor == lb.id || la.right_neighbor == lb.id || lb.left_neighbor == la.id ||
         lb.right_neighbor == la.id;
}

}  // namespace curator
