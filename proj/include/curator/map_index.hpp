#pragma once

#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "curator/geometry.hpp"
#include "curator/scene_model.hpp"

namespace curator {

/// Lane width assumed when the map does not carry one (m).
inline constexpr double kDefaultLaneWidth = 3.6;

struct LaneMatch {
  std::size_t lane = 0;
  double distance = 0.0;   ///< unsigned lateral distance to the centerline
  double arclength = 0.0;  ///< position of the foot point along the lane
};

/// Per-map quantities that do not depend on a snippet: lane paths, their
/// curve complexity, pairwise crossing counts and crosswalk overlaps.
/// Built once per pool and shared read-only across workers.
class MapIndex {
 public:
  MapIndex(const SceneMap& map, std::size_t path_waypoints);

  [[nodiscard]] const SceneMap& map() const noexcept { return *map_; }
  [[nodiscard]] std::size_t lane_count() const noexcept { return paths_.size(); }
  [[nodiscard]] const geometry::Path& lane_path(std::size_t lane) const { return paths_[lane]; }
  [[nodiscard]] const Lane& lane(std::size_t lane) const { return map_->lanes[lane]; }
  [[nodiscard]] double lane_complexity(std::size_t lane) const { return complexity_[lane]; }
  [[nodiscard]] double lane_width(std::size_t lane, double fallback = kDefaultLaneWidth) const;
  [[nodiscard]] std::size_t crossings(std::size_t a, std::size_t b) const;
  [[nodiscard]] bool crosswalk_overlaps(std::size_t crosswalk, std::size_t lane) const;
  [[nodiscard]] std::optional<std::size_t> lane_by_id(std::string_view id) const;

  /// Lower bound on the distance from q to the lane (bounding box distance).
  [[nodiscard]] double lane_box_distance(std::size_t lane, Vec2 q) const;

  /// Exact distance from q to the lane centerline.
  [[nodiscard]] double lane_distance(std::size_t lane, Vec2 q) const;

  /// Nearest vehicle (non-bike) lane within max_distance. Lanes whose local
  /// direction is within 45 degrees of `heading` are preferred; others are
  /// used only when no aligned lane is in range, unless `aligned_only`.
  /// Ties go to the lower index.
  [[nodiscard]] std::optional<LaneMatch> match(Vec2 q, double heading, double max_distance,
                                               bool aligned_only = false) const;

  /// True when lane `b` is the left or right neighbor of lane `a` (either
  /// direction of the reference).
  [[nodiscard]] bool are_neighbors(std::size_t a, std::size_t b) const;

 private:
  struct Box {
    double min_x, min_y, max_x, max_y;
  };

  const SceneMap* map_;
  std::vector<geometry::Path> paths_;
  std::vector<double> complexity_;
  std::vector<Box> boxes_;
  std::vector<std::size_t> crossing_matrix_;
  std::vector<char> crosswalk_matrix_;
  std::unordered_map<std::string, std::size_t> ids_;
};

}  // namespace curator
