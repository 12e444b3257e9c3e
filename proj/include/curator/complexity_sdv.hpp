#pragma once

#include <optional>
#include <vector>

#include "curator/map_index.hpp"
#include "curator/params.hpp"
#include "curator/scene_model.hpp"

namespace curator {

struct SdvFeatures {
  double sdv_path = 0.0;       ///< curve complexity of the ego trajectory (1/m)
  double sdv_speed_var = 0.0;  ///< m^2/s^2
  double lane_changes = 0.0;
  double turns = 0.0;
  double controls_on_route = 0.0;
  double near_path_static = 0.0;
  double near_path_dynamic = 0.0;
  double conflict_traversals = 0.0;
  double conflict_reachable = 0.0;
  double nudges = 0.0;
  bool valid = true;  ///< false when the ego could not be map-matched
};

struct EgoMotion {
  double path_complexity = 0.0;
  double speed_variance = 0.0;
};

/// Ego speed for each consecutive frame pair, from pose differences times
/// the frame rate. T-1 values.
std::vector<double> ego_speeds(const Snippet& s);

/// Curve complexity of the resampled ego trajectory (0 when the ego moved
/// less than 1 m) and the population variance of ego speeds.
EgoMotion sdv_path_speed(const Snippet& s, std::size_t path_waypoints);

/// Per-frame lane assignment. `raw` is the nearest vehicle lane within the
/// match distance; `stable` drops lane runs shorter than the minimum run
/// length, so brief flicker near lane boundaries does not count as a switch.
struct LaneAssignment {
  std::vector<std::optional<std::size_t>> raw;
  std::vector<std::size_t> stable;
  double matched_fraction = 0.0;
  bool valid = false;
};

LaneAssignment assign_lanes(const Snippet& s, const MapIndex& index, const MeasureParams& p);

struct RouteEvents {
  bool valid = false;
  std::size_t lane_changes = 0;
  std::size_t turns = 0;
  std::size_t controls_on_route = 0;
  std::vector<std::size_t> traversed_lanes;  ///< ascending lane index
  LaneAssignment assignment;
};

RouteEvents route_events(const Snippet& s, const MapIndex& index, const MeasureParams& p);

struct Interactions {
  std::size_t near_path_static = 0;
  std::size_t near_path_dynamic = 0;
  std::size_t conflict_traversals = 0;
  std::size_t conflict_reachable = 0;
};

/// Requires a valid RouteEvents for the same snippet.
Interactions interactions(const Snippet& s, const MapIndex& index, const RouteEvents& route,
                          double near_dist, double horizon);

/// Lanes crossing any traversed lane (traversed lanes excluded), ascending.
std::vector<std::size_t> conflict_lanes(const MapIndex& index, const RouteEvents& route);

/// Requires a valid RouteEvents for the same snippet.
std::size_t detect_nudges(const Snippet& s, const MapIndex& index, const RouteEvents& route,
                          const MeasureParams& p);

SdvFeatures sdv_features(const Snippet& s, const MapIndex& index, const MeasureParams& p);

}  // namespace curator
