#pragma once

#include <cstddef>

namespace curator {

/// Tunables for the complexity measures. Defaults are the shipped values;
/// every field is surfaced in the curation config file.
struct MeasureParams {
  double roi_radius = 75.0;              ///< m, disk around each ego pose
  std::size_t path_waypoints = 100;      ///< K, resampling for curve complexity
  double near_dist = 10.0;               ///< m, "near the ego path"
  double horizon = 5.0;                  ///< s, reachability horizon for conflict lanes
  double map_match_dist = 3.0;           ///< m, max ego-to-lane distance for a match
  double map_match_fraction = 0.9;       ///< share of frames that must match
  std::size_t lane_change_min_frames = 10;
  double lane_width_fallback = 3.6;      ///< m
  double ego_width = 2.0;                ///< m
  std::size_t nudge_min_in_lane_frames = 10;
  double nudge_object_dist = 5.0;        ///< m
};

}  // namespace curator
