#pragma once

#include "curator/map_index.hpp"
#include "curator/scene_model.hpp"

namespace curator {

/// Map-derived measures inside the snippet's region of interest.
struct InfraFeatures {
  double curve_mean = 0.0;       ///< mean curve complexity over vehicle lanes (1/m)
  double crossing_total = 0.0;   ///< sum over vehicle lanes of crossings with other vehicle lanes
  double at_intersection = 0.0;  ///< 1 when some ego pose lies inside an intersection polygon
  double intersection_roads = 0.0;
  double intersection_lanes = 0.0;
  double traffic_lights = 0.0;
  double signs = 0.0;            ///< stop + yield signs
  double bike_curve = 0.0;       ///< mean curve complexity over bike lanes (1/m)
  double bike_crossing = 0.0;    ///< crossings of bike lanes with any other included lane
  double crosswalk_lane_overlaps = 0.0;
  double height_var = 0.0;       ///< population variance of terrain height (m^2)
};

/// The ROI is the union over frames of a disk of `roi_radius` around the ego
/// position. A map element is included when any part of it lies inside.
InfraFeatures infra_features(const Snippet& s, const MapIndex& index, double roi_radius);

/// Convenience overload that indexes the map first.
InfraFeatures infra_features(const Snippet& s, const SceneMap& m, double roi_radius,
                             std::size_t path_waypoints = 100);

/// Distinct ego positions of a snippet, in frame order.
std::vector<Vec2> ego_positions(const Snippet& s);

}  // namespace curator
