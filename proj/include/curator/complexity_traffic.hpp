#pragma once

#include <array>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curator/scene_model.hpp"

namespace curator {

inline constexpr double kUnboundedRoi = std::numeric_limits<double>::infinity();

struct TrafficFeatures {
  double crowd_static = 0.0;     ///< mean static-actor count per frame
  double crowd_dynamic = 0.0;    ///< mean dynamic-actor count per frame
  double class_div = 0.0;
  double dist_var = 0.0;         ///< m^2
  double actor_path_mean = 0.0;  ///< 1/m
  double actor_path_max = 0.0;   ///< 1/m
  double speed_div = 0.0;        ///< m^2/s^2
};

/// One actor's observations in frame order.
struct TrackPath {
  std::string track_id;
  ActorClass actor_class = ActorClass::kVehicle;
  std::vector<std::size_t> frames;
  std::vector<Vec2> positions;
  std::vector<double> speeds;
  std::vector<double> yaws;
};

struct Crowdedness {
  double static_mean = 0.0;
  double dynamic_mean = 0.0;
};

/// Detection lies within roi_radius of the frame's ego position.
bool in_roi(const Detection& d, const Frame& f, double roi_radius);

/// Tracks with at least one observation inside the ROI, carrying all of
/// their observations, ordered by track id.
std::vector<TrackPath> collect_tracks(const Snippet& s, double roi_radius = kUnboundedRoi);

/// Per-frame ROI counts averaged over the snippet's frames, split by the
/// snippet-mean speed of each track.
Crowdedness crowdedness(const Snippet& s, double roi_radius = kUnboundedRoi);

/// One frame's class-diversity term from per-class counts
/// (vehicle, pedestrian, bicyclist). Defined as 0 for an empty frame.
double class_diversity_term(const std::array<std::size_t, kNumActorClasses>& counts);

double class_diversity(const Snippet& s, double roi_radius = kUnboundedRoi);

/// Population variance of ego-to-actor distances pooled over all in-ROI
/// (frame, detection) pairs.
double spatial_variance(const Snippet& s, double roi_radius = kUnboundedRoi);

/// Mean and max of per-track curve complexity over tracks with at least
/// three distinct positions; (0, 0) when none qualify.
std::pair<double, double> actor_path_complexity(std::span<const TrackPath> tracks,
                                                std::size_t path_waypoints);

/// Variance of per-actor mean speeds plus the sum of per-actor speed
/// variances (population variances).
double speed_diversity(std::span<const TrackPath> tracks);
double speed_diversity(const Snippet& s, double roi_radius = kUnboundedRoi);

TrafficFeatures traffic_features(const Snippet& s, double roi_radius, std::size_t path_waypoints);

}  // namespace curator
