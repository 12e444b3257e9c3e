#include "curator/complexity_traffic.hpp"

#include <algorithm>
#include <map>

#include "curator/geometry.hpp"
#include "curator/stats.hpp"

namespace curator {

bool in_roi(const Detection& d, const Frame& f, double roi_radius) {
  return geometry::distance(d.center, f.ego_pose.position()) <= roi_radius;
}

std::vector<TrackPath> collect_tracks(const Snippet& s, double roi_radius) {
  std::map<std::string, TrackPath> by_id;
  std::map<std::string, bool> seen_in_roi;
  for (std::size_t t = 0; t < s.frames.size(); ++t) {
    const Frame& f = s.frames[t];
    for (const auto& d : f.detections) {
      auto& track = by_id[d.track_id];
      if (track.frames.empty()) {
        track.track_id = d.track_id;
        track.actor_class = d.actor_class;
      }
      track.frames.push_back(t);
      track.positions.push_back(d.center);
      track.speeds.push_back(d.speed);
      track.yaws.push_back(d.yaw);
      if (in_roi(d, f, roi_radius)) seen_in_roi[d.track_id] = true;
    }
  }
  std::vector<TrackPath> out;
  for (auto& [id, track] : by_id) {
    if (seen_in_roi.count(id)) out.push_back(std::move(track));
  }
  return out;
}

Crowdedness crowdedness(const Snippet& s, double roi_radius) {
  Crowdedness out;
  if (s.frames.empty()) return out;
  const auto speeds = track_mean_speeds(s);
  std::size_t n_static = 0;
  std::size_t n_dynamic = 0;
  for (const auto& f : s.frames) {
    for (const auto& d : f.detections) {
      if (!in_roi(d, f, roi_radius)) continue;
      if (is_static_speed(speeds.at(d.track_id))) {
        ++n_static;
      } else {
        ++n_dynamic;
      }
    }
  }
  const double frames = static_cast<double>(s.frames.size());
  out.static_mean = static_cast<double>(n_static) / frames;
  out.dynamic_mean = static_cast<double>(n_dynamic) / frames;
  return out;
}

double class_diversity_term(const std::array<std::size_t, kNumActorClasses>& counts) {
  std::size_t total = 0;
  double product = 1.0;
  for (auto c : counts) {
    total += c;
    product *= 1.0 + static_cast<double>(c);
  }
  if (total == 0) return 0.0;
  return product / static_cast<double>(total);
}

double class_diversity(const Snippet& s, double roi_radius) {
  if (s.frames.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& f : s.frames) {
    std::array<std::size_t, kNumActorClasses> counts{};
    for (const auto& d : f.detections) {
      if (d.actor_class == ActorClass::kUnknown || !in_roi(d, f, roi_radius)) continue;
      ++counts[static_cast<std::size_t>(d.actor_class)];
    }
    acc += class_diversity_term(counts);
  }
  return acc / static_cast<double>(s.frames.size());
}

double spatial_variance(const Snippet& s, double roi_radius) {
  std::vector<double> dists;
  for (const auto& f : s.frames) {
    for (const auto& d : f.detections) {
      const double r = geometry::distance(d.center, f.ego_pose.position());
      if (r <= roi_radius) dists.push_back(r);
    }
  }
  return population_variance(dists);
}

std::pair<double, double> actor_path_complexity(std::span<const TrackPath> tracks,
                                                std::size_t path_waypoints) {
  double sum = 0.0;
  double max = 0.0;
  std::size_t eligible = 0;
  for (const auto& t : tracks) {
    const auto pts = geometry::dedupe_consecutive(t.positions);
    if (pts.size() < 3) continue;
    const double e = geometry::polyline_complexity(pts, path_waypoints);
    sum += e;
    max = std::max(max, e);
    ++eligible;
  }
  if (eligible == 0) return {0.0, 0.0};
  return {sum / static_cast<double>(eligible), max};
}

double speed_diversity(std::span<const TrackPath> tracks) {
  if (tracks.empty()) return 0.0;
  std::vector<double> means;
  double within = 0.0;
  for (const auto& t : tracks) {
    means.push_back(mean(t.speeds));
    within += population_variance(t.speeds);
  }
  return population_variance(means) + within;
}

double speed_diversity(const Snippet& s, double roi_radius) {
  const auto tracks = collect_tracks(s, roi_radius);
  return speed_diversity(tracks);
}

TrafficFeatures traffic_features(const Snippet& s, double roi_radius, std::size_t path_waypoints) {
  TrafficFeatures out;
  const auto crowd = crowdedness(s, roi_radius);
  out.crowd_static = crowd.static_mean;
  out.crowd_dynamic = crowd.dynamic_mean;
  out.class_div = class_diversity(s, roi_radius);
  out.dist_var = spatial_variance(s, roi_radius);
  const auto tracks = collect_tracks(s, roi_radius);
  const auto [path_mean, path_max] = actor_path_complexity(tracks, path_waypoints);
  out.actor_path_mean = path_mean;
  out.actor_path_max = path_max;
  out.speed_div = speed_diversity(tracks);
  return out;
}

}  // namespace curator
