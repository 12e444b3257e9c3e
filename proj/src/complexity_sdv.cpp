#include "curator/complexity_sdv.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "curator/complexity_infra.hpp"
#include "curator/complexity_traffic.hpp"
#include "curator/stats.hpp"

namespace curator {

namespace {

// Ego must travel at least this far before its path curvature is measured.
constexpr double kMinEgoTravel = 1.0;

struct Run {
  std::size_t begin;
  std::size_t end;  // exclusive
  std::optional<std::size_t> lane;
};

std::vector<Run> runs_of(const std::vector<std::optional<std::size_t>>& raw) {
  std::vector<Run> runs;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (runs.empty() || runs.back().lane != raw[t]) {
      runs.push_back({t, t + 1, raw[t]});
    } else {
      runs.back().end = t + 1;
    }
  }
  return runs;
}

// Lanes of the stable assignment in traversal order, consecutive repeats
// merged.
std::vector<std::size_t> lane_sequence(const std::vector<std::size_t>& stable) {
  std::vector<std::size_t> seq;
  for (auto l : stable) {
    if (seq.empty() || seq.back() != l) seq.push_back(l);
  }
  return seq;
}

}  // namespace

std::vector<double> ego_speeds(const Snippet& s) {
  std::vector<double> v;
  if (s.frames.size() < 2) return v;
  v.reserve(s.frames.size() - 1);
  for (std::size_t t = 0; t + 1 < s.frames.size(); ++t) {
    v.push_back(geometry::distance(s.frames[t].ego_pose.position(),
                                   s.frames[t + 1].ego_pose.position()) *
                kFrameRateHz);
  }
  return v;
}

EgoMotion sdv_path_speed(const Snippet& s, std::size_t path_waypoints) {
  EgoMotion out;
  const auto pts = ego_positions(s);
  double travel = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) travel += geometry::distance(pts[i - 1], pts[i]);
  if (travel >= kMinEgoTravel) {
    out.path_complexity = geometry::polyline_complexity(pts, path_waypoints);
  }
  const auto speeds = ego_speeds(s);
  out.speed_variance = population_variance(speeds);
  return out;
}

LaneAssignment assign_lanes(const Snippet& s, const MapIndex& index, const MeasureParams& p) {
  LaneAssignment out;
  const std::size_t n = s.frames.size();
  if (n == 0) return out;
  out.raw.resize(n);
  std::size_t matched = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto& pose = s.frames[t].ego_pose;
    if (auto m = index.match(pose.position(), pose.heading, p.map_match_dist)) {
      out.raw[t] = m->lane;
      ++matched;
    }
  }
  out.matched_fraction = static_cast<double>(matched) / static_cast<double>(n);
  out.valid = matched > 0 && out.matched_fraction >= p.map_match_fraction;
  if (matched == 0) return out;

  const auto runs = runs_of(out.raw);
  std::vector<const Run*> anchors;
  for (const auto& r : runs) {
    if (r.lane && r.end - r.begin >= p.lane_change_min_frames) anchors.push_back(&r);
  }
  out.stable.assign(n, 0);
  if (anchors.empty()) {
    std::map<std::size_t, std::size_t> freq;
    for (const auto& l : out.raw) {
      if (l) ++freq[*l];
    }
    const auto best = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    std::fill(out.stable.begin(), out.stable.end(), best->first);
    return out;
  }
  std::size_t current = *anchors.front()->lane;
  std::size_t next_anchor = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (next_anchor < anchors.size() && t >= anchors[next_anchor]->begin) {
      current = *anchors[next_anchor]->lane;
      ++next_anchor;
    }
    out.stable[t] = current;
  }
  return out;
}

RouteEvents route_events(const Snippet& s, const MapIndex& index, const MeasureParams& p) {
  RouteEvents out;
  out.assignment = assign_lanes(s, index, p);
  if (!out.assignment.valid) return out;
  out.valid = true;

  const auto seq = lane_sequence(out.assignment.stable);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (index.are_neighbors(seq[i - 1], seq[i])) ++out.lane_changes;
  }
  std::set<std::size_t> traversed(seq.begin(), seq.end());
  out.traversed_lanes.assign(traversed.begin(), traversed.end());
  for (auto l : out.traversed_lanes) {
    if (index.lane(l).turn != TurnTag::kStraight) ++out.turns;
  }
  for (const auto& c : index.map().traffic_controls) {
    if (c.kind == ControlKind::kYieldSign) continue;
    const bool governs = std::any_of(c.governed_lanes.begin(), c.governed_lanes.end(),
                                     [&](const std::string& id) {
                                       const auto l = index.lane_by_id(id);
                                       return l && traversed.count(*l);
                                     });
    if (governs) ++out.controls_on_route;
  }
  return out;
}

std::vector<std::size_t> conflict_lanes(const MapIndex& index, const RouteEvents& route) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < index.lane_count(); ++j) {
    if (index.lane(j).is_bike_lane) continue;
    if (std::binary_search(route.traversed_lanes.begin(), route.traversed_lanes.end(), j)) continue;
    const bool crosses = std::any_of(route.traversed_lanes.begin(), route.traversed_lanes.end(),
                                     [&](std::size_t i) { return index.crossings(i, j) > 0; });
    if (crosses) out.push_back(j);
  }
  return out;
}

Interactions interactions(const Snippet& s, const MapIndex& index, const RouteEvents& route,
                          double near_dist, double horizon) {
  Interactions out;
  const auto ego = ego_positions(s);
  if (ego.empty()) return out;
  const auto mean_speeds = track_mean_speeds(s);
  const auto tracks = collect_tracks(s);

  for (const auto& t : tracks) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : t.positions) {
      best = std::min(best, geometry::point_points_distance(q, ego));
      if (best < near_dist) break;
    }
    if (best < near_dist) {
      if (is_static_speed(mean_speeds.at(t.track_id))) {
        ++out.near_path_static;
      } else {
        ++out.near_path_dynamic;
      }
    }
  }

  if (!route.valid) return out;
  const auto conflicts = conflict_lanes(index, route);
  if (conflicts.empty()) return out;
  std::vector<char> is_conflict(index.lane_count(), 0);
  for (auto c : conflicts) is_conflict[c] = 1;

  double match_radius = 0.0;
  for (std::size_t l = 0; l < index.lane_count(); ++l) {
    match_radius = std::max(match_radius, index.lane_width(l) / 2.0);
  }
  for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
    const auto& t = tracks[ti];
    if (t.actor_class != ActorClass::kVehicle) continue;
    std::vector<std::optional<LaneMatch>> matches(t.positions.size());
    bool traverses = false;
    for (std::size_t k = 0; k < t.positions.size(); ++k) {
      auto m = index.match(t.positions[k], t.yaws[k], match_radius, true);
      if (m && m->distance > index.lane_width(m->lane) / 2.0) m.reset();
      matches[k] = m;
      if (m && is_conflict[m->lane]) {
        traverses = true;
        break;
      }
    }
    if (traverses) {
      ++out.conflict_traversals;
      continue;
    }
    bool reachable = false;
    for (std::size_t k = 0; k < t.positions.size() && !reachable; ++k) {
      if (!matches[k]) continue;
      const double reach = t.speeds[k] * horizon;
      if (reach <= 0.0) continue;
      const std::size_t lane = matches[k]->lane;
      const double to_end = index.lane_path(lane).length() - matches[k]->arclength;
      // Shortest along-lane distance to each lane start, explored outward
      // until the reach is exhausted.
      using Item = std::pair<double, std::size_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
      std::map<std::size_t, double> settled;
      auto push_successors = [&](std::size_t from, double dist) {
        for (const auto& id : index.lane(from).successors) {
          if (auto succ = index.lane_by_id(id); succ && dist <= reach) frontier.emplace(dist, *succ);
        }
      };
      push_successors(lane, to_end);
      while (!frontier.empty()) {
        const auto [dist, l] = frontier.top();
        frontier.pop();
        if (settled.count(l)) continue;
        settled.emplace(l, dist);
        if (is_conflict[l]) {
          reachable = true;
          break;
        }
        push_successors(l, dist + index.lane_path(l).length());
      }
    }
    if (reachable) ++out.conflict_reachable;
  }
  return out;
}

std::size_t detect_nudges(const Snippet& s, const MapIndex& index, const RouteEvents& route,
                          const MeasureParams& p) {
  if (!route.valid) return 0;
  const auto& stable = route.assignment.stable;
  const std::size_t n = s.frames.size();
  if (stable.size() != n || n == 0) return 0;

  std::vector<char> out_of_lane(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const double offset = index.lane_distance(stable[t], s.frames[t].ego_pose.position());
    const double threshold =
        index.lane_width(stable[t], p.lane_width_fallback) / 2.0 - p.ego_width / 2.0;
    out_of_lane[t] = offset > threshold ? 1 : 0;
  }

  const std::size_t margin = p.nudge_min_in_lane_frames;
  std::size_t count = 0;
  std::size_t t = 0;
  while (t < n) {
    if (!out_of_lane[t]) {
      ++t;
      continue;
    }
    const std::size_t a = t;
    while (t < n && out_of_lane[t]) ++t;
    const std::size_t b = t;  // exclusive
    if (a < margin || b + margin > n) continue;
    const std::size_t lane = stable[a];
    bool bounded = true;
    for (std::size_t k = a - margin; k < b + margin && bounded; ++k) {
      if (stable[k] != lane) bounded = false;
      if ((k < a || k >= b) && out_of_lane[k]) bounded = false;
    }
    if (!bounded) continue;
    std::vector<Vec2> path;
    for (std::size_t k = a; k < b; ++k) path.push_back(s.frames[k].ego_pose.position());
    path = geometry::dedupe_consecutive(path);
    bool object_near = false;
    for (std::size_t k = a; k < b && !object_near; ++k) {
      for (const auto& d : s.frames[k].detections) {
        if (geometry::point_points_distance(d.center, path) < p.nudge_object_dist) {
          object_near = true;
          break;
        }
      }
    }
    if (object_near) ++count;
  }
  return count;
}

SdvFeatures sdv_features(const Snippet& s, const MapIndex& index, const MeasureParams& p) {
  SdvFeatures out;
  const auto motion = sdv_path_speed(s, p.path_waypoints);
  out.sdv_path = motion.path_complexity;
  out.sdv_speed_var = motion.speed_variance;
  const auto route = route_events(s, index, p);
  out.valid = route.valid;
  const auto inter = interactions(s, index, route, p.near_dist, p.horizon);
  out.near_path_static = static_cast<double>(inter.near_path_static);
  out.near_path_dynamic = static_cast<double>(inter.near_path_dynamic);
  if (!route.valid) return out;
  out.lane_changes = static_cast<double>(route.lane_changes);
  out.turns = static_cast<double>(route.turns);
  out.controls_on_route = static_cast<double>(route.controls_on_route);
  out.conflict_traversals = static_cast<double>(inter.conflict_traversals);
  out.conflict_reachable = static_cast<double>(inter.conflict_reachable);
  out.nudges = static_cast<double>(detect_nudges(s, index, route, p));
  return out;
}

}  // namespace curator
