#include "curator/features.hpp"

#include <algorithm>
#include <cmath>

#include "curator/error.hpp"
#include "curator/parallel.hpp"

namespace curator {

namespace {

constexpr std::array<FeatureInfo, kSnippetDim> kSnippetSchema{{
    {"curve_mean", "1/m", "infra"},
    {"crossing_total", "count", "infra"},
    {"at_intersection", "flag", "infra"},
    {"intersection_roads", "count", "infra"},
    {"intersection_lanes", "count", "infra"},
    {"traffic_lights", "count", "infra"},
    {"signs", "count", "infra"},
    {"bike_curve", "1/m", "infra"},
    {"bike_crossing", "count", "infra"},
    {"crosswalk_lane_overlaps", "count", "infra"},
    {"height_var", "m^2", "infra"},
    {"crowd_static", "actors/frame", "traffic"},
    {"crowd_dynamic", "actors/frame", "traffic"},
    {"class_div", "unitless", "traffic"},
    {"dist_var", "m^2", "traffic"},
    {"actor_path_mean", "1/m", "traffic"},
    {"actor_path_max", "1/m", "traffic"},
    {"speed_div", "m^2/s^2", "traffic"},
    {"sdv_path", "1/m", "sdv"},
    {"sdv_speed_var", "m^2/s^2", "sdv"},
    {"lane_changes", "count", "sdv"},
    {"turns", "count", "sdv"},
    {"controls_on_route", "count", "sdv"},
    {"near_path_static", "count", "sdv"},
    {"near_path_dynamic", "count", "sdv"},
    {"conflict_traversals", "count", "sdv"},
    {"conflict_reachable", "count", "sdv"},
    {"nudges", "count", "sdv"},
}};

constexpr std::array<FeatureInfo, kFrameDim> kFrameSchema{{
    {"count_total", "actors", "frame"},
    {"count_vehicle", "actors", "frame"},
    {"count_pedestrian", "actors", "frame"},
    {"count_bicyclist", "actors", "frame"},
    {"class_term", "unitless", "frame"},
    {"ego_abs_curvature", "1/m", "frame"},
    {"ego_speed", "m/s", "frame"},
    {"at_intersection", "flag", "frame"},
    {"lat", "deg", "frame"},
    {"lon", "deg", "frame"},
}};

// Relative threshold below which a standard deviation counts as zero; absorbs
// rounding in the mean of identical values.
constexpr double kZeroStdTolerance = 1e-12;

// |kappa| of the ego trajectory at every frame. Frames sharing a position
// share the value of that position; fewer than three distinct positions
// give zeros.
std::vector<double> ego_abs_curvature(const Snippet& s) {
  const std::size_t n = s.frames.size();
  std::vector<double> out(n, 0.0);
  std::vector<Vec2> distinct;
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const Vec2 p = s.frames[t].ego_pose.position();
    if (distinct.empty() || !(distinct.back() == p)) distinct.push_back(p);
    slot[t] = distinct.size() - 1;
  }
  if (distinct.size() < 3) return out;
  const auto profile = geometry::curvature_profile(geometry::Path::from_points(distinct));
  for (std::size_t t = 0; t < n; ++t) out[t] = std::abs(profile.kappa[slot[t]]);
  return out;
}

}  // namespace

std::span<const FeatureInfo> snippet_schema() { return kSnippetSchema; }
std::span<const FeatureInfo> frame_schema() { return kFrameSchema; }

std::size_t snippet_feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kSnippetSchema.size(); ++i) {
    if (kSnippetSchema[i].name == name) return i;
  }
  throw InputError("unknown feature name: " + std::string(name));
}

FeatureVector assemble_snippet_vector(std::string snippet_id, const InfraFeatures& infra,
                                      const TrafficFeatures& traffic, const SdvFeatures& sdv) {
  FeatureVector v;
  v.snippet_id = std::move(snippet_id);
  v.rankable = sdv.valid;
  v.values = {
      infra.curve_mean,           infra.crossing_total,      infra.at_intersection,
      infra.intersection_roads,   infra.intersection_lanes,  infra.traffic_lights,
      infra.signs,                infra.bike_curve,          infra.bike_crossing,
      infra.crosswalk_lane_overlaps, infra.height_var,
      traffic.crowd_static,       traffic.crowd_dynamic,     traffic.class_div,
      traffic.dist_var,           traffic.actor_path_mean,   traffic.actor_path_max,
      traffic.speed_div,
      sdv.sdv_path,               sdv.sdv_speed_var,         sdv.lane_changes,
      sdv.turns,                  sdv.controls_on_route,     sdv.near_path_static,
      sdv.near_path_dynamic,      sdv.conflict_traversals,   sdv.conflict_reachable,
      sdv.nudges,
  };
  return v;
}

std::vector<FrameFeature> assemble_frame_vectors(const Snippet& s, const MapIndex& index,
                                                 const MeasureParams& p) {
  const std::size_t n = s.frames.size();
  std::vector<FrameFeature> out;
  out.reserve(n);
  const auto curvature = ego_abs_curvature(s);
  const auto speeds = ego_speeds(s);
  const auto& intersections = index.map().intersections;
  for (std::size_t t = 0; t < n; ++t) {
    const Frame& f = s.frames[t];
    std::array<std::size_t, kNumActorClasses> counts{};
    std::size_t total = 0;
    for (const auto& d : f.detections) {
      if (!in_roi(d, f, p.roi_radius)) continue;
      ++total;
      if (d.actor_class != ActorClass::kUnknown) ++counts[static_cast<std::size_t>(d.actor_class)];
    }
    double speed = 0.0;
    if (!speeds.empty()) speed = t < speeds.size() ? speeds[t] : speeds.back();
    const Vec2 ego = f.ego_pose.position();
    const bool inside = std::any_of(intersections.begin(), intersections.end(),
                                    [&](const Intersection& x) {
                                      return geometry::point_in_polygon(ego, x.polygon);
                                    });
    FrameFeature ff;
    ff.snippet_id = s.snippet_id;
    ff.frame_index = f.index;
    ff.values = {
        static_cast<double>(total),
        static_cast<double>(counts[0]),
        static_cast<double>(counts[1]),
        static_cast<double>(counts[2]),
        class_diversity_term(counts),
        curvature[t],
        speed,
        inside ? 1.0 : 0.0,
        f.geo.lat,
        f.geo.lon,
    };
    out.push_back(std::move(ff));
  }
  return out;
}

NormalizationStats fit_normalization(std::span<const std::vector<double>> rows) {
  if (rows.size() < 2) throw DomainError("normalization needs at least two vectors");
  const std::size_t dim = rows.front().size();
  NormalizationStats st;
  st.mean.assign(dim, 0.0);
  st.stddev.assign(dim, 0.0);
  st.zero_std.assign(dim, false);
  for (const auto& r : rows) {
    if (r.size() != dim) throw DomainError("normalization rows differ in dimension");
    for (std::size_t j = 0; j < dim; ++j) st.mean[j] += r[j];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : st.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = r[j] - st.mean[j];
      st.stddev[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    st.stddev[j] = std::sqrt(st.stddev[j] / n);
    st.zero_std[j] = st.stddev[j] <= kZeroStdTolerance * std::max(1.0, std::abs(st.mean[j]));
  }
  return st;
}

NormalizationStats fit_normalization(std::span<const FeatureVector> vectors) {
  std::vector<std::vector<double>> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back(v.values);
  return fit_normalization(std::span<const std::vector<double>>(rows));
}

NormalizationStats fit_normalization(std::span<const FrameFeature> frames) {
  std::vector<std::vector<double>> rows;
  rows.reserve(frames.size());
  for (const auto& f : frames) rows.push_back(f.values);
  return fit_normalization(std::span<const std::vector<double>>(rows));
}

std::vector<double> apply_normalization(std::span<const double> values,
                                        const NormalizationStats& stats) {
  if (values.size() != stats.dimension()) {
    throw DomainError("vector dimension does not match normalization stats");
  }
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!stats.zero_std[j]) out[j] = (out[j] - stats.mean[j]) / stats.stddev[j];
  }
  return out;
}

SnippetFeatures score_snippet(const Snippet& s, const MapIndex& index, const MeasureParams& p) {
  SnippetFeatures out;
  out.log_id = s.log_id;
  out.frame_range = s.frame_range;
  const auto infra = infra_features(s, index, p.roi_radius);
  const auto traffic = traffic_features(s, p.roi_radius, p.path_waypoints);
  const auto sdv = sdv_features(s, index, p);
  out.vector = assemble_snippet_vector(s.snippet_id, infra, traffic, sdv);
  out.frames = assemble_frame_vectors(s, index, p);
  return out;
}

FeatureTable score_pool(const SnippetPool& pool, const MeasureParams& p, std::size_t jobs) {
  std::vector<const Snippet*> order;
  order.reserve(pool.snippets.size());
  for (const auto& s : pool.snippets) order.push_back(&s);
  std::sort(order.begin(), order.end(),
            [](const Snippet* a, const Snippet* b) { return a->snippet_id < b->snippet_id; });

  const MapIndex index(pool.map, p.path_waypoints);
  FeatureTable table;
  table.snippets.resize(order.size());
  parallel_for(order.size(), jobs,
               [&](std::size_t i) { table.snippets[i] = score_snippet(*order[i], index, p); });

  std::vector<std::vector<double>> rows;
  rows.reserve(table.snippets.size());
  for (const auto& s : table.snippets) rows.push_back(s.vector.values);
  table.snippet_stats = fit_normalization(std::span<const std::vector<double>>(rows));
  rows.clear();
  for (const auto& s : table.snippets) {
    for (const auto& f : s.frames) rows.push_back(f.values);
  }
  table.frame_stats = fit_normalization(std::span<const std::vector<double>>(rows));
  return table;
}

}  // namespace curator
