#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curator/geometry.hpp"

namespace curator {

using geometry::Polygon;
using geometry::Vec2;

/// Frames are recorded at a fixed 10 Hz; 250 frames make a 25 s snippet.
inline constexpr double kFrameRateHz = 10.0;
inline constexpr std::size_t kDefaultSnippetLength = 250;
inline constexpr int kSchemaVersion = 1;

/// Actors whose snippet-mean speed is below this are static (m/s).
inline constexpr double kStaticSpeedThreshold = 0.5;

enum class ActorClass : std::uint8_t { kVehicle, kPedestrian, kBicyclist, kUnknown };
inline constexpr std::size_t kNumActorClasses = 3;

std::string_view to_string(ActorClass c);
ActorClass actor_class_from_string(std::string_view s);

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  ///< radians in [-pi, pi)

  [[nodiscard]] Vec2 position() const noexcept { return {x, y}; }
};

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

struct Detection {
  std::string track_id;
  ActorClass actor_class = ActorClass::kVehicle;
  Vec2 center;
  double yaw = 0.0;
  double length = 0.0;
  double width = 0.0;
  double speed = 0.0;
};

struct Frame {
  std::size_t index = 0;
  double timestamp = 0.0;
  Pose2 ego_pose;
  GeoPoint geo;
  std::vector<Detection> detections;
};

/// Inclusive frame interval [start, end] inside the source log.
struct FrameRange {
  std::int64_t start = 0;
  std::int64_t end = 0;

  [[nodiscard]] std::int64_t length() const noexcept { return end - start + 1; }
  [[nodiscard]] bool intersects(const FrameRange& o) const noexcept {
    return start <= o.end && o.start <= end;
  }
  bool operator==(const FrameRange&) const noexcept = default;
};

struct Snippet {
  std::string snippet_id;
  std::string log_id;
  FrameRange frame_range;
  std::vector<Frame> frames;
};

enum class TurnTag : std::uint8_t { kStraight, kLeft, kRight };
std::string_view to_string(TurnTag t);
std::optional<TurnTag> turn_tag_from_string(std::string_view s);

struct Lane {
  std::string id;
  std::vector<Vec2> centerline;
  std::vector<std::string> successors;
  std::optional<std::string> left_neighbor;
  std::optional<std::string> right_neighbor;
  bool is_bike_lane = false;
  TurnTag turn = TurnTag::kStraight;
  std::optional<double> width;  ///< meters; consumers fall back to a default
};

struct Intersection {
  std::string id;
  Polygon polygon;
  int incoming_roads = 0;
  std::vector<int> road_lane_counts;
};

enum class ControlKind : std::uint8_t { kTrafficLight, kStopSign, kYieldSign };
std::string_view to_string(ControlKind k);
std::optional<ControlKind> control_kind_from_string(std::string_view s);

struct TrafficControl {
  std::string id;
  ControlKind kind = ControlKind::kTrafficLight;
  Vec2 position;
  std::vector<std::string> governed_lanes;
};

struct Crosswalk {
  std::string id;
  Polygon polygon;
};

struct HeightSample {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct SceneMap {
  std::vector<Lane> lanes;
  std::vector<Intersection> intersections;
  std::vector<TrafficControl> traffic_controls;
  std::vector<Crosswalk> crosswalks;
  std::vector<HeightSample> height_samples;

  /// Index into `lanes`, or nullopt.
  [[nodiscard]] std::optional<std::size_t> lane_index(std::string_view id) const;
};

struct SnippetPool {
  std::vector<Snippet> snippets;
  SceneMap map;
  std::size_t snippet_length = kDefaultSnippetLength;
  std::string map_path;  ///< sidecar path as written in the pool header
};

/// True iff both snippets come from the same log and their frame ranges
/// intersect.
bool overlap(const Snippet& a, const Snippet& b);

struct Finding {
  std::string subject;  ///< snippet id, lane id, ...
  std::string rule;
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> findings;

  [[nodiscard]] bool ok() const noexcept { return findings.empty(); }
  [[nodiscard]] std::string summary() const;
};

/// Lists every invariant breach of one snippet. Empty report means valid.
ValidationReport validate_snippet(const Snippet& s,
                                  std::size_t expected_length = kDefaultSnippetLength);

/// Lane/polygon/reference checks for a map.
ValidationReport validate_map(const SceneMap& m);

/// Snippet, map and pool-level (unique id) checks together.
ValidationReport validate_pool(const SnippetPool& pool);

/// Snippet-mean Detection.speed of every track, keyed by track id.
std::map<std::string, double> track_mean_speeds(const Snippet& s);

inline bool is_static_speed(double mean_speed) { return mean_speed < kStaticSpeedThreshold; }

}  // namespace curator
