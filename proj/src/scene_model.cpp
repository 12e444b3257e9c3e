#include "curator/scene_model.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

namespace curator {

std::string_view to_string(ActorClass c) {
  switch (c) {
    case ActorClass::kVehicle: return "vehicle";
    case ActorClass::kPedestrian: return "pedestrian";
    case ActorClass::kBicyclist: return "bicyclist";
    case ActorClass::kUnknown: break;
  }
  return "unknown";
}

ActorClass actor_class_from_string(std::string_view s) {
  if (s == "vehicle") return ActorClass::kVehicle;
  if (s == "pedestrian") return ActorClass::kPedestrian;
  if (s == "bicyclist") return ActorClass::kBicyclist;
  return ActorClass::kUnknown;
}

std::string_view to_string(TurnTag t) {
  switch (t) {
    case TurnTag::kLeft: return "left";
    case TurnTag::kRight: return "right";
    case TurnTag::kStraight: break;
  }
  return "straight";
}

std::optional<TurnTag> turn_tag_from_string(std::string_view s) {
  if (s == "straight") return TurnTag::kStraight;
  if (s == "left") return TurnTag::kLeft;
  if (s == "right") return TurnTag::kRight;
  return std::nullopt;
}

std::string_view to_string(ControlKind k) {
  switch (k) {
    case ControlKind::kStopSign: return "stop_sign";
    case ControlKind::kYieldSign: return "yield_sign";
    case ControlKind::kTrafficLight: break;
  }
  return "traffic_light";
}

std::optional<ControlKind> control_kind_from_string(std::string_view s) {
  if (s == "traffic_light") return ControlKind::kTrafficLight;
  if (s == "stop_sign") return ControlKind::kStopSign;
  if (s == "yield_sign") return ControlKind::kYieldSign;
  return std::nullopt;
}

std::optional<std::size_t> SceneMap::lane_index(std::string_view id) const {
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    if (lanes[i].id == id) return i;
  }
  return std::nullopt;
}

bool overlap(const Snippet& a, const Snippet& b) {
  return a.log_id == b.log_id && a.frame_range.intersects(b.frame_range);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const auto& f = findings[i];
    if (i) os << "; ";
    os << f.subject << ": " << f.rule << " (" << f.detail << ")";
  }
  return os.str();
}

namespace {

// Collects at most one finding per rule, remembering the first occurrence
// and how many times the rule fired.
class RuleTally {
 public:
  explicit RuleTally(std::string subject) : subject_(std::move(subject)) {}

  void hit(const std::string& rule, const std::string& first_detail) {
    auto [it, inserted] = counts_.try_emplace(rule, Entry{first_detail, 0});
    if (inserted) order_.push_back(rule);
    ++it->second.count;
  }

  void flush(ValidationReport& report) const {
    for (const auto& rule : order_) {
      const auto& e = counts_.at(rule);
      std::string detail = e.first;
      if (e.count > 1) detail += " (+" + std::to_string(e.count - 1) + " more)";
      report.findings.push_back({subject_, rule, std::move(detail)});
    }
  }

 private:
  struct Entry {
    std::string first;
    std::size_t count;
  };
  std::string subject_;
  std::vector<std::string> order_;
  std::unordered_map<std::string, Entry> counts_;
};

bool finite(double v) { return std::isfinite(v); }

}  // namespace

ValidationReport validate_snippet(const Snippet& s, std::size_t expected_length) {
  ValidationReport report;
  RuleTally tally(s.snippet_id.empty() ? std::string("<unnamed>") : s.snippet_id);

  if (s.snippet_id.empty()) tally.hit("snippet id", "empty snippet_id");
  if (s.log_id.empty()) tally.hit("log id", "empty log_id");
  if (s.frames.size() != expected_length) {
    tally.hit("frame count", "has " + std::to_string(s.frames.size()) + " frames, expected " +
                                 std::to_string(expected_length));
  }
  if (s.frame_range.end < s.frame_range.start ||
      s.frame_range.length() != static_cast<std::int64_t>(expected_length)) {
    tally.hit("frame range", "range [" + std::to_string(s.frame_range.start) + "," +
                                 std::to_string(s.frame_range.end) + "] does not span " +
                                 std::to_string(expected_length) + " frames");
  }

  std::unordered_map<std::string, ActorClass> track_class;
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    const Frame& f = s.frames[i];
    const std::string at = "frame " + std::to_string(i);
    if (f.index != i) tally.hit("frame index", at + " carries index " + std::to_string(f.index));
    if (i > 0 && !(f.timestamp > s.frames[i - 1].timestamp)) {
      tally.hit("timestamps", at + " timestamp not after previous frame");
    }
    const auto& p = f.ego_pose;
    if (!finite(p.x) || !finite(p.y) || !finite(f.timestamp) || !finite(f.geo.lat) ||
        !finite(f.geo.lon)) {
      tally.hit("finite values", at + " ego pose, time or geo not finite");
    }
    if (!(p.heading >= -std::numbers::pi && p.heading < std::numbers::pi)) {
      tally.hit("heading range", at + " heading outside [-pi, pi)");
    }
    std::set<std::string> seen;
    for (const auto& d : f.detections) {
      const std::string who = at + " track " + d.track_id;
      if (d.actor_class == ActorClass::kUnknown) tally.hit("detection class", who + " has unknown class");
      if (!(d.length > 0.0) || !(d.width > 0.0)) tally.hit("detection size", who + " has non-positive size");
      if (!(d.speed >= 0.0) || !finite(d.speed)) tally.hit("detection speed", who + " has negative speed");
      if (!finite(d.center.x) || !finite(d.center.y) || !finite(d.yaw)) {
        tally.hit("finite values", who + " has non-finite geometry");
      }
      if (!seen.insert(d.track_id).second) tally.hit("track repeated", who + " appears twice");
      auto [it, inserted] = track_class.try_emplace(d.track_id, d.actor_class);
      if (!inserted && it->second != d.actor_class) {
        tally.hit("track class", who + " changes class within the snippet");
      }
    }
  }
  tally.flush(report);
  return report;
}

ValidationReport validate_map(const SceneMap& m) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& lane : m.lanes) {
    if (!ids.insert(lane.id).second) {
      report.findings.push_back({lane.id, "duplicate lane id", "lane id used twice"});
    }
  }
  auto resolves = [&](const std::string& id) { return ids.count(id) > 0; };
  for (const auto& lane : m.lanes) {
    const auto pts = geometry::dedupe_consecutive(lane.centerline);
    if (pts.size() < 2) {
      report.findings.push_back({lane.id, "lane centerline", "fewer than 2 distinct points"});
    }
    for (const auto& succ : lane.successors) {
      if (!resolves(succ)) report.findings.push_back({lane.id, "dangling reference", "successor " + succ});
    }
    for (const auto* nb : {&lane.left_neighbor, &lane.right_neighbor}) {
      if (*nb && !resolves(**nb)) {
        report.findings.push_back({lane.id, "dangling reference", "neighbor " + **nb});
      }
    }
    if (lane.width && !(*lane.width > 0.0)) {
      report.findings.push_back({lane.id, "lane width", "width must be positive"});
    }
  }
  for (const auto& x : m.intersections) {
    if (!geometry::is_simple_polygon(x.polygon)) {
      report.findings.push_back({x.id, "simple polygon", "intersection polygon not simple"});
    }
    if (x.incoming_roads < 0) {
      report.findings.push_back({x.id, "intersection roads", "negative road count"});
    }
  }
  for (const auto& c : m.crosswalks) {
    if (!geometry::is_simple_polygon(c.polygon)) {
      report.findings.push_back({c.id, "simple polygon", "crosswalk polygon not simple"});
    }
  }
  for (const auto& c : m.traffic_controls) {
    for (const auto& lane : c.governed_lanes) {
      if (!resolves(lane)) report.findings.push_back({c.id, "dangling reference", "governed lane " + lane});
    }
  }
  return report;
}

ValidationReport validate_pool(const SnippetPool& pool) {
  ValidationReport report = validate_map(pool.map);
  std::set<std::string> ids;
  for (const auto& s : pool.snippets) {
    if (!ids.insert(s.snippet_id).second) {
      report.findings.push_back({s.snippet_id, "duplicate id", "snippet_id used twice"});
    }
    auto r = validate_snippet(s, pool.snippet_length);
    report.findings.insert(report.findings.end(), r.findings.begin(), r.findings.end());
  }
  return report;
}

std::map<std::string, double> track_mean_speeds(const Snippet& s) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& f : s.frames) {
    for (const auto& d : f.detections) {
      auto& [sum, n] = acc[d.track_id];
      sum += d.speed;
      ++n;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [id, v] : acc) out.emplace(id, v.first / static_cast<double>(v.second));
  return out;
}

}  // namespace curator
