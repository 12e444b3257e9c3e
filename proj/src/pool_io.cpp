#include "curator/pool_io.hpp"

#include <fstream>
#include <sstream>

#include "curator/error.hpp"

namespace curator {

namespace fs = std::filesystem;

namespace {

Json point(Vec2 p) { return Json::array({p.x, p.y}); }

Vec2 point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json points(const std::vector<Vec2>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(point(p));
  return out;
}

std::vector<Vec2> points_from(const Json& j) {
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(point_from(p));
  return out;
}

Json optional_id(const std::optional<std::string>& id) { return id ? Json(*id) : Json(nullptr); }

std::optional<std::string> optional_id_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

void check_schema_version(const Json& j) {
  if (!j.contains("schema_version")) throw InputError("missing schema_version");
  const int v = j.at("schema_version").get<int>();
  if (v != kSchemaVersion) {
    throw InputError("unsupported schema_version " + std::to_string(v));
  }
}

}  // namespace

Json to_json(const Snippet& s) {
  Json frames = Json::array();
  for (const auto& f : s.frames) {
    Json dets = Json::array();
    for (const auto& d : f.detections) {
      dets.push_back({{"track_id", d.track_id},
                      {"class", std::string(to_string(d.actor_class))},
                      {"center", point(d.center)},
                      {"yaw", d.yaw},
                      {"size", Json::array({d.length, d.width})},
                      {"speed", d.speed}});
    }
    frames.push_back({{"index", f.index},
                      {"timestamp", f.timestamp},
                      {"ego_pose", Json::array({f.ego_pose.x, f.ego_pose.y, f.ego_pose.heading})},
                      {"geo", Json::array({f.geo.lat, f.geo.lon})},
                      {"detections", std::move(dets)}});
  }
  return {{"record", "snippet"},
          {"snippet_id", s.snippet_id},
          {"log_id", s.log_id},
          {"frame_range", Json::array({s.frame_range.start, s.frame_range.end})},
          {"frames", std::move(frames)}};
}

Snippet snippet_from_json(const Json& j) {
  Snippet s;
  s.snippet_id = j.at("snippet_id").get<std::string>();
  s.log_id = j.at("log_id").get<std::string>();
  const auto& range = j.at("frame_range");
  if (!range.is_array() || range.size() != 2) throw InputError("frame_range must be [start, end]");
  s.frame_range = {range[0].get<std::int64_t>(), range[1].get<std::int64_t>()};
  for (const auto& jf : j.at("frames")) {
    Frame f;
    f.index = jf.at("index").get<std::size_t>();
    f.timestamp = jf.at("timestamp").get<double>();
    const auto& pose = jf.at("ego_pose");
    if (!pose.is_array() || pose.size() != 3) throw InputError("ego_pose must be [x, y, heading]");
    f.ego_pose = {pose[0].get<double>(), pose[1].get<double>(), pose[2].get<double>()};
    const auto& geo = jf.at("geo");
    if (!geo.is_array() || geo.size() != 2) throw InputError("geo must be [lat, lon]");
    f.geo = {geo[0].get<double>(), geo[1].get<double>()};
    for (const auto& jd : jf.at("detections")) {
      Detection d;
      d.track_id = jd.at("track_id").get<std::string>();
      d.actor_class = actor_class_from_string(jd.at("class").get<std::string>());
      d.center = point_from(jd.at("center"));
      d.yaw = jd.at("yaw").get<double>();
      const auto& size = jd.at("size");
      if (!size.is_array() || size.size() != 2) throw InputError("size must be [length, width]");
      d.length = size[0].get<double>();
      d.width = size[1].get<double>();
      d.speed = jd.at("speed").get<double>();
      f.detections.push_back(std::move(d));
    }
    s.frames.push_back(std::move(f));
  }
  return s;
}

Json to_json(const SceneMap& m) {
  Json lanes = Json::array();
  for (const auto& l : m.lanes) {
    Json jl = {{"id", l.id},
               {"centerline", points(l.centerline)},
               {"successors", l.successors},
               {"left_neighbor", optional_id(l.left_neighbor)},
               {"right_neighbor", optional_id(l.right_neighbor)},
               {"is_bike_lane", l.is_bike_lane},
               {"turn", std::string(to_string(l.turn))}};
    jl["width"] = l.width ? Json(*l.width) : Json(nullptr);
    lanes.push_back(std::move(jl));
  }
  Json intersections = Json::array();
  for (const auto& x : m.intersections) {
    intersections.push_back({{"id", x.id},
                             {"polygon", points(x.polygon)},
                             {"incoming_roads", x.incoming_roads},
                             {"road_lane_counts", x.road_lane_counts}});
  }
  Json controls = Json::array();
  for (const auto& c : m.traffic_controls) {
    controls.push_back({{"id", c.id},
                        {"kind", std::string(to_string(c.kind))},
                        {"position", point(c.position)},
                        {"governed_lanes", c.governed_lanes}});
  }
  Json crosswalks = Json::array();
  for (const auto& c : m.crosswalks) crosswalks.push_back({{"id", c.id}, {"polygon", points(c.polygon)}});
  Json heights = Json::array();
  for (const auto& h : m.height_samples) heights.push_back(Json::array({h.x, h.y, h.z}));
  return {{"schema_version", kSchemaVersion},
          {"lanes", std::move(lanes)},
          {"intersections", std::move(intersections)},
          {"traffic_controls", std::move(controls)},
          {"crosswalks", std::move(crosswalks)},
          {"height_samples", std::move(heights)}};
}

SceneMap map_from_json(const Json& j) {
  check_schema_version(j);
  SceneMap m;
  for (const auto& jl : j.at("lanes")) {
    Lane l;
    l.id = jl.at("id").get<std::string>();
    l.centerline = points_from(jl.at("centerline"));
    l.successors = jl.value("successors", std::vector<std::string>{});
    l.left_neighbor = optional_id_from(jl, "left_neighbor");
    l.right_neighbor = optional_id_from(jl, "right_neighbor");
    l.is_bike_lane = jl.value("is_bike_lane", false);
    const auto tag = turn_tag_from_string(jl.value("turn", std::string("straight")));
    if (!tag) throw InputError("lane " + l.id + ": unknown turn tag");
    l.turn = *tag;
    if (jl.contains("width") && !jl.at("width").is_null()) l.width = jl.at("width").get<double>();
    m.lanes.push_back(std::move(l));
  }
  for (const auto& jx : j.value("intersections", Json::array())) {
    Intersection x;
    x.id = jx.at("id").get<std::string>();
    x.polygon = points_from(jx.at("polygon"));
    x.incoming_roads = jx.at("incoming_roads").get<int>();
    x.road_lane_counts = jx.value("road_lane_counts", std::vector<int>{});
    m.intersections.push_back(std::move(x));
  }
  for (const auto& jc : j.value("traffic_controls", Json::array())) {
    TrafficControl c;
    c.id = jc.at("id").get<std::string>();
    const auto kind = control_kind_from_string(jc.at("kind").get<std::string>());
    if (!kind) throw InputError("control " + c.id + ": unknown kind");
    c.kind = *kind;
    c.position = point_from(jc.at("position"));
    c.governed_lanes = jc.value("governed_lanes", std::vector<std::string>{});
    m.traffic_controls.push_back(std::move(c));
  }
  for (const auto& jc : j.value("crosswalks", Json::array())) {
    m.crosswalks.push_back({jc.at("id").get<std::string>(), points_from(jc.at("polygon"))});
  }
  for (const auto& h : j.value("height_samples", Json::array())) {
    if (!h.is_array() || h.size() != 3) throw InputError("height sample must be [x, y, z]");
    m.height_samples.push_back({h[0].get<double>(), h[1].get<double>(), h[2].get<double>()});
  }
  return m;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

SceneMap load_map(const fs::path& path) {
  if (!fs::exists(path)) {
    throw InputError("map file not found: " + path.string());
  }
  try {
    return map_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SnippetPool load_pool(const fs::path& path) {
  if (!fs::exists(path)) {
    throw InputError("pool file not found: " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());

  SnippetPool pool;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      const std::string record = j.at("record").get<std::string>();
      if (!have_header) {
        if (record != "header") throw InputError("first record must be the pool header");
        check_schema_version(j);
        pool.map_path = j.at("map").get<std::string>();
        pool.snippet_length = j.value("snippet_length", kDefaultSnippetLength);
        if (j.contains("frame_rate_hz") && j.at("frame_rate_hz").get<double>() != kFrameRateHz) {
          throw InputError("frame_rate_hz must be 10");
        }
        have_header = true;
      } else if (record == "snippet") {
        pool.snippets.push_back(snippet_from_json(j));
      } else {
        throw InputError("unexpected record type '" + record + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Json::exception& e) {
      throw ParseError(path.string(), line_no, e.what());
    } catch (const InputError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(path.string(), line_no, "missing pool header");

  const fs::path map_file = path.parent_path() / pool.map_path;
  pool.map = load_map(map_file);

  const auto report = validate_pool(pool);
  if (!report.ok()) {
    throw InputError("invalid pool " + path.string() + ": " + report.summary());
  }
  return pool;
}

std::string pool_to_ndjson(const SnippetPool& pool) {
  const std::string map_name = pool.map_path.empty() ? "map.json" : pool.map_path;
  std::string out = Json({{"record", "header"},
                          {"schema_version", kSchemaVersion},
                          {"map", map_name},
                          {"snippet_length", pool.snippet_length},
                          {"frame_rate_hz", kFrameRateHz}})
                        .dump();
  out += '\n';
  for (const auto& s : pool.snippets) {
    out += to_json(s).dump();
    out += '\n';
  }
  return out;
}

void save_pool(const SnippetPool& pool, const fs::path& path) {
  const std::string map_name = pool.map_path.empty() ? "map.json" : pool.map_path;
  write_file_atomic(path.parent_path() / map_name, to_json(pool.map).dump() + "\n");
  write_file_atomic(path, pool_to_ndjson(pool));
}

}  // namespace curator
