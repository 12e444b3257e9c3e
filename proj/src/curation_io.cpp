#include <cmath>
#include <set>

#include "curator/error.hpp"
#include "curator/selection.hpp"

namespace curator {

namespace {

const std::set<std::string> kConfigKeys = {
    "tasks",        "k_div",          "normalization",      "dissimilarity",
    "seed",         "roi_radius",     "path_waypoints",     "near_dist",
    "horizon",      "map_match_dist", "map_match_fraction", "lane_change_min_frames",
    "lane_width_fallback", "ego_width", "nudge_min_in_lane_frames", "nudge_object_dist",
};

std::size_t count_field(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw InputError(std::string(key) + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

double positive_field(const Json& j, const char* key) {
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(key) + " must be positive");
  return v;
}

std::vector<double> parse_weights(const Json& w, const std::string& task) {
  std::vector<double> out(kSnippetDim, 0.0);
  if (w.is_array()) {
    if (w.size() != kSnippetDim) {
      throw InputError("task " + task + ": weights have " + std::to_string(w.size()) +
                       " entries, features have " + std::to_string(kSnippetDim));
    }
    for (std::size_t i = 0; i < kSnippetDim; ++i) out[i] = w[i].get<double>();
  } else if (w.is_object()) {
    for (const auto& [name, value] : w.items()) out[snippet_feature_index(name)] = value.get<double>();
  } else {
    throw InputError("task " + task + ": weights must be a list or an object");
  }
  for (double x : out) {
    if (!std::isfinite(x)) throw InputError("task " + task + ": non-finite weight");
  }
  return out;
}

Json audit_to_json(const AuditEntry& e) {
  return {{"iteration", e.iteration},
          {"phase", e.phase},
          {"task", e.task.empty() ? Json(nullptr) : Json(e.task)},
          {"snippet_id", e.snippet_id},
          {"value", e.value},
          {"eliminated", e.eliminated}};
}

Json selection_to_json(const TaskSelection& s) {
  return {{"name", s.name},
          {"budget", s.budget},
          {"selected", s.selected},
          {"shortfall", s.shortfall()}};
}

TaskSelection selection_from_json(const Json& j) {
  TaskSelection s;
  s.name = j.at("name").get<std::string>();
  s.budget = j.at("budget").get<std::size_t>();
  s.selected = j.at("selected").get<std::vector<std::string>>();
  return s;
}

}  // namespace

CurationConfig default_config() {
  CurationConfig c;
  const std::vector<double> uniform(kSnippetDim, 1.0);
  c.tasks = {{"perception", uniform, 10}, {"prediction", uniform, 10}};
  c.k_div = 10;
  return c;
}

CurationConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw InputError("unknown config key: " + key);
  }
  CurationConfig c = default_config();
  if (j.contains("tasks")) {
    c.tasks.clear();
    std::set<std::string> names;
    for (const auto& t : j.at("tasks")) {
      TaskConfig task;
      task.name = t.at("name").get<std::string>();
      if (!names.insert(task.name).second) throw InputError("duplicate task name: " + task.name);
      task.budget = count_field(t, "budget");
      task.weights = t.contains("weights") ? parse_weights(t.at("weights"), task.name)
                                           : std::vector<double>(kSnippetDim, 1.0);
      c.tasks.push_back(std::move(task));
    }
  }
  if (j.contains("k_div")) c.k_div = count_field(j, "k_div");
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("normalization")) {
    const auto v = j.at("normalization").get<std::string>();
    if (v == "zscore") {
      c.normalization = Normalization::kZScore;
    } else if (v == "none") {
      c.normalization = Normalization::kNone;
    } else {
      throw InputError("normalization must be \"zscore\" or \"none\"");
    }
  }
  if (j.contains("dissimilarity")) {
    const auto v = j.at("dissimilarity").get<std::string>();
    if (v == "directed") {
      c.dissimilarity = DissimilarityMode::kDirected;
    } else if (v == "symmetric") {
      c.dissimilarity = DissimilarityMode::kSymmetric;
    } else {
      throw InputError("dissimilarity must be \"directed\" or \"symmetric\"");
    }
  }
  auto& m = c.measure;
  if (j.contains("roi_radius")) m.roi_radius = positive_field(j, "roi_radius");
  if (j.contains("path_waypoints")) {
    m.path_waypoints = count_field(j, "path_waypoints");
    if (m.path_waypoints < 3) throw InputError("path_waypoints must be at least 3");
  }
  if (j.contains("near_dist")) m.near_dist = positive_field(j, "near_dist");
  if (j.contains("horizon")) m.horizon = positive_field(j, "horizon");
  if (j.contains("map_match_dist")) m.map_match_dist = positive_field(j, "map_match_dist");
  if (j.contains("map_match_fraction")) {
    m.map_match_fraction = positive_field(j, "map_match_fraction");
    if (m.map_match_fraction > 1.0) throw InputError("map_match_fraction must be at most 1");
  }
  if (j.contains("lane_change_min_frames")) {
    m.lane_change_min_frames = count_field(j, "lane_change_min_frames");
  }
  if (j.contains("lane_width_fallback")) {
    m.lane_width_fallback = positive_field(j, "lane_width_fallback");
  }
  if (j.contains("ego_width")) m.ego_width = positive_field(j, "ego_width");
  if (j.contains("nudge_min_in_lane_frames")) {
    m.nudge_min_in_lane_frames = count_field(j, "nudge_min_in_lane_frames");
  }
  if (j.contains("nudge_object_dist")) m.nudge_object_dist = positive_field(j, "nudge_object_dist");
  return c;
}

CurationConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw InputError("config file not found: " + path.string());
  try {
    return config_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json to_json(const CurationConfig& c) {
  Json tasks = Json::array();
  for (const auto& t : c.tasks) {
    tasks.push_back({{"name", t.name}, {"weights", t.weights}, {"budget", t.budget}});
  }
  const auto& m = c.measure;
  return {{"tasks", tasks},
          {"k_div", c.k_div},
          {"normalization", c.normalization == Normalization::kZScore ? "zscore" : "none"},
          {"dissimilarity",
           c.dissimilarity == DissimilarityMode::kDirected ? "directed" : "symmetric"},
          {"seed", c.seed},
          {"roi_radius", m.roi_radius},
          {"path_waypoints", m.path_waypoints},
          {"near_dist", m.near_dist},
          {"horizon", m.horizon},
          {"map_match_dist", m.map_match_dist},
          {"map_match_fraction", m.map_match_fraction},
          {"lane_change_min_frames", m.lane_change_min_frames},
          {"lane_width_fallback", m.lane_width_fallback},
          {"ego_width", m.ego_width},
          {"nudge_min_in_lane_frames", m.nudge_min_in_lane_frames},
          {"nudge_object_dist", m.nudge_object_dist}};
}

Json to_json(const CurationResult& r) {
  Json tasks = Json::array();
  for (const auto& t : r.tasks) tasks.push_back(selection_to_json(t));
  Json audit = Json::array();
  for (const auto& e : r.audit) audit.push_back(audit_to_json(e));
  return {{"schema_version", kSchemaVersion},
          {"method", r.method},
          {"tasks", tasks},
          {"diverse", selection_to_json(r.diverse)},
          {"audit", audit},
          {"params", r.params}};
}

CurationResult result_from_json(const Json& j) {
  const auto problems = validate_result_json(j);
  if (!problems.empty()) throw InputError("invalid result file: " + problems.front());
  CurationResult r;
  r.method = j.at("method").get<std::string>();
  for (const auto& t : j.at("tasks")) r.tasks.push_back(selection_from_json(t));
  r.diverse = selection_from_json(j.at("diverse"));
  for (const auto& a : j.at("audit")) {
    AuditEntry e;
    e.iteration = a.at("iteration").get<std::size_t>();
    e.phase = a.at("phase").get<std::string>();
    if (!a.at("task").is_null()) e.task = a.at("task").get<std::string>();
    e.snippet_id = a.at("snippet_id").get<std::string>();
    e.value = a.at("value").get<double>();
    e.eliminated = a.at("eliminated").get<std::vector<std::string>>();
    r.audit.push_back(std::move(e));
  }
  r.params = j.at("params");
  return r;
}

std::vector<std::string> validate_result_json(const Json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) return {"result must be a JSON object"};
  auto require = [&](const Json& obj, const char* key, auto pred, const char* what) {
    if (!obj.contains(key)) {
      problems.push_back(std::string("missing ") + key);
      return false;
    }
    if (!pred(obj.at(key))) {
      problems.push_back(std::string(key) + " must be " + what);
      return false;
    }
    return true;
  };
  const auto is_uint = [](const Json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  };
  const auto is_str = [](const Json& v) { return v.is_string(); };
  const auto is_arr = [](const Json& v) { return v.is_array(); };
  const auto is_obj = [](const Json& v) { return v.is_object(); };
  const auto is_num = [](const Json& v) { return v.is_number(); };
  const auto str_list = [](const Json& v) {
    return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_string(); });
  };

  if (require(j, "schema_version", is_uint, "an unsigned integer") &&
      j.at("schema_version").get<int>() != kSchemaVersion) {
    problems.push_back("unsupported schema_version");
  }
  if (require(j, "method", is_str, "a string")) {
    const auto m = j.at("method").get<std::string>();
    if (m != "curate" && m != "rn" && m != "al") problems.push_back("unknown method " + m);
  }
  require(j, "params", is_obj, "an object");

  std::set<std::string> all_selected;
  auto check_selection = [&](const Json& s) {
    if (!s.is_object()) {
      problems.push_back("selection entries must be objects");
      return;
    }
    require(s, "name", is_str, "a string");
    const bool budget_ok = require(s, "budget", is_uint, "an unsigned integer");
    const bool selected_ok = require(s, "selected", str_list, "a list of strings");
    const bool shortfall_ok = require(s, "shortfall", is_uint, "an unsigned integer");
    if (!selected_ok) return;
    for (const auto& id : s.at("selected")) {
      if (!all_selected.insert(id.get<std::string>()).second) {
        problems.push_back("snippet " + id.get<std::string>() + " selected twice");
      }
    }
    if (budget_ok && shortfall_ok) {
      const auto budget = s.at("budget").get<std::size_t>();
      const auto n = s.at("selected").size();
      if (n > budget) problems.push_back("selection exceeds its budget");
      if (s.at("shortfall").get<std::size_t>() != budget - std::min(budget, n)) {
        problems.push_back("shortfall does not match budget and selection");
      }
    }
  };
  if (require(j, "tasks", is_arr, "a list")) {
    for (const auto& t : j.at("tasks")) check_selection(t);
  }
  if (require(j, "diverse", is_obj, "an object")) check_selection(j.at("diverse"));

  if (require(j, "audit", is_arr, "a list")) {
    std::size_t expected = 1;
    std::set<std::string> audited;
    for (const auto& a : j.at("audit")) {
      if (!a.is_object()) {
        problems.push_back("audit entries must be objects");
        continue;
      }
      if (require(a, "iteration", is_uint, "an unsigned integer") &&
          a.at("iteration").get<std::size_t>() != expected) {
        problems.push_back("audit iterations must count up from 1");
      }
      ++expected;
      if (require(a, "phase", is_str, "a string")) {
        const auto p = a.at("phase").get<std::string>();
        if (p != "challenging" && p != "diverse" && p != "random" && p != "entropy") {
          problems.push_back("unknown audit phase " + p);
        }
      }
      if (!a.contains("task") || !(a.at("task").is_null() || a.at("task").is_string())) {
        problems.push_back("audit task must be a string or null");
      }
      if (require(a, "snippet_id", is_str, "a string")) audited.insert(a.at("snippet_id").get<std::string>());
      require(a, "value", is_num, "a number");
      require(a, "eliminated", str_list, "a list of strings");
    }
    if (problems.empty() && audited != all_selected) {
      problems.push_back("audit does not list exactly the selected snippets");
    }
  }
  return problems;
}

}  // namespace curator
