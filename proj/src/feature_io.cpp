#include "curator/feature_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "curator/error.hpp"

namespace fs = std::filesystem;

namespace curator {

namespace {

Json names_of(std::span<const FeatureInfo> schema) {
  Json names = Json::array();
  for (const auto& f : schema) names.push_back(std::string(f.name));
  return names;
}

Json header(std::string_view kind, std::span<const FeatureInfo> schema) {
  return {{"record", "header"},
          {"schema_version", kSchemaVersion},
          {"kind", std::string(kind)},
          {"dimension", schema.size()},
          {"names", names_of(schema)}};
}

void check_header(const Json& j, std::string_view kind, std::span<const FeatureInfo> schema) {
  if (j.at("record").get<std::string>() != "header") {
    throw InputError("first record must be the feature header");
  }
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw InputError("unsupported feature schema_version");
  }
  if (j.at("kind").get<std::string>() != kind) {
    throw InputError("expected a " + std::string(kind) + " file");
  }
  if (j.at("names") != names_of(schema)) {
    throw InputError("feature schema mismatch: names differ from the built-in schema");
  }
}

std::vector<double> finite_values(const Json& j, std::size_t dim) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != dim) {
    throw InputError("expected " + std::to_string(dim) + " values, got " + std::to_string(v.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("non-finite feature value");
  }
  return v;
}

// Calls fn(json, line_no) for every nonblank line; wraps failures with the
// file and line.
void for_each_record(const fs::path& path, const std::function<void(const Json&, std::size_t)>& fn) {
  if (!fs::exists(path)) throw InputError("feature file not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(Json::parse(line), line_no);
    } catch (const Json::exception& e) {
      throw ParseError(path.string(), line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  if (line_no == 0) throw ParseError(path.string(), 0, "empty feature file");
}

}  // namespace

Json schema_json() {
  auto describe = [](std::span<const FeatureInfo> schema) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < schema.size(); ++i) {
      arr.push_back({{"index", i},
                     {"name", std::string(schema[i].name)},
                     {"unit", std::string(schema[i].unit)},
                     {"group", std::string(schema[i].group)}});
    }
    return arr;
  };
  return {{"schema_version", kSchemaVersion},
          {"snippet_dimension", kSnippetDim},
          {"frame_dimension", kFrameDim},
          {"snippet", describe(snippet_schema())},
          {"frame", describe(frame_schema())}};
}

Json to_json(const NormalizationStats& st) {
  Json zero = Json::array();
  for (bool z : st.zero_std) zero.push_back(z);
  return {{"mean", st.mean}, {"std", st.stddev}, {"zero_std", zero}};
}

NormalizationStats normalization_from_json(const Json& j) {
  NormalizationStats st;
  st.mean = j.at("mean").get<std::vector<double>>();
  st.stddev = j.at("std").get<std::vector<double>>();
  st.zero_std = j.at("zero_std").get<std::vector<bool>>();
  if (st.stddev.size() != st.mean.size() || st.zero_std.size() != st.mean.size()) {
    throw InputError("normalization arrays differ in length");
  }
  for (std::size_t i = 0; i < st.mean.size(); ++i) {
    if (!(st.stddev[i] >= 0.0) || !std::isfinite(st.mean[i]) || !std::isfinite(st.stddev[i])) {
      throw InputError("normalization entry " + std::to_string(i) + " is invalid");
    }
  }
  return st;
}

void save_features(const FeatureTable& table, const fs::path& dir) {
  std::string snippets = header("snippet_features", snippet_schema()).dump() + "\n";
  std::string frames = header("frame_features", frame_schema()).dump() + "\n";
  for (const auto& s : table.snippets) {
    snippets += Json({{"record", "snippet"},
                      {"snippet_id", s.vector.snippet_id},
                      {"log_id", s.log_id},
                      {"frame_range", {s.frame_range.start, s.frame_range.end}},
                      {"rankable", s.vector.rankable},
                      {"values", s.vector.values}})
                    .dump();
    snippets += '\n';
    Json indices = Json::array();
    Json values = Json::array();
    for (const auto& f : s.frames) {
      indices.push_back(f.frame_index);
      values.push_back(f.values);
    }
    frames += Json({{"record", "frames"},
                    {"snippet_id", s.vector.snippet_id},
                    {"frame_indices", indices},
                    {"values", values}})
                  .dump();
    frames += '\n';
  }
  const Json norm = {{"schema_version", kSchemaVersion},
                     {"snippet", to_json(table.snippet_stats)},
                     {"frame", to_json(table.frame_stats)}};
  write_file_atomic(dir / kSnippetFeaturesFile, snippets);
  write_file_atomic(dir / kFrameFeaturesFile, frames);
  write_file_atomic(dir / kNormalizationFile, norm.dump(2) + "\n");
}

FeatureTable load_features(const fs::path& dir) {
  FeatureTable table;
  std::map<std::string, std::size_t> by_id;
  bool seen_header = false;
  for_each_record(dir / kSnippetFeaturesFile, [&](const Json& j, std::size_t) {
    if (!seen_header) {
      check_header(j, "snippet_features", snippet_schema());
      seen_header = true;
      return;
    }
    if (j.at("record").get<std::string>() != "snippet") throw InputError("expected a snippet record");
    SnippetFeatures s;
    s.vector.snippet_id = j.at("snippet_id").get<std::string>();
    s.log_id = j.at("log_id").get<std::string>();
    const auto& r = j.at("frame_range");
    if (!r.is_array() || r.size() != 2) throw InputError("frame_range must be [start, end]");
    s.frame_range = {r[0].get<std::int64_t>(), r[1].get<std::int64_t>()};
    s.vector.rankable = j.at("rankable").get<bool>();
    s.vector.values = finite_values(j.at("values"), kSnippetDim);
    if (!by_id.emplace(s.vector.snippet_id, table.snippets.size()).second) {
      throw InputError("duplicate snippet id " + s.vector.snippet_id);
    }
    table.snippets.push_back(std::move(s));
  });

  seen_header = false;
  std::vector<bool> has_frames(table.snippets.size(), false);
  for_each_record(dir / kFrameFeaturesFile, [&](const Json& j, std::size_t) {
    if (!seen_header) {
      check_header(j, "frame_features", frame_schema());
      seen_header = true;
      return;
    }
    if (j.at("record").get<std::string>() != "frames") throw InputError("expected a frames record");
    const auto id = j.at("snippet_id").get<std::string>();
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw InputError("frames for unknown snippet " + id);
    if (has_frames[it->second]) throw InputError("duplicate frames record for " + id);
    has_frames[it->second] = true;
    const auto indices = j.at("frame_indices").get<std::vector<std::size_t>>();
    const auto& values = j.at("values");
    if (!values.is_array() || values.size() != indices.size() || indices.empty()) {
      throw InputError("frames record for " + id + " is empty or ragged");
    }
    auto& frames = table.snippets[it->second].frames;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      frames.push_back({id, indices[k], finite_values(values[k], kFrameDim)});
    }
  });
  for (std::size_t i = 0; i < has_frames.size(); ++i) {
    if (!has_frames[i]) {
      throw InputError("no frame features for snippet " + table.snippets[i].vector.snippet_id);
    }
  }

  const fs::path norm_path = dir / kNormalizationFile;
  if (!fs::exists(norm_path)) throw InputError("feature file not found: " + norm_path.string());
  try {
    const Json norm = Json::parse(read_file(norm_path));
    table.snippet_stats = normalization_from_json(norm.at("snippet"));
    table.frame_stats = normalization_from_json(norm.at("frame"));
  } catch (const Json::exception& e) {
    throw InputError(norm_path.string() + ": " + e.what());
  }
  if (table.snippet_stats.dimension() != kSnippetDim || table.frame_stats.dimension() != kFrameDim) {
    throw InputError("normalization dimensions do not match the feature schema");
  }

  std::sort(table.snippets.begin(), table.snippets.end(), [](const auto& a, const auto& b) {
    return a.vector.snippet_id < b.vector.snippet_id;
  });
  return table;
}

}  // namespace curator
