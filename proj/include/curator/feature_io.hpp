#pragma once

#include <filesystem>

#include "curator/features.hpp"
#include "curator/pool_io.hpp"

namespace curator {

// A feature dump is a directory holding three files:
//   snippet_features.jsonl  header, then one record per snippet:
//     {"record":"snippet","snippet_id","log_id","frame_range":[s,e],
//      "rankable":bool,"values":[F numbers]}
//   frame_features.jsonl    header, then one record per snippet:
//     {"record":"frames","snippet_id","frame_indices":[...],"values":[[D numbers],...]}
//   normalization.json      {"schema_version","snippet":{...},"frame":{...}}
// Headers carry the feature names so a reader can reject a mismatched schema.

inline constexpr const char* kSnippetFeaturesFile = "snippet_features.jsonl";
inline constexpr const char* kFrameFeaturesFile = "frame_features.jsonl";
inline constexpr const char* kNormalizationFile = "normalization.json";

/// Feature schema document: name, unit, group and index of every entry of
/// both vectors.
Json schema_json();

Json to_json(const NormalizationStats& st);
NormalizationStats normalization_from_json(const Json& j);

void save_features(const FeatureTable& table, const std::filesystem::path& dir);

/// Throws InputError on missing files, schema mismatch or non-finite values.
FeatureTable load_features(const std::filesystem::path& dir);

}  // namespace curator
