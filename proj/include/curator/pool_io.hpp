#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "curator/scene_model.hpp"

namespace curator {

using Json = nlohmann::json;

// Pool file: newline-delimited JSON. Line 1 is a header record
//   {"record":"header","schema_version":1,"map":"<relative path>",
//    "snippet_length":250,"frame_rate_hz":10}
// followed by one {"record":"snippet",...} object per line. The map is a
// single JSON document in the sidecar file named by the header.

Json to_json(const Snippet& s);
Snippet snippet_from_json(const Json& j);

Json to_json(const SceneMap& m);
SceneMap map_from_json(const Json& j);

SceneMap load_map(const std::filesystem::path& path);

/// Reads and validates a pool. Throws ParseError with the offending line, or
/// InputError naming the snippet and rule that was broken.
SnippetPool load_pool(const std::filesystem::path& path);

/// Writes the pool file and its map sidecar (named by pool.map_path, or
/// "map.json" when empty) next to it. Canonical: sorted keys, shortest
/// round-trip floats.
void save_pool(const SnippetPool& pool, const std::filesystem::path& path);

/// Serialized pool text, header first, one snippet per line.
std::string pool_to_ndjson(const SnippetPool& pool);

/// Write via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace curator
