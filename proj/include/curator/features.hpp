#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curator/complexity_infra.hpp"
#include "curator/complexity_sdv.hpp"
#include "curator/complexity_traffic.hpp"
#include "curator/map_index.hpp"
#include "curator/params.hpp"
#include "curator/scene_model.hpp"

namespace curator {

struct FeatureInfo {
  std::string_view name;
  std::string_view unit;
  std::string_view group;  ///< "infra", "traffic", "sdv" or "frame"
};

/// Snippet vector: infra (11), traffic (7), sdv (10) measures in this order.
inline constexpr std::size_t kSnippetDim = 28;

/// Frame vector: detection counts, class term, ego curvature and speed,
/// intersection flag, then latitude and longitude as the last two entries.
inline constexpr std::size_t kFrameDim = 10;

std::span<const FeatureInfo> snippet_schema();
std::span<const FeatureInfo> frame_schema();

/// Index of a snippet feature by name, or throws InputError.
std::size_t snippet_feature_index(std::string_view name);

struct FeatureVector {
  std::string snippet_id;
  std::vector<double> values;  ///< kSnippetDim entries in schema order
  bool rankable = true;        ///< false when the ego could not be map-matched
};

struct FrameFeature {
  std::string snippet_id;
  std::size_t frame_index = 0;
  std::vector<double> values;  ///< kFrameDim entries in schema order
};

FeatureVector assemble_snippet_vector(std::string snippet_id, const InfraFeatures& infra,
                                      const TrafficFeatures& traffic, const SdvFeatures& sdv);

/// One vector per frame of the snippet.
std::vector<FrameFeature> assemble_frame_vectors(const Snippet& s, const MapIndex& index,
                                                 const MeasureParams& p);

/// Per-dimension pool mean and population standard deviation.
struct NormalizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<bool> zero_std;

  [[nodiscard]] std::size_t dimension() const noexcept { return mean.size(); }
};

/// Throws DomainError for fewer than two rows or ragged rows.
NormalizationStats fit_normalization(std::span<const std::vector<double>> rows);
NormalizationStats fit_normalization(std::span<const FeatureVector> vectors);
NormalizationStats fit_normalization(std::span<const FrameFeature> frames);

/// z-score each dimension; zero-std dimensions pass through unchanged.
/// Apply exactly once to raw values.
std::vector<double> apply_normalization(std::span<const double> values,
                                        const NormalizationStats& stats);

/// Measures and frame vectors for one snippet, with the fields selection
/// needs for overlap checks.
struct SnippetFeatures {
  std::string log_id;
  FrameRange frame_range;
  FeatureVector vector;
  std::vector<FrameFeature> frames;
};

struct FeatureTable {
  std::vector<SnippetFeatures> snippets;  ///< ascending snippet id
  NormalizationStats snippet_stats;
  NormalizationStats frame_stats;
};

SnippetFeatures score_snippet(const Snippet& s, const MapIndex& index, const MeasureParams& p);

/// Scores every snippet on `jobs` workers and fits normalization over the
/// pool. Output does not depend on pool order or worker count.
FeatureTable score_pool(const SnippetPool& pool, const MeasureParams& p, std::size_t jobs);

}  // namespace curator
