#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "curator/features.hpp"
#include "curator/scene_model.hpp"

namespace curator::testing {

inline std::vector<Vec2> circle_points(double r, std::size_t n) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return pts;
}

inline std::vector<Vec2> line_points(Vec2 a, Vec2 b, std::size_t n) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
  }
  return pts;
}

inline Lane lane(std::string id, std::vector<Vec2> pts) {
  Lane l;
  l.id = std::move(id);
  l.centerline = std::move(pts);
  return l;
}

/// Ego driving along +x at `speed` from the origin; `add` fills detections.
inline Snippet drive(std::string id, std::string log, std::int64_t start, std::size_t frames,
                     double speed,
                     const std::function<void(std::size_t, Frame&)>& add = {}) {
  Snippet s;
  s.snippet_id = std::move(id);
  s.log_id = std::move(log);
  s.frame_range = {start, start + static_cast<std::int64_t>(frames) - 1};
  for (std::size_t t = 0; t < frames; ++t) {
    Frame f;
    f.index = t;
    f.timestamp = static_cast<double>(start + static_cast<std::int64_t>(t)) / kFrameRateHz;
    f.ego_pose = {speed * static_cast<double>(t) / kFrameRateHz, 0.0, 0.0};
    f.geo = {37.0, -122.0};
    if (add) add(t, f);
    s.frames.push_back(std::move(f));
  }
  return s;
}

inline Detection detection(std::string track, ActorClass c, Vec2 at, double speed) {
  return {std::move(track), c, at, 0.0, 4.0, 2.0, speed};
}

/// Feature table built directly from vectors, for selection tests.
struct TableRow {
  std::string id;
  std::string log;
  FrameRange range;
  std::vector<double> values;                 ///< snippet vector (padded to 28)
  std::vector<std::vector<double>> frames;    ///< frame vectors (padded to 10)
  bool rankable = true;
};

inline FeatureTable make_table(const std::vector<TableRow>& rows) {
  FeatureTable t;
  for (const auto& r : rows) {
    SnippetFeatures sf;
    sf.log_id = r.log;
    sf.frame_range = r.range;
    sf.vector.snippet_id = r.id;
    sf.vector.values = r.values;
    sf.vector.values.resize(kSnippetDim, 0.0);
    sf.vector.rankable = r.rankable;
    for (std::size_t k = 0; k < r.frames.size(); ++k) {
      FrameFeature ff;
      ff.snippet_id = r.id;
      ff.frame_index = k;
      ff.values = r.frames[k];
      ff.values.resize(kFrameDim, 0.0);
      sf.frames.push_back(std::move(ff));
    }
    t.snippets.push_back(std::move(sf));
  }
  std::sort(t.snippets.begin(), t.snippets.end(), [](const auto& a, const auto& b) {
    return a.vector.snippet_id < b.vector.snippet_id;
  });
  std::vector<FeatureVector> vs;
  std::vector<FrameFeature> fs;
  for (const auto& s : t.snippets) {
    vs.push_back(s.vector);
    fs.insert(fs.end(), s.frames.begin(), s.frames.end());
  }
  if (vs.size() >= 2) t.snippet_stats = fit_normalization(std::span<const FeatureVector>(vs));
  if (fs.size() >= 2) t.frame_stats = fit_normalization(std::span<const FrameFeature>(fs));
  return t;
}

/// Fresh scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("curator_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace curator::testing
