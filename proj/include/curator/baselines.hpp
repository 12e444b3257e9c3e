#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "curator/selection.hpp"

namespace curator {

/// Independent 2D Gaussian over one actor's position at one future step.
struct Gaussian2 {
  Vec2 mean;
  double sxx = 1.0;
  double sxy = 0.0;
  double syy = 1.0;

  [[nodiscard]] double det() const noexcept { return sxx * syy - sxy * sxy; }
};

struct ForecastRecord {
  std::string snippet_id;
  std::size_t frame = 0;
  std::string actor;
  std::size_t step = 0;
  Gaussian2 gaussian;
};

// Forecast file: newline-delimited JSON. Line 1 is
//   {"record":"header","schema_version":1,"kind":"forecasts"}
// then one record per (snippet, frame, actor, step):
//   {"snippet_id","frame","actor","step","mu":[x,y],"sigma":[sxx,sxy,syy]}

std::vector<ForecastRecord> load_forecasts(const std::filesystem::path& path);
std::string forecasts_to_ndjson(std::span<const ForecastRecord> records);

/// Differential entropy of one 2D Gaussian in nats: ln(2 pi e) + ln(det)/2.
/// Throws DomainError unless the covariance is symmetric positive definite.
double gaussian_entropy(const Gaussian2& g);

/// Sum of gaussian_entropy over every actor and step of one frame.
double frame_entropy(std::span<const Gaussian2> forecast);

/// Snippet uncertainty: frame entropies summed over the snippet's frames.
/// Records are summed in (snippet, frame, actor, step) order so the result
/// does not depend on file order.
std::map<std::string, double> snippet_entropies(std::span<const ForecastRecord> records);

/// Uniform random picks without replacement, rejecting snippets that
/// overlap an earlier pick. Deterministic per seed.
CurationResult random_select(std::span<const Candidate> candidates, std::size_t k,
                             std::uint64_t seed);

/// Top-k snippets by summed entropy with the same overlap rejection; ties
/// to the lower snippet id. Throws InputError when a snippet has no
/// forecast.
CurationResult al_select(std::span<const Candidate> candidates,
                         const std::map<std::string, double>& entropies, std::size_t k);

}  // namespace curator
