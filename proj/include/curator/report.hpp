#pragma once

#include <array>
#include <string>
#include <vector>

#include "curator/features.hpp"
#include "curator/selection.hpp"

namespace curator {

inline constexpr std::size_t kHistogramBins = 32;

struct Histogram {
  std::string feature;
  double lo = 0.0;
  double hi = 0.0;  ///< equal to lo when every value is the same
  std::array<std::size_t, kHistogramBins> counts{};
};

/// Label statistics of a selected set.
struct PoolReport {
  std::string method;
  std::size_t snippets = 0;
  std::size_t frames = 0;
  /// Mean detections per frame, indexed [class][0 static, 1 dynamic].
  std::array<std::array<double, 2>, kNumActorClasses> class_means{};
  std::vector<Histogram> histograms;  ///< one per snippet feature
  Json selection = Json::object();    ///< per-task budget and selected count
};

/// Values fall into 32 equal bins over [min, max]; the maximum lands in the
/// last bin.
Histogram make_histogram(std::string feature, std::span<const double> values);

/// Statistics over the snippets `result` selected. Feature histograms use
/// rows of `features` when it covers the selection and score the selected
/// snippets otherwise. Throws InputError for ids missing from the pool.
PoolReport build_report(const SnippetPool& pool, const CurationResult& result,
                        const FeatureTable* features, const MeasureParams& p, std::size_t jobs);

Json to_json(const PoolReport& r);

/// Rows of class,motion,mean_per_frame.
std::string class_means_csv(const PoolReport& r);

}  // namespace curator
