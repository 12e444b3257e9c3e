#include "curator/report.hpp"

#include <algorithm>
#include <map>

#include "curator/error.hpp"
#include "curator/map_index.hpp"
#include "curator/parallel.hpp"

namespace curator {

Histogram make_histogram(std::string feature, std::span<const double> values) {
  Histogram h;
  h.feature = std::move(feature);
  if (values.empty()) return h;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  h.lo = *mn;
  h.hi = *mx;
  const double width = (h.hi - h.lo) / static_cast<double>(kHistogramBins);
  for (double v : values) {
    std::size_t bin = 0;
    if (width > 0.0) {
      bin = std::min(kHistogramBins - 1, static_cast<std::size_t>((v - h.lo) / width));
    }
    ++h.counts[bin];
  }
  return h;
}

PoolReport build_report(const SnippetPool& pool, const CurationResult& result,
                        const FeatureTable* features, const MeasureParams& p, std::size_t jobs) {
  std::map<std::string, const Snippet*> by_id;
  for (const auto& s : pool.snippets) by_id[s.snippet_id] = &s;

  std::vector<std::string> ids;
  for (const auto& t : result.tasks) ids.insert(ids.end(), t.selected.begin(), t.selected.end());
  ids.insert(ids.end(), result.diverse.selected.begin(), result.diverse.selected.end());
  std::sort(ids.begin(), ids.end());

  PoolReport r;
  r.method = result.method;
  r.snippets = ids.size();
  std::vector<const Snippet*> selected;
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw InputError("result references snippet " + id + " missing from the pool");
    selected.push_back(it->second);
  }

  std::array<std::array<std::size_t, 2>, kNumActorClasses> totals{};
  for (const Snippet* s : selected) {
    const auto speeds = track_mean_speeds(*s);
    for (const auto& f : s->frames) {
      ++r.frames;
      for (const auto& d : f.detections) {
        if (d.actor_class == ActorClass::kUnknown) continue;
        const bool dynamic = !is_static_speed(speeds.at(d.track_id));
        ++totals[static_cast<std::size_t>(d.actor_class)][dynamic ? 1 : 0];
      }
    }
  }
  if (r.frames > 0) {
    for (std::size_t c = 0; c < kNumActorClasses; ++c) {
      for (std::size_t m = 0; m < 2; ++m) {
        r.class_means[c][m] = static_cast<double>(totals[c][m]) / static_cast<double>(r.frames);
      }
    }
  }

  std::map<std::string, const std::vector<double>*> rows;
  if (features != nullptr) {
    for (const auto& sf : features->snippets) rows[sf.vector.snippet_id] = &sf.vector.values;
  }
  const bool covered = std::all_of(ids.begin(), ids.end(), [&](const auto& id) { return rows.contains(id); });
  std::vector<std::vector<double>> values(selected.size());
  if (covered) {
    for (std::size_t i = 0; i < ids.size(); ++i) values[i] = *rows.at(ids[i]);
  } else if (!selected.empty()) {
    const MapIndex index(pool.map, p.path_waypoints);
    parallel_for(selected.size(), jobs, [&](std::size_t i) {
      values[i] = score_snippet(*selected[i], index, p).vector.values;
    });
  }
  const auto& schema = snippet_schema();
  for (std::size_t k = 0; k < schema.size(); ++k) {
    std::vector<double> column;
    for (const auto& v : values) column.push_back(v[k]);
    r.histograms.push_back(make_histogram(std::string(schema[k].name), column));
  }

  Json tasks = Json::array();
  for (const auto& t : result.tasks) {
    tasks.push_back({{"name", t.name}, {"budget", t.budget}, {"selected", t.selected.size()}});
  }
  r.selection = {{"tasks", tasks},
                 {"diverse", {{"budget", result.diverse.budget},
                              {"selected", result.diverse.selected.size()}}},
                 {"total", ids.size()}};
  return r;
}

Json to_json(const PoolReport& r) {
  Json means = Json::object();
  for (std::size_t c = 0; c < kNumActorClasses; ++c) {
    means[std::string(to_string(static_cast<ActorClass>(c)))] = {{"static", r.class_means[c][0]},
                                                                 {"dynamic", r.class_means[c][1]}};
  }
  Json hists = Json::array();
  for (const auto& h : r.histograms) {
    hists.push_back({{"feature", h.feature}, {"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}});
  }
  return {{"schema_version", kSchemaVersion},
          {"method", r.method},
          {"snippets", r.snippets},
          {"frames", r.frames},
          {"class_means", means},
          {"histograms", hists},
          {"selection", r.selection}};
}

std::string class_means_csv(const PoolReport& r) {
  std::string out = "class,motion,mean_per_frame\n";
  for (std::size_t c = 0; c < kNumActorClasses; ++c) {
    for (std::size_t m = 0; m < 2; ++m) {
      out += std::string(to_string(static_cast<ActorClass>(c))) + (m ? ",dynamic," : ",static,") +
             Json(r.class_means[c][m]).dump() + "\n";
    }
  }
  return out;
}

}  // namespace curator
