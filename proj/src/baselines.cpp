#include "curator/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <tuple>

#include "curator/error.hpp"

namespace curator {

namespace {

const double kLog2PiE = std::log(2.0 * std::numbers::pi * std::numbers::e);

// Unbiased integer in [0, bound) by rejection. Hand rolled so the sequence
// does not depend on the standard library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

CurationResult baseline_result(std::string method, std::size_t k) {
  CurationResult r;
  r.method = method;
  r.tasks.push_back({std::move(method), k, {}});
  r.diverse = {"diverse", 0, {}};
  return r;
}

void take(SelectionState& state, std::size_t i, const char* phase, double value,
          CurationResult& r) {
  AuditEntry e;
  e.iteration = r.audit.size() + 1;
  e.phase = phase;
  e.snippet_id = state.candidates()[i].snippet_id;
  e.value = value;
  e.eliminated = state.select(i);
  r.tasks.front().selected.push_back(e.snippet_id);
  r.audit.push_back(std::move(e));
}

}  // namespace

double gaussian_entropy(const Gaussian2& g) {
  const double det = g.det();
  if (!std::isfinite(det) || !(g.sxx > 0.0) || !(g.syy > 0.0) || !(det > 0.0)) {
    throw DomainError("covariance is not positive definite");
  }
  return kLog2PiE + 0.5 * std::log(det);
}

double frame_entropy(std::span<const Gaussian2> forecast) {
  double h = 0.0;
  for (const auto& g : forecast) h += gaussian_entropy(g);
  return h;
}

std::map<std::string, double> snippet_entropies(std::span<const ForecastRecord> records) {
  std::vector<const ForecastRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const ForecastRecord* a, const ForecastRecord* b) {
    return std::tie(a->snippet_id, a->frame, a->actor, a->step) <
           std::tie(b->snippet_id, b->frame, b->actor, b->step);
  });
  std::map<std::string, double> out;
  // Sum per frame first, then frames per snippet.
  std::size_t i = 0;
  while (i < sorted.size()) {
    const auto& id = sorted[i]->snippet_id;
    const std::size_t frame = sorted[i]->frame;
    std::vector<Gaussian2> frame_forecast;
    while (i < sorted.size() && sorted[i]->snippet_id == id && sorted[i]->frame == frame) {
      frame_forecast.push_back(sorted[i]->gaussian);
      ++i;
    }
    out[id] += frame_entropy(frame_forecast);
  }
  return out;
}

std::vector<ForecastRecord> load_forecasts(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw InputError("forecast file not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<ForecastRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (!have_header) {
        if (j.value("record", "") != "header" || j.value("kind", "") != "forecasts") {
          throw InputError("first record must be the forecast header");
        }
        if (j.at("schema_version").get<int>() != kSchemaVersion) {
          throw InputError("unsupported schema_version");
        }
        have_header = true;
        continue;
      }
      ForecastRecord r;
      r.snippet_id = j.at("snippet_id").get<std::string>();
      r.frame = j.at("frame").get<std::size_t>();
      r.actor = j.at("actor").get<std::string>();
      r.step = j.at("step").get<std::size_t>();
      const auto mu = j.at("mu").get<std::vector<double>>();
      const auto sigma = j.at("sigma").get<std::vector<double>>();
      if (mu.size() != 2) throw InputError("mu must be [x, y]");
      if (sigma.size() != 3) throw InputError("sigma must be [sxx, sxy, syy]");
      r.gaussian = {{mu[0], mu[1]}, sigma[0], sigma[1], sigma[2]};
      try {
        gaussian_entropy(r.gaussian);
      } catch (const DomainError& e) {
        throw InputError(e.what());
      }
      out.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw ParseError(path.string(), line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(path.string(), line_no, "missing forecast header");
  return out;
}

std::string forecasts_to_ndjson(std::span<const ForecastRecord> records) {
  std::string out =
      Json({{"record", "header"}, {"schema_version", kSchemaVersion}, {"kind", "forecasts"}}).dump();
  out += '\n';
  for (const auto& r : records) {
    const auto& g = r.gaussian;
    out += Json({{"snippet_id", r.snippet_id},
                 {"frame", r.frame},
                 {"actor", r.actor},
                 {"step", r.step},
                 {"mu", {g.mean.x, g.mean.y}},
                 {"sigma", {g.sxx, g.sxy, g.syy}}})
               .dump();
    out += '\n';
  }
  return out;
}

CurationResult random_select(std::span<const Candidate> candidates, std::size_t k,
                             std::uint64_t seed) {
  CurationResult r = baseline_result("rn", k);
  r.params = {{"seed", seed}, {"k", k}, {"pool_size", candidates.size()}};
  if (k == 0) return r;
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  SelectionState state(candidates);
  for (std::size_t i : order) {
    if (r.tasks.front().selected.size() == k) break;
    if (state.feasible(i)) take(state, i, "random", 0.0, r);
  }
  return r;
}

CurationResult al_select(std::span<const Candidate> candidates,
                         const std::map<std::string, double>& entropies, std::size_t k) {
  CurationResult r = baseline_result("al", k);
  r.params = {{"k", k}, {"pool_size", candidates.size()}};
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto it = entropies.find(candidates[i].snippet_id);
    if (it == entropies.end()) {
      throw InputError("no forecast for snippet " + candidates[i].snippet_id);
    }
    ranked.emplace_back(it->second, i);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  SelectionState state(candidates);
  for (const auto& [h, i] : ranked) {
    if (r.tasks.front().selected.size() == k) break;
    if (state.feasible(i)) take(state, i, "entropy", h, r);
  }
  return r;
}

}  // namespace curator
