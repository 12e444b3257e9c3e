#include "curator/selection.hpp"

#include <algorithm>
#include <cmath>

#include "curator/error.hpp"
#include "curator/parallel.hpp"

namespace curator {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double squared_distance(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return acc;
}

double pair_dissimilarity_sq(const FrameMatrix& a, const FrameMatrix& b, DissimilarityMode mode,
                             double stop_at) {
  const double forward = directed_dissimilarity_sq(a, b, stop_at);
  if (mode == DissimilarityMode::kDirected || forward >= stop_at) return forward;
  return std::max(forward, directed_dissimilarity_sq(b, a, stop_at));
}

// Strict "better" ordering for picks: larger value, then smaller index
// (candidates are sorted by id, so index order is id order).
bool better(double va, std::size_t ia, double vb, std::size_t ib) {
  return va > vb || (va == vb && ia < ib);
}

}  // namespace

FrameMatrix to_matrix(std::span<const FrameFeature> frames) {
  FrameMatrix m;
  m.rows = frames.size();
  m.dim = frames.empty() ? 0 : frames.front().values.size();
  m.data.reserve(m.rows * m.dim);
  for (const auto& f : frames) {
    if (f.values.size() != m.dim) throw DomainError("frame vectors differ in dimension");
    m.data.insert(m.data.end(), f.values.begin(), f.values.end());
  }
  return m;
}

double directed_dissimilarity_sq(const FrameMatrix& a, const FrameMatrix& b, double stop_at) {
  if (a.rows == 0 || b.rows == 0) throw DomainError("dissimilarity of a snippet without frames");
  if (a.dim != b.dim) throw DomainError("frame vectors differ in dimension");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* ak = a.row(k);
    double nearest = kInf;
    for (std::size_t l = 0; l < b.rows; ++l) {
      nearest = std::min(nearest, squared_distance(ak, b.row(l), a.dim));
      // This frame can no longer raise the maximum.
      if (nearest <= worst) break;
    }
    worst = std::max(worst, nearest);
    if (worst >= stop_at) return worst;
  }
  return worst;
}

double dissimilarity(std::span<const FrameFeature> a, std::span<const FrameFeature> b) {
  return std::sqrt(directed_dissimilarity_sq(to_matrix(a), to_matrix(b)));
}

double dissimilarity(const FrameMatrix& a, const FrameMatrix& b, DissimilarityMode mode) {
  return std::sqrt(pair_dissimilarity_sq(a, b, mode, kInf));
}

double score(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw DomainError("score: vector has " + std::to_string(values.size()) + " entries, weights " +
                      std::to_string(weights.size()));
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) acc += values[j] * weights[j];
  return acc;
}

std::vector<Candidate> make_candidates(const FeatureTable& table, Normalization mode) {
  std::vector<Candidate> out;
  out.reserve(table.snippets.size());
  for (const auto& s : table.snippets) {
    Candidate c;
    c.snippet_id = s.vector.snippet_id;
    c.log_id = s.log_id;
    c.frame_range = s.frame_range;
    c.rankable = s.vector.rankable;
    c.raw = s.vector.values;
    if (mode == Normalization::kZScore) {
      c.normalized = apply_normalization(s.vector.values, table.snippet_stats);
      std::vector<FrameFeature> frames = s.frames;
      for (auto& f : frames) f.values = apply_normalization(f.values, table.frame_stats);
      c.frames = to_matrix(frames);
    } else {
      c.normalized = s.vector.values;
      c.frames = to_matrix(s.frames);
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const Candidate& a, const Candidate& b) { return a.snippet_id < b.snippet_id; });
  return out;
}

SelectionState::SelectionState(std::span<const Candidate> candidates)
    : candidates_(candidates),
      selected_(candidates.size(), 0),
      blocked_(candidates.size(), 0) {}

std::vector<std::string> SelectionState::select(std::size_t i) {
  selected_[i] = 1;
  picks_.push_back(i);
  std::vector<std::string> eliminated;
  const Candidate& c = candidates_[i];
  for (std::size_t j = 0; j < candidates_.size(); ++j) {
    if (!feasible(j)) continue;
    const Candidate& o = candidates_[j];
    if (o.log_id == c.log_id && o.frame_range.intersects(c.frame_range)) {
      blocked_[j] = 1;
      eliminated.push_back(o.snippet_id);
    }
  }
  return eliminated;
}

void select_challenging(SelectionState& state, std::span<const TaskConfig> tasks,
                        CurationResult& result) {
  const auto cands = state.candidates();
  struct Queue {
    std::vector<std::pair<double, std::size_t>> order;  // (score, index), best first
    std::size_t next = 0;
  };
  std::vector<Queue> queues(tasks.size());
  const std::size_t first_task = result.tasks.size();
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    result.tasks.push_back({tasks[t].name, tasks[t].budget, {}});
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (cands[i].rankable) queues[t].order.emplace_back(score(cands[i].raw, tasks[t].weights), i);
    }
    std::sort(queues[t].order.begin(), queues[t].order.end(), [](const auto& a, const auto& b) {
      return better(a.first, a.second, b.first, b.second);
    });
  }

  std::vector<bool> exhausted(tasks.size(), false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      auto& sel = result.tasks[first_task + t];
      if (exhausted[t] || sel.selected.size() >= tasks[t].budget) continue;
      auto& q = queues[t];
      while (q.next < q.order.size() && !state.feasible(q.order[q.next].second)) ++q.next;
      if (q.next == q.order.size()) {
        exhausted[t] = true;
        continue;
      }
      const auto [value, i] = q.order[q.next++];
      AuditEntry e;
      e.iteration = result.audit.size() + 1;
      e.phase = "challenging";
      e.task = tasks[t].name;
      e.snippet_id = cands[i].snippet_id;
      e.value = value;
      e.eliminated = state.select(i);
      sel.selected.push_back(cands[i].snippet_id);
      result.audit.push_back(std::move(e));
      progress = true;
    }
  }
}

void select_diverse(SelectionState& state, std::size_t k_div, DissimilarityMode mode,
                    std::size_t jobs, CurationResult& result) {
  result.diverse = {"diverse", k_div, {}};
  if (k_div == 0) return;
  const auto cands = state.candidates();
  const std::size_t n = cands.size();

  auto record = [&](std::size_t i, double value) {
    AuditEntry e;
    e.iteration = result.audit.size() + 1;
    e.phase = "diverse";
    e.snippet_id = cands[i].snippet_id;
    e.value = value;
    e.eliminated = state.select(i);
    result.diverse.selected.push_back(cands[i].snippet_id);
    result.audit.push_back(std::move(e));
  };

  if (state.picks().empty()) {
    std::size_t best = n;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!state.feasible(i)) continue;
      double sq = 0.0;
      for (double v : cands[i].normalized) sq += v * v;
      const double norm = std::sqrt(sq);
      if (best == n || better(norm, i, best_norm, best)) {
        best = i;
        best_norm = norm;
      }
    }
    if (best == n) return;
    record(best, best_norm);
  }

  // cached[i] is the squared min-distance of candidate i to the first
  // synced[i] picks. It only shrinks as picks are added, so it is an upper
  // bound on the current value and stale candidates can wait until they
  // reach the top.
  std::vector<double> cached(n, kInf);
  std::vector<std::size_t> synced(n, 0);
  const std::size_t batch_size = std::max<std::size_t>(1, jobs) * 16;
  std::vector<std::size_t> order;
  std::vector<std::size_t> batch;

  auto sync = [&](std::size_t i) {
    const auto& picks = state.picks();
    for (std::size_t p = synced[i]; p < picks.size(); ++p) {
      const double d = pair_dissimilarity_sq(cands[i].frames, cands[picks[p]].frames, mode, cached[i]);
      cached[i] = std::min(cached[i], d);
    }
    synced[i] = picks.size();
  };

  while (result.diverse.selected.size() < k_div) {
    order.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (state.feasible(i)) order.push_back(i);
    }
    if (order.empty()) break;
    for (;;) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return better(cached[a], a, cached[b], b);
      });
      if (synced[order.front()] == state.picks().size()) break;
      batch.clear();
      for (std::size_t i : order) {
        if (synced[i] == state.picks().size() || batch.size() == batch_size) break;
        batch.push_back(i);
      }
      parallel_for(batch.size(), jobs, [&](std::size_t b) { sync(batch[b]); });
    }
    const std::size_t pick = order.front();
    record(pick, std::sqrt(cached[pick]));
  }
}

CurationResult curate(const FeatureTable& table, const CurationConfig& config, std::size_t jobs) {
  for (const auto& t : config.tasks) {
    if (t.weights.size() != kSnippetDim) {
      throw InputError("task " + t.name + ": weights have " + std::to_string(t.weights.size()) +
                       " entries, features have " + std::to_string(kSnippetDim));
    }
  }
  const auto candidates = make_candidates(table, config.normalization);
  SelectionState state(candidates);
  CurationResult result;
  result.method = "curate";
  select_challenging(state, config.tasks, result);
  select_diverse(state, config.k_div, config.dissimilarity, jobs, result);
  result.params = {
      {"k_div", config.k_div},
      {"normalization", config.normalization == Normalization::kZScore ? "zscore" : "none"},
      {"dissimilarity",
       config.dissimilarity == DissimilarityMode::kDirected ? "directed" : "symmetric"},
      {"pool_size", candidates.size()},
  };
  return result;
}

}  // namespace curator
