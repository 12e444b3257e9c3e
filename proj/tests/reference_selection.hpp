#pragma once

// Exhaustive reference for the selection phases: recomputes every score
// and every min-distance from scratch at each pick.

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "curator/selection.hpp"

namespace curator::testing {

inline double brute_directed_sq(const FrameMatrix& a, const FrameMatrix& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.rows; ++k) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < b.rows; ++l) {
      double acc = 0.0;
      for (std::size_t j = 0; j < a.dim; ++j) {
        const double d = a.row(k)[j] - b.row(l)[j];
        acc += d * d;
      }
      nearest = std::min(nearest, acc);
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

inline double brute_pair_sq(const Candidate& a, const Candidate& b, DissimilarityMode mode) {
  const double f = brute_directed_sq(a.frames, b.frames);
  return mode == DissimilarityMode::kDirected ? f : std::max(f, brute_directed_sq(b.frames, a.frames));
}

inline bool overlaps(const Candidate& a, const Candidate& b) {
  return a.log_id == b.log_id && a.frame_range.intersects(b.frame_range);
}

/// Picks in order, as ids.
inline std::vector<std::string> reference_curate(const std::vector<Candidate>& c,
                                                 const CurationConfig& cfg) {
  const std::size_t n = c.size();
  std::vector<bool> taken(n, false), blocked(n, false);
  std::vector<std::size_t> picks;
  std::vector<std::string> out;
  auto take = [&](std::size_t i) {
    taken[i] = true;
    picks.push_back(i);
    out.push_back(c[i].snippet_id);
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j] && overlaps(c[i], c[j])) blocked[j] = true;
    }
  };
  auto free = [&](std::size_t i) { return !taken[i] && !blocked[i]; };

  std::vector<std::size_t> got(cfg.tasks.size(), 0);
  std::vector<bool> dead(cfg.tasks.size(), false);
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
      if (dead[t] || got[t] >= cfg.tasks[t].budget) continue;
      std::size_t best = n;
      double best_v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!free(i) || !c[i].rankable) continue;
        const double v = score(c[i].raw, cfg.tasks[t].weights);
        if (best == n || v > best_v) {
          best = i;
          best_v = v;
        }
      }
      if (best == n) {
        dead[t] = true;
        continue;
      }
      take(best);
      ++got[t];
      progress = true;
    }
  }

  for (std::size_t k = 0; k < cfg.k_div; ++k) {
    std::size_t best = n;
    double best_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!free(i)) continue;
      double v;
      if (picks.empty()) {
        double sq = 0.0;
        for (double x : c[i].normalized) sq += x * x;
        v = sq;
      } else {
        v = std::numeric_limits<double>::infinity();
        for (std::size_t p : picks) v = std::min(v, brute_pair_sq(c[i], c[p], cfg.dissimilarity));
      }
      if (best == n || v > best_v) {
        best = i;
        best_v = v;
      }
    }
    if (best == n) break;
    take(best);
  }
  return out;
}

/// Replays a result and counts picks that break an invariant: the pick was
/// infeasible, a feasible candidate beat it, or the elimination list is
/// wrong.
inline std::size_t dominance_violations(const std::vector<Candidate>& c, const CurationConfig& cfg,
                                        const CurationResult& r) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c.size(); ++i) index[c[i].snippet_id] = i;
  std::map<std::string, const TaskConfig*> tasks;
  for (const auto& t : cfg.tasks) tasks[t.name] = &t;
  const std::size_t n = c.size();
  std::vector<bool> taken(n, false), blocked(n, false);
  std::vector<std::size_t> picks;
  std::size_t bad = 0;
  for (const auto& e : r.audit) {
    const std::size_t i = index.at(e.snippet_id);
    if (taken[i] || blocked[i]) ++bad;
    if (e.phase == "challenging") {
      const auto& w = tasks.at(e.task)->weights;
      const double v = score(c[i].raw, w);
      if (v != e.value || !c[i].rankable) ++bad;
      for (std::size_t j = 0; j < n; ++j) {
        if (taken[j] || blocked[j] || !c[j].rankable) continue;
        const double u = score(c[j].raw, w);
        if (u > v || (u == v && j < i)) ++bad;
      }
    } else if (e.phase == "diverse") {
      auto value = [&](std::size_t j) {
        if (picks.empty()) {
          double sq = 0.0;
          for (double x : c[j].normalized) sq += x * x;
          return sq;
        }
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t p : picks) m = std::min(m, brute_pair_sq(c[j], c[p], cfg.dissimilarity));
        return m;
      };
      const double v = value(i);
      if (std::abs(std::sqrt(v) - e.value) > 1e-12 * std::max(1.0, e.value)) ++bad;
      for (std::size_t j = 0; j < n; ++j) {
        if (taken[j] || blocked[j]) continue;
        const double u = value(j);
        if (u > v || (u == v && j < i)) ++bad;
      }
    }
    std::vector<std::string> expect;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && !taken[j] && !blocked[j] && overlaps(c[i], c[j])) expect.push_back(c[j].snippet_id);
    }
    if (expect != e.eliminated) ++bad;
    taken[i] = true;
    picks.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (!taken[j] && overlaps(c[i], c[j])) blocked[j] = true;
    }
  }
  return bad;
}

/// Pairs of selected snippets that overlap.
inline std::size_t overlapping_pairs(const std::vector<Candidate>& c, const CurationResult& r) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c.size(); ++i) index[c[i].snippet_id] = i;
  std::vector<std::size_t> sel;
  for (const auto& e : r.audit) sel.push_back(index.at(e.snippet_id));
  std::size_t bad = 0;
  for (std::size_t a = 0; a < sel.size(); ++a) {
    for (std::size_t b = a + 1; b < sel.size(); ++b) bad += overlaps(c[sel[a]], c[sel[b]]) || sel[a] == sel[b];
  }
  return bad;
}

}  // namespace curator::testing
