#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "curator/features.hpp"
#include "curator/params.hpp"
#include "curator/pool_io.hpp"

namespace curator {

struct TaskConfig {
  std::string name;
  std::vector<double> weights;  ///< one weight per snippet feature
  std::size_t budget = 0;
};

enum class Normalization { kZScore, kNone };
enum class DissimilarityMode { kDirected, kSymmetric };

struct CurationConfig {
  std::vector<TaskConfig> tasks;
  std::size_t k_div = 0;
  MeasureParams measure;
  Normalization normalization = Normalization::kZScore;
  DissimilarityMode dissimilarity = DissimilarityMode::kDirected;
  std::uint64_t seed = 0;
};

/// Two tasks with uniform weights. The weights are placeholders to be tuned
/// per task.
CurationConfig default_config();

/// Throws InputError on unknown keys, duplicate task names, negative budgets
/// or weight vectors of the wrong length. Weights are either a list in
/// schema order or an object mapping feature names to weights (others 0).
CurationConfig config_from_json(const Json& j);
CurationConfig load_config(const std::filesystem::path& path);
Json to_json(const CurationConfig& c);

struct AuditEntry {
  std::size_t iteration = 0;  ///< 1-based, across both phases
  std::string phase;          ///< "challenging", "diverse", "random" or "entropy"
  std::string task;           ///< empty outside the challenging phase
  std::string snippet_id;
  double value = 0.0;         ///< task score, min-distance or entropy
  std::vector<std::string> eliminated;  ///< feasible snippets this pick ruled out
};

struct TaskSelection {
  std::string name;
  std::size_t budget = 0;
  std::vector<std::string> selected;  ///< in pick order

  [[nodiscard]] std::size_t shortfall() const noexcept {
    return budget > selected.size() ? budget - selected.size() : 0;
  }
};

struct CurationResult {
  std::string method;  ///< "curate", "rn" or "al"
  std::vector<TaskSelection> tasks;
  TaskSelection diverse{"diverse", 0, {}};
  std::vector<AuditEntry> audit;
  Json params = Json::object();
};

Json to_json(const CurationResult& r);
CurationResult result_from_json(const Json& j);

/// Empty when `j` is a well-formed result document; otherwise one message
/// per problem. Curate and baseline results share this schema.
std::vector<std::string> validate_result_json(const Json& j);

/// Frame vectors of one snippet as a row-major matrix.
struct FrameMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  [[nodiscard]] const double* row(std::size_t i) const { return data.data() + i * dim; }
};

FrameMatrix to_matrix(std::span<const FrameFeature> frames);

/// Squared form of the directed max-min frame distance. Returns early with
/// some value >= stop_at once the result is known to reach stop_at.
double directed_dissimilarity_sq(const FrameMatrix& a, const FrameMatrix& b,
                                 double stop_at = std::numeric_limits<double>::infinity());

/// max over frames k of a of the distance to the nearest frame l of b.
/// Asymmetric. Throws DomainError when either side has no frames.
double dissimilarity(std::span<const FrameFeature> a, std::span<const FrameFeature> b);
double dissimilarity(const FrameMatrix& a, const FrameMatrix& b, DissimilarityMode mode);

/// Dot product of a raw snippet vector with task weights. Throws
/// DomainError on a dimension mismatch.
double score(std::span<const double> values, std::span<const double> weights);

/// One selectable snippet: raw values for scoring, normalized snippet and
/// frame vectors for distances, and the fields the overlap rule needs.
struct Candidate {
  std::string snippet_id;
  std::string log_id;
  FrameRange frame_range;
  bool rankable = true;
  std::vector<double> raw;
  std::vector<double> normalized;
  FrameMatrix frames;
};

/// Candidates in ascending snippet id.
std::vector<Candidate> make_candidates(const FeatureTable& table, Normalization mode);

/// Tracks picks and the snippets they rule out by overlap.
class SelectionState {
 public:
  explicit SelectionState(std::span<const Candidate> candidates);

  [[nodiscard]] std::span<const Candidate> candidates() const noexcept { return candidates_; }
  [[nodiscard]] bool feasible(std::size_t i) const { return !selected_[i] && !blocked_[i]; }
  [[nodiscard]] bool selected(std::size_t i) const { return selected_[i]; }
  [[nodiscard]] const std::vector<std::size_t>& picks() const noexcept { return picks_; }

  /// Marks i selected and returns the ids of feasible snippets that overlap
  /// it, now blocked, in ascending order.
  std::vector<std::string> select(std::size_t i);

 private:
  std::span<const Candidate> candidates_;
  std::vector<char> selected_;
  std::vector<char> blocked_;
  std::vector<std::size_t> picks_;
};

/// Round-robin greedy over tasks in config order; each turn the unfilled
/// task takes its highest scoring feasible rankable snippet, ties to the
/// lower snippet id. Appends to result.tasks and result.audit.
void select_challenging(SelectionState& state, std::span<const TaskConfig> tasks,
                        CurationResult& result);

/// Farthest-point picks: each adds the feasible snippet whose minimum
/// dissimilarity to the selected set is largest. With nothing selected yet
/// the first pick is the snippet with the largest normalized vector norm.
/// Results do not depend on `jobs`.
void select_diverse(SelectionState& state, std::size_t k_div, DissimilarityMode mode,
                    std::size_t jobs, CurationResult& result);

/// Challenging phase then diverse phase over the same state.
CurationResult curate(const FeatureTable& table, const CurationConfig& config, std::size_t jobs);

}  // namespace curator
