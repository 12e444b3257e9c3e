#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curator/baselines.hpp"
#include "curator/error.hpp"
#include "test_support.hpp"

namespace curator {
namespace {

using testing::make_table;
using testing::TableRow;

// Frozen from tests/oracles/derive_values.py.
constexpr double kEntropyIdentity = 2.8378770664093453;
constexpr double kEntropyDiag41 = 3.5310242469692907;

std::vector<Candidate> disjoint_pool(std::size_t n) {
  std::vector<TableRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({"s" + std::to_string(10 + i), "log" + std::to_string(i), {0, 9}, {0}, {{0}}});
  }
  return make_candidates(make_table(rows), Normalization::kNone);
}

std::vector<ForecastRecord> uniform_forecasts(const std::vector<Candidate>& c, std::size_t frames,
                                              std::size_t actors, std::size_t steps) {
  std::vector<ForecastRecord> out;
  for (const auto& s : c) {
    for (std::size_t f = 0; f < frames; ++f) {
      for (std::size_t a = 0; a < actors; ++a) {
        for (std::size_t k = 0; k < steps; ++k) {
          out.push_back({s.snippet_id, f, "a" + std::to_string(a), k, {{0, 0}, 1.0, 0.0, 1.0}});
        }
      }
    }
  }
  return out;
}

TEST(Entropy, ClosedForms) {
  EXPECT_NEAR(gaussian_entropy({{0, 0}, 1, 0, 1}), std::log(2 * std::numbers::pi * std::numbers::e), 1e-12);
  EXPECT_NEAR(gaussian_entropy({{0, 0}, 1, 0, 1}), kEntropyIdentity, 1e-9);
  EXPECT_NEAR(gaussian_entropy({{0, 0}, 4, 0, 1}), kEntropyDiag41, 1e-9);
  const std::vector<Gaussian2> two{{{0, 0}, 4, 0, 1}, {{0, 0}, 4, 0, 1}};
  EXPECT_EQ(frame_entropy(two), 2.0 * gaussian_entropy(two[0]));
}

TEST(Entropy, RejectsNonPositiveDefinite) {
  EXPECT_THROW(gaussian_entropy({{0, 0}, 1, 2, 1}), DomainError);
  EXPECT_THROW(gaussian_entropy({{0, 0}, 0, 0, 1}), DomainError);
}

TEST(Entropy, SumIndependentOfRecordOrder) {
  const auto c = disjoint_pool(3);
  auto recs = uniform_forecasts(c, 4, 2, 3);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].gaussian.sxx = 1.0 + 0.1 * static_cast<double>(i);
  const auto a = snippet_entropies(recs);
  std::reverse(recs.begin(), recs.end());
  EXPECT_EQ(snippet_entropies(recs), a);
}

TEST(RandomBaseline, EmptyAndExhaustive) {
  const auto c = disjoint_pool(8);
  EXPECT_TRUE(random_select(c, 0, 1).audit.empty());
  const auto all = random_select(c, 8, 1);
  EXPECT_EQ(all.tasks[0].selected.size(), 8u);
  std::vector<std::string> sorted = all.tasks[0].selected;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
}

TEST(RandomBaseline, SeededAndDeterministic) {
  const auto c = disjoint_pool(30);
  const auto a = to_json(random_select(c, 10, 42)).dump();
  EXPECT_EQ(to_json(random_select(c, 10, 42)).dump(), a);
  EXPECT_NE(to_json(random_select(c, 10, 43)).dump(), a);
  EXPECT_TRUE(validate_result_json(Json::parse(a)).empty());
}

TEST(RandomBaseline, RespectsOverlap) {
  std::vector<TableRow> rows;
  for (int i = 0; i < 20; ++i) rows.push_back({"s" + std::to_string(10 + i), "L", {i * 5, i * 5 + 9}, {0}, {{0}}});
  const auto c = make_candidates(make_table(rows), Normalization::kNone);
  const auto r = random_select(c, 20, 7);
  for (std::size_t a = 0; a < r.audit.size(); ++a) {
    for (std::size_t b = a + 1; b < r.audit.size(); ++b) {
      const auto& x = *std::find_if(c.begin(), c.end(), [&](auto& k) { return k.snippet_id == r.audit[a].snippet_id; });
      const auto& y = *std::find_if(c.begin(), c.end(), [&](auto& k) { return k.snippet_id == r.audit[b].snippet_id; });
      EXPECT_FALSE(x.frame_range.intersects(y.frame_range));
    }
  }
  EXPECT_GT(r.tasks[0].shortfall(), 0u);
}

TEST(ActiveLearning, UniformForecastsPickFirstIds) {
  const auto c = disjoint_pool(6);
  const auto r = al_select(c, snippet_entropies(uniform_forecasts(c, 3, 2, 2)), 3);
  EXPECT_EQ(r.tasks[0].selected, (std::vector<std::string>{"s10", "s11", "s12"}));
}

TEST(ActiveLearning, ScaledCovariancePlantedFirst) {
  const auto c = disjoint_pool(6);
  const std::size_t frames = 3, actors = 2, steps = 4;
  auto recs = uniform_forecasts(c, frames, actors, steps);
  for (auto& r : recs) {
    if (r.snippet_id == "s14") r.gaussian = {{0, 0}, 4.0, 0.0, 4.0};
  }
  const auto h = snippet_entropies(recs);
  // Scaling both variances by 4 multiplies det by 16: +ln 4 per Gaussian.
  EXPECT_NEAR(h.at("s14") - h.at("s10"), frames * actors * steps * std::log(4.0), 1e-9);
  const auto r = al_select(c, h, 2);
  EXPECT_EQ(r.tasks[0].selected, (std::vector<std::string>{"s14", "s10"}));
  EXPECT_TRUE(al_select(c, h, 0).audit.empty());
}

TEST(ActiveLearning, MissingForecastIsAnError) {
  const auto c = disjoint_pool(3);
  auto recs = uniform_forecasts(c, 1, 1, 1);
  recs.pop_back();
  EXPECT_THROW(al_select(c, snippet_entropies(recs), 1), InputError);
}

TEST(Forecasts, FileRoundTrip) {
  testing::TempDir dir;
  const auto c = disjoint_pool(2);
  const auto recs = uniform_forecasts(c, 2, 1, 2);
  write_file_atomic(dir / "f.jsonl", forecasts_to_ndjson(recs));
  const auto back = load_forecasts(dir / "f.jsonl");
  EXPECT_EQ(snippet_entropies(back), snippet_entropies(recs));
  write_file_atomic(dir / "bad.jsonl", forecasts_to_ndjson(recs) +
                                           R"({"snippet_id":"x","frame":0,"actor":"a","step":0,"mu":[0,0],"sigma":[1,2,1]})" "\n");
  EXPECT_THROW(load_forecasts(dir / "bad.jsonl"), ParseError);
}

}  // namespace
}  // namespace curator
