#include <gtest/gtest.h>

#include "curator/error.hpp"
#include "curator/feature_io.hpp"
#include "curator/features.hpp"
#include "curator/map_index.hpp"
#include "curator/stats.hpp"
#include "curator/synthgen.hpp"
#include "test_support.hpp"

namespace curator {
namespace {

using testing::detection;
using testing::drive;

TEST(Schema, CanonicalOrder) {
  const auto s = snippet_schema();
  ASSERT_EQ(s.size(), kSnippetDim);
  EXPECT_EQ(s[0].name, "curve_mean");
  EXPECT_EQ(s[10].name, "height_var");
  EXPECT_EQ(s[11].name, "crowd_static");
  EXPECT_EQ(snippet_feature_index("crowd_dynamic"), 12u);
  EXPECT_EQ(snippet_feature_index("class_div"), 13u);
  EXPECT_EQ(snippet_feature_index("speed_div"), 17u);
  EXPECT_EQ(s[18].name, "sdv_path");
  EXPECT_EQ(s[27].name, "nudges");
  EXPECT_THROW(snippet_feature_index("nope"), InputError);
  const auto f = frame_schema();
  ASSERT_EQ(f.size(), kFrameDim);
  EXPECT_EQ(f[8].name, "lat");
  EXPECT_EQ(f[9].name, "lon");
}

TEST(SnippetVector, ZeroInputsGiveZeroVector) {
  const auto v = assemble_snippet_vector("a", {}, {}, {});
  EXPECT_EQ(v.values, std::vector<double>(kSnippetDim, 0.0));
  EXPECT_TRUE(v.rankable);
}

TEST(SnippetVector, FieldsLandAtTheirIndices) {
  InfraFeatures infra;
  infra.curve_mean = 1;
  infra.height_var = 11;
  TrafficFeatures traffic;
  traffic.crowd_static = 12;
  traffic.speed_div = 18;
  SdvFeatures sdv;
  sdv.sdv_path = 19;
  sdv.nudges = 28;
  sdv.valid = false;
  const auto v = assemble_snippet_vector("a", infra, traffic, sdv);
  EXPECT_EQ(v.values[0], 1);
  EXPECT_EQ(v.values[10], 11);
  EXPECT_EQ(v.values[11], 12);
  EXPECT_EQ(v.values[17], 18);
  EXPECT_EQ(v.values[18], 19);
  EXPECT_EQ(v.values[27], 28);
  EXPECT_FALSE(v.rankable);
}

TEST(FrameVectors, CountsGeoAndStationaryScene) {
  SceneMap m;
  m.lanes.push_back(testing::lane("L0", testing::line_points({-50, 0}, {50, 0}, 2)));
  const MapIndex index(m, 100);
  const auto still = drive("a", "L", 0, 5, 0.0);
  const auto fv = assemble_frame_vectors(still, index, {});
  ASSERT_EQ(fv.size(), 5u);
  for (const auto& f : fv) EXPECT_EQ(f.values, fv[0].values);
  EXPECT_EQ(fv[0].values[8], 37.0);
  EXPECT_EQ(fv[0].values[9], -122.0);

  const auto planted = drive("a", "L", 0, 5, 1.0, [](std::size_t t, Frame& f) {
    if (t != 2) return;
    f.detections.push_back(detection("v", ActorClass::kVehicle, {3, 3}, 1.0));
    f.detections.push_back(detection("w", ActorClass::kVehicle, {6, 3}, 1.0));
    f.detections.push_back(detection("p", ActorClass::kPedestrian, {9, 3}, 1.0));
  });
  const auto pv = assemble_frame_vectors(planted, index, {});
  EXPECT_EQ(pv[1].values[0], 0.0);
  EXPECT_EQ(pv[2].values[0], 3.0);
  EXPECT_EQ(pv[2].values[1], 2.0);
  EXPECT_EQ(pv[2].values[2], 1.0);
  EXPECT_DOUBLE_EQ(pv[2].values[4], 2.0);
  EXPECT_DOUBLE_EQ(pv[2].values[6], 1.0);
}

TEST(Normalization, ZScoreAndZeroStd) {
  const std::vector<std::vector<double>> rows{{0, 5}, {2, 5}};
  const auto st = fit_normalization(std::span<const std::vector<double>>(rows));
  EXPECT_FALSE(st.zero_std[0]);
  EXPECT_TRUE(st.zero_std[1]);
  EXPECT_EQ(apply_normalization(rows[0], st), (std::vector<double>{-1, 5}));
  EXPECT_EQ(apply_normalization(rows[1], st), (std::vector<double>{1, 5}));
  EXPECT_THROW(apply_normalization(std::vector<double>{1}, st), DomainError);
  const std::vector<std::vector<double>> one{{1, 2}};
  EXPECT_THROW(fit_normalization(std::span<const std::vector<double>>(one)), DomainError);
}

TEST(Normalization, ZScoredPoolHasZeroMeanUnitVariance) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(3.0, 2.0);
  std::vector<std::vector<double>> rows(50);
  for (auto& r : rows) r = {g(rng), g(rng)};
  const auto st = fit_normalization(std::span<const std::vector<double>>(rows));
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> z;
    for (const auto& r : rows) z.push_back(apply_normalization(r, st)[j]);
    EXPECT_NEAR(mean(z), 0.0, 1e-12);
    EXPECT_NEAR(population_variance(z), 1.0, 1e-12);
  }
}

SnippetPool small_pool() {
  synth::RandomPoolOptions o;
  o.snippets = 12;
  o.frames = 60;
  return synth::random_pool(5, o);
}

TEST(ScorePool, SortedAndWorkerIndependent) {
  auto pool = small_pool();
  MeasureParams p;
  const auto a = score_pool(pool, p, 1);
  std::reverse(pool.snippets.begin(), pool.snippets.end());
  const auto b = score_pool(pool, p, 3);
  ASSERT_EQ(a.snippets.size(), b.snippets.size());
  for (std::size_t i = 0; i < a.snippets.size(); ++i) {
    EXPECT_EQ(a.snippets[i].vector.snippet_id, b.snippets[i].vector.snippet_id);
    EXPECT_EQ(a.snippets[i].vector.values, b.snippets[i].vector.values);
  }
  EXPECT_TRUE(std::is_sorted(a.snippets.begin(), a.snippets.end(), [](auto& x, auto& y) {
    return x.vector.snippet_id < y.vector.snippet_id;
  }));
  EXPECT_EQ(a.snippet_stats.mean, b.snippet_stats.mean);
  EXPECT_EQ(a.frame_stats.stddev, b.frame_stats.stddev);
}

TEST(FeatureIo, RoundTripIsByteStable) {
  testing::TempDir dir;
  const auto t = score_pool(small_pool(), {}, 1);
  save_features(t, dir / "a");
  const auto back = load_features(dir / "a");
  save_features(back, dir / "b");
  for (const char* f : {kSnippetFeaturesFile, kFrameFeaturesFile, kNormalizationFile}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  }
  EXPECT_EQ(back.snippets[3].frames[7].values, t.snippets[3].frames[7].values);
}

TEST(FeatureIo, SchemaMismatchRejected) {
  testing::TempDir dir;
  save_features(score_pool(small_pool(), {}, 1), dir.path());
  auto text = read_file(dir / kSnippetFeaturesFile);
  const auto pos = text.find("curve_mean");
  text.replace(pos, 10, "curve_mode");
  write_file_atomic(dir / kSnippetFeaturesFile, text);
  try {
    load_features(dir.path());
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("schema"), std::string::npos);
  }
}

}  // namespace
}  // namespace curator
