#include <gtest/gtest.h>

#include "curator/error.hpp"
#include "curator/features.hpp"
#include "curator/map_index.hpp"
#include "curator/synthgen.hpp"

namespace curator {
namespace {

using namespace synth;

const CardField* field(const OracleCard& c, std::string_view name) {
  for (const auto& f : c.fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::size_t card_misses(const GeneratedPool& g) {
  MeasureParams p;
  p.roi_radius = g.cards.front().roi_radius;
  const MapIndex index(g.pool.map, p.path_waypoints);
  std::size_t misses = 0;
  for (std::size_t i = 0; i < g.pool.snippets.size(); ++i) {
    const auto v = score_snippet(g.pool.snippets[i], index, p).vector.values;
    for (const auto& f : g.cards[i].fields) {
      const double got = v[snippet_feature_index(f.name)];
      if (!(std::abs(got - f.expected) <= f.tolerance)) {
        ++misses;
        ADD_FAILURE() << g.cards[i].snippet_id << " " << f.name << ": got " << got << ", expected "
                      << f.expected << " +/- " << f.tolerance;
      }
    }
  }
  return misses;
}

TEST(Synth, EmptyStraightCruiseCard) {
  ScenarioSpec spec;
  spec.actors = std::vector<ActorGroup>{};
  const auto g = generate_pool(spec);
  const auto& c = g.cards.at(0);
  for (const char* name : {"curve_mean", "crowd_static", "crowd_dynamic", "lane_changes", "turns",
                           "controls_on_route", "near_path_static", "near_path_dynamic",
                           "conflict_traversals", "conflict_reachable", "nudges", "sdv_path"}) {
    ASSERT_NE(field(c, name), nullptr) << name;
    EXPECT_EQ(field(c, name)->expected, 0.0) << name;
  }
  EXPECT_EQ(card_misses(g), 0u);
}

TEST(Synth, TurnCard) {
  ScenarioSpec spec;
  spec.ego.kind = EgoPlanKind::kTurn;
  spec.ego.radius = 20.0;
  const auto g = generate_pool(spec);
  const auto* f = field(g.cards[0], "sdv_path");
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->expected, 0.05);
  EXPECT_LE(f->tolerance, 2e-3 + 1e-15);
  EXPECT_EQ(card_misses(g), 0u);
}

TEST(Synth, ClassDiversityCard) {
  ScenarioSpec spec;
  spec.actors = std::vector<ActorGroup>{
      {ActorGroupKind::kParallel, ActorClass::kVehicle, 3, 20.0, 3.6, 10.0, 9.0, 0.0, 30.0},
      {ActorGroupKind::kStatic, ActorClass::kPedestrian, 1, 60.0, -6.0, 8.0, 0.0, 0.0, 30.0}};
  const auto g = generate_pool(spec);
  EXPECT_EQ(field(g.cards[0], "class_div")->expected, 2.0);
  EXPECT_EQ(field(g.cards[0], "crowd_dynamic")->expected, 3.0);
  EXPECT_EQ(field(g.cards[0], "crowd_static")->expected, 1.0);
  EXPECT_EQ(card_misses(g), 0u);
}

TEST(Synth, SameSeedSameBytes) {
  ScenarioSpec spec;
  spec.seed = 17;
  spec.snippets = 3;
  spec.map.kind = MapTemplate::kFourWay;
  EXPECT_EQ(pool_to_ndjson(generate_pool(spec).pool), pool_to_ndjson(generate_pool(spec).pool));
  RandomPoolOptions o;
  o.snippets = 20;
  o.frames = 50;
  EXPECT_EQ(pool_to_ndjson(random_pool(9, o)), pool_to_ndjson(random_pool(9, o)));
  EXPECT_NE(pool_to_ndjson(random_pool(9, o)), pool_to_ndjson(random_pool(10, o)));
}

TEST(Synth, GeneratedPoolsValidate) {
  RandomPoolOptions o;
  o.snippets = 40;
  const auto pool = random_pool(3, o);
  EXPECT_TRUE(validate_pool(pool).ok()) << validate_pool(pool).summary();
}

TEST(Synth, InfeasiblePlansRejected) {
  ScenarioSpec spec;
  spec.ego.kind = EgoPlanKind::kNudge;
  spec.ego.offset = 2.5;
  EXPECT_THROW(generate_pool(spec), DomainError);
  spec.ego.offset = 1.0;
  spec.ego.frame = 240;
  EXPECT_THROW(generate_pool(spec), DomainError);
  ScenarioSpec fast;
  fast.ego.speed = 40.0;
  EXPECT_THROW(generate_pool(fast), DomainError);
}

TEST(Synth, SpecFromJson) {
  const Json j = {{"seed", 4},
                  {"map", {{"template", "hilly"}, {"amplitude", 3.0}}},
                  {"ego", {{"plan", "speed_ramp"}, {"speed", 12.0}}},
                  {"actors", Json::array({{{"kind", "arc"}, {"class", "pedestrian"}, {"radius", 12.0}, {"speed", 1.0}}})},
                  {"snippets", 2}};
  const auto spec = spec_from_json(j);
  EXPECT_EQ(spec.map.kind, MapTemplate::kHilly);
  EXPECT_EQ(spec.ego.kind, EgoPlanKind::kSpeedRamp);
  ASSERT_TRUE(spec.actors.has_value());
  EXPECT_EQ(spec.actors->at(0).radius, 12.0);
  const auto g = generate_pool(spec);
  EXPECT_EQ(g.pool.snippets.size(), 2u);
  EXPECT_EQ(field(g.cards[0], "height_var")->expected, 4.5);
  EXPECT_EQ(card_misses(g), 0u);
  EXPECT_THROW(spec_from_json({{"map", {{"template", "moon"}}}}), InputError);
}

TEST(Synth, BicycleFractionIsExact) {
  RandomPoolOptions o;
  o.snippets = 50;
  o.frames = 50;
  o.bicycle_fraction = 0.1;
  const auto pool = random_pool(2, o);
  std::size_t with_bike = 0;
  for (const auto& s : pool.snippets) {
    with_bike += std::any_of(s.frames[0].detections.begin(), s.frames[0].detections.end(),
                             [](const Detection& d) { return d.actor_class == ActorClass::kBicyclist; });
  }
  EXPECT_EQ(with_bike, 5u);
}

}  // namespace
}  // namespace curator
