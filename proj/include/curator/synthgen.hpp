#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curator/pool_io.hpp"
#include "curator/scene_model.hpp"

namespace curator::synth {

enum class MapTemplate { kStraightRoad, kCurvedRoad, kFourWay, kHilly };

struct TemplateSpec {
  MapTemplate kind = MapTemplate::kStraightRoad;
  double radius = 100.0;      ///< curved_road: radius of the ego lane (m)
  double turn_radius = 20.0;  ///< four_way_intersection: left-turn lane radius (m)
  double amplitude = 2.0;     ///< hilly: terrain amplitude (m)
};

enum class EgoPlanKind { kCruise, kTurn, kLaneChange, kNudge, kSpeedRamp };

struct EgoPlan {
  EgoPlanKind kind = EgoPlanKind::kCruise;
  double speed = 10.0;     ///< m/s; cruise speed or final ramp speed
  double radius = 20.0;    ///< turn radius (m)
  std::size_t frame = 50;  ///< first frame of a lane change or nudge
  double offset = 1.2;     ///< nudge: lateral excursion to the left (m)
  std::size_t frames = 40; ///< nudge: frames held at full offset
};

enum class ActorGroupKind { kStatic, kParallel, kArc, kCrossing };

/// `count` actors of one class. Positions are given in lane coordinates of
/// the ego reference lane: `s` along it, `d` to its left.
struct ActorGroup {
  ActorGroupKind kind = ActorGroupKind::kStatic;
  ActorClass actor_class = ActorClass::kVehicle;
  std::size_t count = 1;
  double s = 0.0;
  double d = 0.0;
  double spacing = 8.0;    ///< m along s between members of the group
  double speed = 0.0;      ///< m/s; mean speed for alternating profiles
  double alternate = 0.0;  ///< speed alternates speed +/- alternate per frame
  double radius = 30.0;    ///< arc actors: circle radius (m)
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  TemplateSpec map;
  EgoPlan ego;
  /// Empty means the template's default mix: one parked vehicle, two
  /// vehicles in the neighboring lane, a pedestrian on a far arc and, at the
  /// four-way intersection, a northbound vehicle crossing it.
  std::optional<std::vector<ActorGroup>> actors;
  std::size_t snippets = 1;
  std::size_t frames = kDefaultSnippetLength;
  double roi_radius = 1000.0;  ///< ROI the oracle values assume (m)
};

struct CardField {
  std::string name;  ///< snippet feature name
  double expected = 0.0;
  double tolerance = 0.0;  ///< absolute
};

/// Analytic values for the measures a scenario forces, valid when the pool
/// is scored with the stated ROI radius.
struct OracleCard {
  std::string snippet_id;
  double roi_radius = 0.0;
  std::vector<CardField> fields;
};

struct GeneratedPool {
  SnippetPool pool;
  std::vector<OracleCard> cards;
};

/// Throws DomainError for infeasible plans, e.g. a nudge offset that leaves
/// the lane or a maneuver that does not fit in the snippet.
GeneratedPool generate_pool(const ScenarioSpec& spec);

ScenarioSpec spec_from_json(const Json& j);
Json to_json(const OracleCard& card);

struct RandomPoolOptions {
  std::size_t snippets = 100;
  std::size_t frames = kDefaultSnippetLength;
  std::size_t logs = 0;           ///< 0 means one log per three snippets
  double bicycle_fraction = 0.0;  ///< share of snippets carrying one bicyclist
  bool fixed_mix = false;         ///< every snippet: two vehicles and one pedestrian
};

/// Varied scenarios over one composite map holding every template, with
/// snippets sharing logs so that some frame ranges overlap.
SnippetPool random_pool(std::uint64_t seed, const RandomPoolOptions& options);

}  // namespace curator::synth
