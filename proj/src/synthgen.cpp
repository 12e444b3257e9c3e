#include "curator/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <span>

#include "curator/error.hpp"
#include "curator/stats.hpp"

namespace curator::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLaneWidth = 3.6;
constexpr double kLat0 = 37.77;
constexpr double kLon0 = -122.42;
constexpr double kMetersPerDegree = 111320.0;

// Tolerances for card fields.
constexpr double kExact = 1e-9;
constexpr double kCurveRel = 2e-2;
constexpr double kRampRel = 1e-4;

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

Vec2 unit(double heading) { return {std::cos(heading), std::sin(heading)}; }

GeoPoint to_geo(Vec2 p) {
  const double lat = kLat0 + p.y / kMetersPerDegree;
  const double lon = kLon0 + p.x / (kMetersPerDegree * std::cos(kLat0 * kPi / 180.0));
  return {lat, lon};
}

// Lane coordinates along the ego reference lane: a straight line or a
// counter-clockwise circle. `d` is measured to the left.
struct Reference {
  bool arc = false;
  Vec2 origin;           // line: point at s = 0
  double heading = 0.0;  // line: direction
  Vec2 center;           // arc
  double radius = 0.0;   // arc
  double theta0 = 0.0;   // arc: polar angle at s = 0

  [[nodiscard]] double curvature() const { return arc ? 1.0 / radius : 0.0; }

  [[nodiscard]] Vec2 tangent(double s) const {
    return arc ? unit(theta0 + s / radius + kPi / 2.0) : unit(heading);
  }

  [[nodiscard]] Vec2 left(double s) const {
    return arc ? unit(theta0 + s / radius + kPi) : unit(heading + kPi / 2.0);
  }

  [[nodiscard]] Vec2 point(double s, double d) const {
    if (arc) {
      const double th = theta0 + s / radius;
      return center + unit(th) * (radius - d);
    }
    return origin + unit(heading) * s + unit(heading + kPi / 2.0) * d;
  }

  // Heading of a path (s, d(s)) with slope dd/ds.
  [[nodiscard]] double path_heading(double s, double d, double slope) const {
    const Vec2 v = tangent(s) * (1.0 - curvature() * d) + left(s) * slope;
    return std::atan2(v.y, v.x);
  }

  // Arc-length rate along the reference for unit speed at lateral offset d.
  [[nodiscard]] double s_rate(double d) const { return 1.0 / (1.0 - curvature() * d); }
};

struct Layout {
  MapTemplate kind = MapTemplate::kStraightRoad;
  TemplateSpec spec;
  Reference ref;
  Vec2 origin;
  double s_max = 0.0;       // ego must stay below this reference position
  double neighbor_d = 0.0;  // lateral offset of the neighbor lane used for lane changes
  double box_half = 0.0;    // four-way: half size of the intersection box
};

Lane make_lane(std::string id, std::vector<Vec2> pts) {
  Lane l;
  l.id = std::move(id);
  l.centerline = std::move(pts);
  return l;
}

std::vector<Vec2> line_points(Vec2 a, Vec2 b, std::size_t n) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back(a + (b - a) * t);
  }
  return pts;
}

std::vector<Vec2> arc_points(Vec2 c, double r, double th0, double th1, std::size_t n) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back(c + unit(th0 + (th1 - th0) * t) * r);
  }
  return pts;
}

Polygon box(Vec2 lo, Vec2 hi) { return {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}; }

std::string template_prefix(MapTemplate t) {
  switch (t) {
    case MapTemplate::kStraightRoad: return "sr_";
    case MapTemplate::kCurvedRoad: return "cr_";
    case MapTemplate::kFourWay: return "fw_";
    case MapTemplate::kHilly: return "hl_";
  }
  return "";
}

Layout build_straight(const TemplateSpec& spec, Vec2 o, SceneMap& m, bool hilly) {
  const std::string p = template_prefix(spec.kind);
  Lane l0 = make_lane(p + "L0", line_points(o + Vec2{-100, 0}, o + Vec2{500, 0}, 13));
  Lane l1 = make_lane(p + "L1", line_points(o + Vec2{-100, kLaneWidth}, o + Vec2{500, kLaneWidth}, 13));
  Lane b0 = make_lane(p + "B0", line_points(o + Vec2{-100, -3}, o + Vec2{500, -3}, 13));
  l0.left_neighbor = l1.id;
  l1.right_neighbor = l0.id;
  b0.is_bike_lane = true;
  b0.width = 1.5;
  m.lanes.push_back(l0);
  m.lanes.push_back(l1);
  m.lanes.push_back(b0);
  m.crosswalks.push_back({p + "X0", box(o + Vec2{198, -1.8}, o + Vec2{202, 5.4})});
  m.traffic_controls.push_back({p + "Y0", ControlKind::kYieldSign, o + Vec2{196, -2.5}, {l0.id, l1.id}});
  if (hilly) {
    // 24 whole periods of 25 m sampled every metre: mean 0, variance A^2/2.
    for (int k = 0; k < 600; ++k) {
      const double x = -100.0 + k;
      m.height_samples.push_back({o.x + x, o.y, spec.amplitude * std::sin(2.0 * kPi * x / 25.0)});
    }
  } else {
    for (int k = 0; k <= 60; ++k) m.height_samples.push_back({o.x - 100.0 + 10.0 * k, o.y, 0.0});
  }
  Layout lay;
  lay.kind = spec.kind;
  lay.spec = spec;
  lay.origin = o;
  lay.ref.origin = o;
  lay.s_max = 495.0;
  lay.neighbor_d = kLaneWidth;
  return lay;
}

Layout build_curved(const TemplateSpec& spec, Vec2 o, SceneMap& m) {
  const double r = spec.radius;
  if (!(r >= 20.0)) throw DomainError("curved_road radius must be at least 20 m");
  const std::string p = template_prefix(spec.kind);
  const double th0 = -0.95 * kPi;
  const double th1 = 0.95 * kPi;
  Lane l0 = make_lane(p + "L0", arc_points(o, r, th0, th1, 2000));
  Lane l1 = make_lane(p + "L1", arc_points(o, r - kLaneWidth, th0, th1, 2000));
  Lane b0 = make_lane(p + "B0", arc_points(o, r + 3.0, th0, th1, 2000));
  l0.left_neighbor = l1.id;
  l1.right_neighbor = l0.id;
  b0.is_bike_lane = true;
  b0.width = 1.5;
  m.lanes.push_back(l0);
  m.lanes.push_back(l1);
  m.lanes.push_back(b0);
  for (int k = 0; k < 36; ++k) {
    const Vec2 q = o + unit(2.0 * kPi * k / 36.0) * r;
    m.height_samples.push_back({q.x, q.y, 0.0});
  }
  Layout lay;
  lay.kind = spec.kind;
  lay.spec = spec;
  lay.origin = o;
  lay.ref.arc = true;
  lay.ref.center = o;
  lay.ref.radius = r;
  lay.ref.theta0 = -0.85 * kPi;
  lay.s_max = (0.95 * kPi - lay.ref.theta0) * r - 5.0;
  lay.neighbor_d = kLaneWidth;
  return lay;
}

Layout build_four_way(const TemplateSpec& spec, Vec2 o, SceneMap& m) {
  const double r = spec.turn_radius;
  const double h = r - 1.8;
  if (!(h >= 9.0) || h > 100.0) throw DomainError("four_way turn_radius must be in [10.8, 101.8] m");
  const std::string p = template_prefix(spec.kind);
  auto line = [&](const std::string& id, Vec2 a, Vec2 b) {
    return make_lane(p + id, line_points(o + a, o + b, 2));
  };
  const double far = 300.0;
  std::vector<Lane> lanes = {
      line("EB_in", {-far, -1.8}, {-h, -1.8}),   line("EB_thru", {-h, -1.8}, {h, -1.8}),
      line("EB_out", {h, -1.8}, {far, -1.8}),     line("EB_in_r", {-far, -5.4}, {-h, -5.4}),
      line("EB_thru_r", {-h, -5.4}, {h, -5.4}),   line("EB_out_r", {h, -5.4}, {far, -5.4}),
      make_lane(p + "EB_left", arc_points(o + Vec2{-h, h}, r, -kPi / 2.0, 0.0, 200)),
      line("WB_in", {far, 1.8}, {h, 1.8}),        line("WB_thru", {h, 1.8}, {-h, 1.8}),
      line("WB_out", {-h, 1.8}, {-far, 1.8}),     line("NB_in", {1.8, -far}, {1.8, -h}),
      line("NB_thru", {1.8, -h}, {1.8, h}),       line("NB_out", {1.8, h}, {1.8, far}),
      line("SB_in", {-1.8, far}, {-1.8, h}),      line("SB_thru", {-1.8, h}, {-1.8, -h}),
      line("SB_out", {-1.8, -h}, {-1.8, -far}),
  };
  auto at = [&](const std::string& id) -> Lane& {
    return *std::find_if(lanes.begin(), lanes.end(), [&](const Lane& l) { return l.id == p + id; });
  };
  auto chain = [&](std::initializer_list<const char*> ids) {
    const std::vector<const char*> v(ids);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) at(v[i]).successors.push_back(p + v[i + 1]);
  };
  chain({"EB_in", "EB_thru", "EB_out"});
  chain({"EB_in_r", "EB_thru_r", "EB_out_r"});
  chain({"EB_in", "EB_left", "NB_out"});
  chain({"WB_in", "WB_thru", "WB_out"});
  chain({"NB_in", "NB_thru", "NB_out"});
  chain({"SB_in", "SB_thru", "SB_out"});
  for (const char* seg : {"in", "thru", "out"}) {
    const std::string a = std::string("EB_") + seg;
    const std::string b = a + "_r";
    at(a).right_neighbor = p + b;
    at(b).left_neighbor = p + a;
  }
  at("EB_left").turn = TurnTag::kLeft;
  for (auto& l : lanes) m.lanes.push_back(std::move(l));

  m.intersections.push_back({p + "I0", box(o + Vec2{-h, -h}, o + Vec2{h, h}), 4, {3, 3, 2, 2}});
  auto light = [&](const std::string& id, Vec2 pos, std::vector<std::string> governed) {
    for (auto& g : governed) g = p + g;
    m.traffic_controls.push_back({p + id, ControlKind::kTrafficLight, o + pos, std::move(governed)});
  };
  light("T_EB", {-h - 1.0, -8.0}, {"EB_in", "EB_in_r", "EB_thru", "EB_thru_r", "EB_left"});
  light("T_WB", {h + 1.0, 4.0}, {"WB_in", "WB_thru"});
  light("T_NB", {5.0, -h - 1.0}, {"NB_in", "NB_thru"});
  light("T_SB", {-5.0, h + 1.0}, {"SB_in", "SB_thru"});
  m.crosswalks.push_back({p + "X_N", box(o + Vec2{-3.6, h + 1.0}, o + Vec2{3.6, h + 4.0})});
  m.crosswalks.push_back({p + "X_E", box(o + Vec2{h + 1.0, 0.0}, o + Vec2{h + 4.0, 3.6})});
  for (int k = -10; k <= 10; ++k) {
    m.height_samples.push_back({o.x + 20.0 * k, o.y, 0.0});
    if (k != 0) m.height_samples.push_back({o.x, o.y + 20.0 * k, 0.0});
  }

  Layout lay;
  lay.kind = spec.kind;
  lay.spec = spec;
  lay.origin = o;
  lay.ref.origin = o + Vec2{-150.0, -1.8};
  lay.s_max = 445.0;
  lay.neighbor_d = -kLaneWidth;
  lay.box_half = h;
  return lay;
}

Layout build_template(const TemplateSpec& spec, Vec2 origin, SceneMap& m) {
  switch (spec.kind) {
    case MapTemplate::kStraightRoad: return build_straight(spec, origin, m, false);
    case MapTemplate::kHilly: return build_straight(spec, origin, m, true);
    case MapTemplate::kCurvedRoad: return build_curved(spec, origin, m);
    case MapTemplate::kFourWay: return build_four_way(spec, origin, m);
  }
  throw DomainError("unknown map template");
}

// Lateral offset profile of the ego: a half-cosine step of `ramp` frames.
double cosine_step(double t, double start, double ramp) {
  if (t <= start) return 0.0;
  if (t >= start + ramp) return 1.0;
  return 0.5 * (1.0 - std::cos(kPi * (t - start) / ramp));
}

double cosine_step_slope(double t, double start, double ramp) {
  if (t <= start || t >= start + ramp) return 0.0;
  return 0.5 * kPi / ramp * std::sin(kPi * (t - start) / ramp);
}

constexpr double kManeuverFrames = 30.0;  // lane change duration
constexpr double kNudgeRamp = 15.0;       // frames to reach the nudge offset
constexpr double kNudgeCarOffset = -1.0;  // parked car, right of the lane center

struct EgoTrack {
  std::vector<Pose2> poses;
  std::vector<double> d;  // lateral offset per frame (lane plans)
  double s_end = 0.0;     // reference position at the last frame
  double turn_start_s = 0.0;
  std::optional<Vec2> nudge_car;
  double nudge_car_heading = 0.0;
};

double ramp_distance(const EgoPlan& plan, std::size_t frames, std::size_t t) {
  const double n1 = static_cast<double>(frames) - 2.0;
  const double td = static_cast<double>(t);
  return plan.speed / (10.0 * n1) * td * (td - 1.0) / 2.0;
}

void check_plan(const Layout& lay, const EgoPlan& plan, std::size_t frames, double start_s) {
  if (frames < 50) throw DomainError("snippets need at least 50 frames");
  if (!(plan.speed > 0.0)) throw DomainError("ego speed must be positive");
  const double duration = static_cast<double>(frames - 1) / kFrameRateHz;
  double travel = plan.speed * duration;
  if (plan.kind == EgoPlanKind::kSpeedRamp) travel = ramp_distance(plan, frames, frames - 1);
  if (plan.kind != EgoPlanKind::kTurn && start_s + travel > lay.s_max) {
    throw DomainError("ego plan runs past the end of the road");
  }
  const double tf = static_cast<double>(frames);
  const double f = static_cast<double>(plan.frame);
  switch (plan.kind) {
    case EgoPlanKind::kTurn:
      if (!(plan.radius > 0.0)) throw DomainError("turn radius must be positive");
      break;
    case EgoPlanKind::kLaneChange:
      if (f < 10.0 || f + kManeuverFrames + 10.0 > tf) {
        throw DomainError("lane change must start after frame 10 and end 10 frames before the snippet ends");
      }
      if (lay.kind == MapTemplate::kFourWay &&
          start_s + (f + kManeuverFrames) * plan.speed / kFrameRateHz > 150.0 - lay.box_half - 10.0) {
        throw DomainError("lane change must complete before the intersection");
      }
      break;
    case EgoPlanKind::kNudge: {
      if (!(plan.offset > 0.0) || plan.offset >= kLaneWidth / 2.0) {
        throw DomainError("nudge offset must be in (0, 1.8) m to stay in the lane");
      }
      const double end = f + 2.0 * kNudgeRamp + static_cast<double>(plan.frames);
      if (f < 10.0 || end + 10.0 > tf || plan.frames == 0) {
        throw DomainError("nudge must start after frame 10 and end 10 frames before the snippet ends");
      }
      if (lay.kind == MapTemplate::kFourWay &&
          start_s + end * plan.speed / kFrameRateHz > 150.0 - lay.box_half - 5.0) {
        throw DomainError("nudge must complete before the intersection");
      }
      break;
    }
    default:
      break;
  }
}

EgoTrack ego_track(const Layout& lay, const EgoPlan& plan, std::size_t frames, double start_s) {
  check_plan(lay, plan, frames, start_s);
  EgoTrack out;
  const auto& ref = lay.ref;
  const double v = plan.speed;
  if (plan.kind == EgoPlanKind::kTurn) {
    double s0 = start_s;
    if (lay.kind == MapTemplate::kFourWay) s0 = 150.0 - lay.box_half;
    out.turn_start_s = s0;
    const Vec2 p0 = ref.point(s0, 0.0);
    const Vec2 tan0 = ref.tangent(s0);
    const Vec2 left0 = ref.left(s0);
    const double h0 = std::atan2(tan0.y, tan0.x);
    for (std::size_t t = 0; t < frames; ++t) {
      const double phi = kPi / 2.0 * static_cast<double>(t) / static_cast<double>(frames - 1);
      const Vec2 p = p0 + tan0 * (plan.radius * std::sin(phi)) + left0 * (plan.radius * (1.0 - std::cos(phi)));
      out.poses.push_back({p.x, p.y, wrap_angle(h0 + phi)});
      out.d.push_back(0.0);
    }
    out.s_end = s0;
    return out;
  }

  const double f = static_cast<double>(plan.frame);
  const double hold = static_cast<double>(plan.frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double td = static_cast<double>(t);
    double d = 0.0;
    double d_rate = 0.0;  // per frame
    switch (plan.kind) {
      case EgoPlanKind::kLaneChange:
        d = lay.neighbor_d * cosine_step(td, f, kManeuverFrames);
        d_rate = lay.neighbor_d * cosine_step_slope(td, f, kManeuverFrames);
        break;
      case EgoPlanKind::kNudge:
        d = plan.offset * (cosine_step(td, f, kNudgeRamp) - cosine_step(td, f + kNudgeRamp + hold, kNudgeRamp));
        d_rate = plan.offset * (cosine_step_slope(td, f, kNudgeRamp) -
                                cosine_step_slope(td, f + kNudgeRamp + hold, kNudgeRamp));
        break;
      default:
        break;
    }
    const double s = start_s + (plan.kind == EgoPlanKind::kSpeedRamp ? ramp_distance(plan, frames, t)
                                                                       : v * td / kFrameRateHz);
    const double slope = d_rate / (v / kFrameRateHz);
    const Vec2 p = ref.point(s, d);
    out.poses.push_back({p.x, p.y, wrap_angle(ref.path_heading(s, d, slope))});
    out.d.push_back(d);
    out.s_end = s;
  }
  if (plan.kind == EgoPlanKind::kNudge) {
    const double mid = f + kNudgeRamp + hold / 2.0;
    const double s_mid = start_s + v * mid / kFrameRateHz;
    out.nudge_car = ref.point(s_mid, kNudgeCarOffset);
    const Vec2 tan = ref.tangent(s_mid);
    out.nudge_car_heading = std::atan2(tan.y, tan.x);
  }
  return out;
}

struct ActorDims {
  double length;
  double width;
};

ActorDims dims(ActorClass c) {
  switch (c) {
    case ActorClass::kVehicle: return {4.5, 1.9};
    case ActorClass::kPedestrian: return {0.6, 0.6};
    case ActorClass::kBicyclist: return {1.8, 0.6};
    case ActorClass::kUnknown: return {1.0, 1.0};
  }
  return {1.0, 1.0};
}

// Per-frame states of one actor.
struct ActorTrack {
  std::string id;
  ActorClass actor_class;
  std::vector<Vec2> pos;
  std::vector<double> yaw;
  std::vector<double> speed;
  // Analytic properties for oracle cards.
  double mean_speed = 0.0;
  double speed_var = 0.0;
  std::optional<double> path_curvature;  // set for moving actors
};

double frame_speed(const ActorGroup& g, std::size_t t) {
  return g.speed + (t % 2 == 0 ? g.alternate : -g.alternate);
}

std::vector<ActorTrack> actor_tracks(const Layout& lay, std::span<const ActorGroup> groups,
                                     std::size_t frames) {
  std::vector<ActorTrack> out;
  const auto& ref = lay.ref;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    if (g.actor_class == ActorClass::kUnknown) throw DomainError("actor class must be known");
    if (g.speed < 0.0 || g.alternate < 0.0 || g.alternate > g.speed) {
      throw DomainError("actor speeds must satisfy 0 <= alternate <= speed");
    }
    const bool moving = g.speed > 0.0 && g.kind != ActorGroupKind::kStatic;
    for (std::size_t mi = 0; mi < g.count; ++mi) {
      ActorTrack a;
      a.id = "g" + std::to_string(gi) + "_" + std::string(to_string(g.actor_class)) + "_" + std::to_string(mi);
      a.actor_class = g.actor_class;
      const double s0 = g.s + g.spacing * static_cast<double>(mi);
      double travel = 0.0;
      for (std::size_t t = 0; t < frames; ++t) {
        const double v = moving ? frame_speed(g, t) : 0.0;
        Vec2 p;
        double yaw = 0.0;
        switch (g.kind) {
          case ActorGroupKind::kStatic: {
            p = ref.point(s0, g.d);
            const Vec2 tan = ref.tangent(s0);
            yaw = std::atan2(tan.y, tan.x);
            break;
          }
          case ActorGroupKind::kParallel: {
            const double s = s0 + travel * ref.s_rate(g.d);
            p = ref.point(s, g.d);
            yaw = ref.path_heading(s, g.d, 0.0);
            break;
          }
          case ActorGroupKind::kArc: {
            if (!(g.radius > 0.0)) throw DomainError("arc radius must be positive");
            const double phi = travel / g.radius;
            p = ref.point(s0, g.d) + unit(phi) * g.radius;
            yaw = phi + kPi / 2.0;
            break;
          }
          case ActorGroupKind::kCrossing: {
            if (lay.kind != MapTemplate::kFourWay) {
              throw DomainError("crossing actors need the four_way_intersection template");
            }
            p = lay.origin + Vec2{1.8, -100.0 + g.spacing * static_cast<double>(mi) + s0 + travel};
            yaw = kPi / 2.0;
            break;
          }
        }
        a.pos.push_back(p);
        a.yaw.push_back(wrap_angle(yaw));
        a.speed.push_back(v);
        travel += v / kFrameRateHz;
      }
      a.mean_speed = moving ? g.speed : 0.0;
      a.speed_var = moving ? g.alternate * g.alternate : 0.0;
      if (moving) {
        switch (g.kind) {
          case ActorGroupKind::kParallel:
            a.path_curvature = lay.ref.arc ? 1.0 / (lay.ref.radius - g.d) : 0.0;
            break;
          case ActorGroupKind::kArc: a.path_curvature = 1.0 / g.radius; break;
          case ActorGroupKind::kCrossing: a.path_curvature = 0.0; break;
          default: break;
        }
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<ActorGroup> default_mix(const Layout& lay) {
  std::vector<ActorGroup> g;
  g.push_back({ActorGroupKind::kStatic, ActorClass::kVehicle, 1, 40.0, -4.5, 8.0, 0.0, 0.0, 30.0});
  g.push_back({ActorGroupKind::kParallel, ActorClass::kVehicle, 1, 10.0, lay.neighbor_d, 8.0, 8.0, 0.0, 30.0});
  g.push_back({ActorGroupKind::kParallel, ActorClass::kVehicle, 1, 30.0, lay.neighbor_d, 8.0, 6.0, 1.0, 30.0});
  g.push_back({ActorGroupKind::kArc, ActorClass::kPedestrian, 1, 100.0, -70.0, 8.0, 1.5, 0.0, 30.0});
  if (lay.kind == MapTemplate::kFourWay) {
    g.push_back({ActorGroupKind::kCrossing, ActorClass::kVehicle, 1, 0.0, 0.0, 8.0, 8.0, 0.0, 30.0});
  }
  return g;
}

Snippet assemble(const std::string& id, const std::string& log, std::int64_t start,
                 const EgoTrack& ego, const std::vector<ActorTrack>& actors) {
  Snippet s;
  s.snippet_id = id;
  s.log_id = log;
  const std::size_t n = ego.poses.size();
  s.frame_range = {start, start + static_cast<std::int64_t>(n) - 1};
  for (std::size_t t = 0; t < n; ++t) {
    Frame f;
    f.index = t;
    f.timestamp = static_cast<double>(start + static_cast<std::int64_t>(t)) / kFrameRateHz;
    f.ego_pose = ego.poses[t];
    f.geo = to_geo(ego.poses[t].position());
    for (const auto& a : actors) {
      const auto dm = dims(a.actor_class);
      f.detections.push_back({a.id, a.actor_class, a.pos[t], a.yaw[t], dm.length, dm.width, a.speed[t]});
    }
    if (ego.nudge_car) {
      const auto dm = dims(ActorClass::kVehicle);
      f.detections.push_back({"nudge_parked", ActorClass::kVehicle, *ego.nudge_car,
                              wrap_angle(ego.nudge_car_heading), dm.length, dm.width, 0.0});
    }
    s.frames.push_back(std::move(f));
  }
  return s;
}

// Oracle values for every measure the scenario pins down.
OracleCard make_card(const Snippet& snip, const Layout& lay, const EgoPlan& plan,
                     const EgoTrack& ego, const std::vector<ActorTrack>& actors, bool default_actors,
                     bool no_actors, double roi) {
  OracleCard card;
  card.snippet_id = snip.snippet_id;
  card.roi_radius = roi;
  auto add = [&](const char* name, double expected, double tol) {
    card.fields.push_back({name, expected, tol});
  };
  const bool four_way = lay.kind == MapTemplate::kFourWay;
  const double h = lay.box_half;

  // Infra: the ROI covers the whole template.
  bool in_box = false;
  for (const auto& p : ego.poses) {
    const Vec2 q = p.position() - lay.origin;
    if (four_way && std::abs(q.x) <= h && std::abs(q.y) <= h) in_box = true;
  }
  double curve = 0.0;
  double bike_curve = 0.0;
  if (lay.kind == MapTemplate::kCurvedRoad) {
    curve = (1.0 / lay.spec.radius + 1.0 / (lay.spec.radius - kLaneWidth)) / 2.0;
    bike_curve = 1.0 / (lay.spec.radius + 3.0);
  } else if (four_way) {
    curve = 1.0 / lay.spec.turn_radius / 16.0;
  }
  add("curve_mean", curve, std::max(kExact, kCurveRel * curve));
  add("crossing_total", four_way ? 16.0 : 0.0, kExact);
  add("at_intersection", in_box ? 1.0 : 0.0, kExact);
  add("intersection_roads", four_way ? 4.0 : 0.0, kExact);
  add("intersection_lanes", four_way ? 10.0 : 0.0, kExact);
  add("traffic_lights", four_way ? 4.0 : 0.0, kExact);
  const bool straight_like =
      lay.kind == MapTemplate::kStraightRoad || lay.kind == MapTemplate::kHilly;
  add("signs", straight_like ? 1.0 : 0.0, kExact);
  add("bike_curve", bike_curve, std::max(kExact, kCurveRel * bike_curve));
  add("bike_crossing", 0.0, kExact);
  add("crosswalk_lane_overlaps", four_way ? 3.0 : straight_like ? 2.0 : 0.0, kExact);
  const double height_var =
      lay.kind == MapTemplate::kHilly ? lay.spec.amplitude * lay.spec.amplitude / 2.0 : 0.0;
  add("height_var", height_var, std::max(kExact, 1e-9 * height_var));

  // Traffic: every actor is present in every frame.
  double max_dist = 0.0;
  for (const auto& f : snip.frames) {
    for (const auto& d : f.detections) {
      max_dist = std::max(max_dist, geometry::distance(d.center, f.ego_pose.position()));
    }
  }
  if (max_dist < roi) {
    std::size_t n_static = 0;
    std::size_t n_dynamic = 0;
    std::array<std::size_t, kNumActorClasses> counts{};
    std::vector<double> means;
    double within = 0.0;
    double path_sum = 0.0;
    double path_max = 0.0;
    std::size_t eligible = 0;
    auto account = [&](ActorClass c, double mean_speed, double var, std::optional<double> kappa) {
      (is_static_speed(mean_speed) ? n_static : n_dynamic) += 1;
      ++counts[static_cast<std::size_t>(c)];
      means.push_back(mean_speed);
      within += var;
      if (kappa) {
        path_sum += *kappa;
        path_max = std::max(path_max, *kappa);
        ++eligible;
      }
    };
    for (const auto& a : actors) account(a.actor_class, a.mean_speed, a.speed_var, a.path_curvature);
    if (ego.nudge_car) account(ActorClass::kVehicle, 0.0, 0.0, std::nullopt);
    const std::size_t total = counts[0] + counts[1] + counts[2];
    add("crowd_static", static_cast<double>(n_static), kExact);
    add("crowd_dynamic", static_cast<double>(n_dynamic), kExact);
    const double class_term =
        total == 0 ? 0.0
                   : static_cast<double>((1 + counts[0]) * (1 + counts[1]) * (1 + counts[2])) /
                         static_cast<double>(total);
    add("class_div", class_term, kExact);
    const double path_mean = eligible ? path_sum / static_cast<double>(eligible) : 0.0;
    add("actor_path_mean", path_mean, std::max(kExact, kCurveRel * path_mean));
    add("actor_path_max", path_max, std::max(kExact, kCurveRel * path_max));
    const double speed_div = means.empty() ? 0.0 : population_variance(means) + within;
    add("speed_div", speed_div, std::max(kExact, 1e-9 * speed_div));
  }

  // Ego motion.
  const double n_int = static_cast<double>(ego.poses.size() - 1);
  switch (plan.kind) {
    case EgoPlanKind::kCruise:
      add("sdv_path", lay.ref.curvature(), std::max(kExact, kCurveRel * lay.ref.curvature()));
      add("sdv_speed_var", 0.0, kExact);
      break;
    case EgoPlanKind::kSpeedRamp: {
      add("sdv_path", lay.ref.curvature(), std::max(kExact, kCurveRel * lay.ref.curvature()));
      const double step = plan.speed / (n_int - 1.0);
      const double var = step * step * (n_int * n_int - 1.0) / 12.0;
      add("sdv_speed_var", var, kRampRel * var);
      break;
    }
    case EgoPlanKind::kTurn:
      add("sdv_path", 1.0 / plan.radius, 2.0 * kCurveRel / plan.radius);
      add("sdv_speed_var", 0.0, kExact);
      break;
    default:
      break;
  }

  // Route events.
  const bool turn = plan.kind == EgoPlanKind::kTurn;
  const bool matched_turn = turn && four_way && std::abs(plan.radius - lay.spec.turn_radius) < 1e-9;
  const bool lost_turn = turn && !four_way && plan.radius <= 40.0 &&
                         (lay.kind != MapTemplate::kCurvedRoad || lay.spec.radius >= 2.0 * plan.radius);
  if (!turn || matched_turn || lost_turn) {
    add("lane_changes", plan.kind == EgoPlanKind::kLaneChange ? 1.0 : 0.0, kExact);
    add("turns", matched_turn ? 1.0 : 0.0, kExact);
    add("controls_on_route", four_way && !lost_turn ? 1.0 : 0.0, kExact);
    double nudges = 0.0;
    bool nudge_known = true;
    if (plan.kind == EgoPlanKind::kNudge) {
      nudge_known = std::abs(plan.offset - 0.8) >= 0.05;
      nudges = plan.offset > 0.8 ? 1.0 : 0.0;
    }
    if (nudge_known) add("nudges", nudges, kExact);
  }

  // Interactions. Only templates without lane crossings, or known actor
  // mixes at the intersection, have closed-form conflict counts.
  const double x_end = -150.0 + ego.s_end;  // four-way: ego x at the last frame
  if (!four_way) {
    add("conflict_traversals", 0.0, kExact);
    add("conflict_reachable", 0.0, kExact);
  } else if (no_actors || default_actors) {
    const double box_frames = (std::min(x_end, h) + h) / (plan.speed / kFrameRateHz);
    const bool crosses = !turn && x_end > -h && box_frames >= 15.0;
    const bool short_of_box = !turn && x_end < -h - 5.0;
    if (matched_turn || crosses || short_of_box) {
      add("conflict_traversals", default_actors && crosses ? 1.0 : 0.0, kExact);
      add("conflict_reachable", 0.0, kExact);
    }
  }
  if (!turn && (no_actors || default_actors)) {
    const std::size_t nudge_car = ego.nudge_car ? 1 : 0;
    if (no_actors) {
      add("near_path_static", static_cast<double>(nudge_car), kExact);
      add("near_path_dynamic", 0.0, kExact);
    } else if (ego.s_end >= 41.0 && (!four_way || std::abs(x_end - (1.8 - 10.0)) >= 1.0)) {
      const bool crossing_near = four_way && x_end > 1.8 - 10.0;
      add("near_path_static", static_cast<double>(1 + nudge_car), kExact);
      add("near_path_dynamic", crossing_near ? 3.0 : 2.0, kExact);
    }
  }
  return card;
}

MapTemplate template_from_string(const std::string& s) {
  if (s == "straight_road") return MapTemplate::kStraightRoad;
  if (s == "curved_road") return MapTemplate::kCurvedRoad;
  if (s == "four_way_intersection") return MapTemplate::kFourWay;
  if (s == "hilly") return MapTemplate::kHilly;
  throw InputError("unknown map template: " + s);
}

EgoPlanKind plan_from_string(const std::string& s) {
  if (s == "cruise") return EgoPlanKind::kCruise;
  if (s == "turn") return EgoPlanKind::kTurn;
  if (s == "lane_change") return EgoPlanKind::kLaneChange;
  if (s == "nudge") return EgoPlanKind::kNudge;
  if (s == "speed_ramp") return EgoPlanKind::kSpeedRamp;
  throw InputError("unknown ego plan: " + s);
}

ActorGroupKind group_from_string(const std::string& s) {
  if (s == "static") return ActorGroupKind::kStatic;
  if (s == "parallel") return ActorGroupKind::kParallel;
  if (s == "arc") return ActorGroupKind::kArc;
  if (s == "crossing") return ActorGroupKind::kCrossing;
  throw InputError("unknown actor group kind: " + s);
}

// Portable uniform draws; std distributions differ between library vendors.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(n))) % n;
}

}  // namespace

GeneratedPool generate_pool(const ScenarioSpec& spec) {
  GeneratedPool out;
  out.pool.snippet_length = spec.frames;
  out.pool.map_path = "map.json";
  const Layout lay = build_template(spec.map, {0.0, 0.0}, out.pool.map);
  const bool default_actors = !spec.actors.has_value();
  const auto groups = default_actors ? default_mix(lay) : *spec.actors;
  const bool no_actors = !default_actors && groups.empty();
  const EgoTrack ego = ego_track(lay, spec.ego, spec.frames, 0.0);
  const auto actors = actor_tracks(lay, groups, spec.frames);

  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = 0; i < spec.snippets; ++i) {
    char id[64];
    std::snprintf(id, sizeof id, "syn_%llu_%04zu", static_cast<unsigned long long>(spec.seed), i);
    const auto start = static_cast<std::int64_t>(uniform_index(rng, 10000));
    Snippet s = assemble(id, std::string("log_") + id, start, ego, actors);
    out.cards.push_back(make_card(s, lay, spec.ego, ego, actors, default_actors, no_actors, spec.roi_radius));
    out.pool.snippets.push_back(std::move(s));
  }
  return out;
}

ScenarioSpec spec_from_json(const Json& j) {
  ScenarioSpec s;
  try {
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("map")) {
      const auto& m = j.at("map");
      s.map.kind = template_from_string(m.at("template").get<std::string>());
      s.map.radius = m.value("radius", s.map.radius);
      s.map.turn_radius = m.value("turn_radius", s.map.turn_radius);
      s.map.amplitude = m.value("amplitude", s.map.amplitude);
    }
    if (j.contains("ego")) {
      const auto& e = j.at("ego");
      s.ego.kind = plan_from_string(e.at("plan").get<std::string>());
      s.ego.speed = e.value("speed", s.ego.speed);
      s.ego.radius = e.value("radius", s.ego.radius);
      s.ego.frame = e.value("frame", s.ego.frame);
      s.ego.offset = e.value("offset", s.ego.offset);
      s.ego.frames = e.value("frames", s.ego.frames);
    }
    if (j.contains("actors")) {
      std::vector<ActorGroup> groups;
      for (const auto& a : j.at("actors")) {
        ActorGroup g;
        g.kind = group_from_string(a.at("kind").get<std::string>());
        g.actor_class = actor_class_from_string(a.value("class", std::string("vehicle")));
        g.count = a.value("count", g.count);
        g.s = a.value("s", g.s);
        g.d = a.value("d", g.d);
        g.spacing = a.value("spacing", g.spacing);
        g.speed = a.value("speed", g.speed);
        g.alternate = a.value("alternate", g.alternate);
        g.radius = a.value("radius", g.radius);
        groups.push_back(g);
      }
      s.actors = std::move(groups);
    }
    s.snippets = j.value("snippets", s.snippets);
    s.frames = j.value("frames", s.frames);
    s.roi_radius = j.value("roi_radius", s.roi_radius);
  } catch (const Json::exception& e) {
    throw InputError(std::string("scenario spec: ") + e.what());
  }
  if (s.snippets == 0) throw InputError("scenario spec: snippets must be positive");
  return s;
}

Json to_json(const OracleCard& card) {
  Json fields = Json::array();
  for (const auto& f : card.fields) {
    fields.push_back({{"name", f.name}, {"expected", f.expected}, {"tolerance", f.tolerance}});
  }
  return {{"snippet_id", card.snippet_id}, {"roi_radius", card.roi_radius}, {"fields", fields}};
}

SnippetPool random_pool(std::uint64_t seed, const RandomPoolOptions& options) {
  SnippetPool pool;
  pool.snippet_length = options.frames;
  pool.map_path = "map.json";
  std::vector<Layout> layouts;
  const MapTemplate kinds[] = {MapTemplate::kStraightRoad, MapTemplate::kCurvedRoad,
                               MapTemplate::kFourWay, MapTemplate::kHilly};
  for (std::size_t k = 0; k < 4; ++k) {
    TemplateSpec t;
    t.kind = kinds[k];
    layouts.push_back(build_template(t, {5000.0 * static_cast<double>(k), 0.0}, pool.map));
  }

  std::mt19937_64 rng(seed);
  const std::size_t n = options.snippets;
  const std::size_t logs = options.logs ? options.logs : std::max<std::size_t>(1, n / 3);
  const auto n_bikes = static_cast<std::size_t>(std::llround(options.bicycle_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  std::vector<bool> has_bike(n, false);
  for (std::size_t i = 0; i < n_bikes && i < n; ++i) has_bike[order[i]] = true;

  const double T = static_cast<double>(options.frames);
  for (std::size_t i = 0; i < n; ++i) {
    const Layout& lay = layouts[uniform_index(rng, 4)];
    EgoPlan plan;
    std::vector<ActorGroup> groups;
    double start_s = 0.0;
    if (options.fixed_mix) {
      plan.kind = EgoPlanKind::kCruise;
      plan.speed = uniform(rng, 8.0, 12.0);
      start_s = uniform(rng, 0.0, 40.0);
      const double v = plan.speed;
      groups.push_back({ActorGroupKind::kParallel, ActorClass::kVehicle, 1, start_s + 10.0, lay.neighbor_d, 8.0, v, 0.0, 30.0});
      groups.push_back({ActorGroupKind::kParallel, ActorClass::kVehicle, 1, start_s + 25.0, 0.0, 8.0, v, 1.0, 30.0});
      groups.push_back({ActorGroupKind::kParallel, ActorClass::kPedestrian, 1, start_s + 5.0, -6.0, 8.0, v, 0.0, 30.0});
      if (has_bike[i]) {
        groups.push_back({ActorGroupKind::kParallel, ActorClass::kBicyclist, 1, start_s - 5.0, -3.0, 8.0, v, 0.0, 30.0});
      }
    } else {
      plan.kind = static_cast<EgoPlanKind>(uniform_index(rng, 5));
      plan.speed = uniform(rng, 6.0, 12.0);
      start_s = uniform(rng, 0.0, lay.kind == MapTemplate::kFourWay ? 20.0 : 100.0);
      const double per_frame = plan.speed / kFrameRateHz;
      if (plan.kind == EgoPlanKind::kTurn) {
        plan.radius = lay.kind == MapTemplate::kFourWay ? lay.spec.turn_radius : uniform(rng, 15.0, 40.0);
      } else if (plan.kind == EgoPlanKind::kLaneChange) {
        double hi = T - kManeuverFrames - 15.0;
        if (lay.kind == MapTemplate::kFourWay) {
          hi = std::min(hi, (150.0 - lay.box_half - 12.0 - start_s) / per_frame - kManeuverFrames);
        }
        plan.frame = static_cast<std::size_t>(uniform(rng, 15.0, std::max(15.0, hi)));
        if (static_cast<double>(plan.frame) > hi) plan.kind = EgoPlanKind::kCruise;
      } else if (plan.kind == EgoPlanKind::kNudge) {
        plan.offset = uniform(rng, 0.5, 1.6);
        plan.frames = static_cast<std::size_t>(uniform(rng, 10.0, 40.0));
        double hi = T - 2.0 * kNudgeRamp - static_cast<double>(plan.frames) - 15.0;
        if (lay.kind == MapTemplate::kFourWay) {
          hi = std::min(hi, (150.0 - lay.box_half - 8.0 - start_s) / per_frame - 2.0 * kNudgeRamp -
                                static_cast<double>(plan.frames));
        }
        plan.frame = static_cast<std::size_t>(uniform(rng, 15.0, std::max(15.0, hi)));
        if (static_cast<double>(plan.frame) > hi) plan.kind = EgoPlanKind::kCruise;
      } else if (plan.kind == EgoPlanKind::kSpeedRamp) {
        plan.speed = uniform(rng, 6.0, 14.0);
      }
      const std::size_t n_static = uniform_index(rng, 3);
      for (std::size_t k = 0; k < n_static; ++k) {
        const auto cls = uniform_index(rng, 2) == 0 ? ActorClass::kVehicle : ActorClass::kPedestrian;
        groups.push_back({ActorGroupKind::kStatic, cls, 1, start_s + uniform(rng, 0.0, 150.0),
                          uniform_index(rng, 2) == 0 ? -4.5 : 6.0, 8.0, 0.0, 0.0, 30.0});
      }
      const std::size_t n_parallel = uniform_index(rng, 4);
      for (std::size_t k = 0; k < n_parallel; ++k) {
        const double v = uniform(rng, 3.0, 14.0);
        const double alt = uniform_index(rng, 2) == 0 ? 0.0 : uniform(rng, 0.0, 2.0);
        groups.push_back({ActorGroupKind::kParallel, ActorClass::kVehicle, 1, start_s + uniform(rng, -20.0, 60.0),
                          uniform_index(rng, 2) == 0 ? lay.neighbor_d : 0.0, 8.0, v, std::min(alt, v), 30.0});
      }
      const std::size_t n_arc = uniform_index(rng, 3);
      for (std::size_t k = 0; k < n_arc; ++k) {
        groups.push_back({ActorGroupKind::kArc, ActorClass::kPedestrian, 1, start_s + uniform(rng, 0.0, 150.0),
                          uniform_index(rng, 2) == 0 ? -25.0 : 25.0, 8.0, uniform(rng, 0.8, 2.0), 0.0,
                          uniform(rng, 5.0, 20.0)});
      }
      if (lay.kind == MapTemplate::kFourWay && uniform_index(rng, 2) == 0) {
        groups.push_back({ActorGroupKind::kCrossing, ActorClass::kVehicle, 1, uniform(rng, 0.0, 60.0), 0.0,
                          8.0, uniform(rng, 5.0, 12.0), 0.0, 30.0});
      }
      if (has_bike[i]) {
        groups.push_back({ActorGroupKind::kParallel, ActorClass::kBicyclist, 1, start_s + uniform(rng, 0.0, 30.0),
                          -3.0, 8.0, uniform(rng, 3.0, 7.0), 0.0, 30.0});
      }
    }
    const EgoTrack ego = ego_track(lay, plan, options.frames, start_s);
    const auto actors = actor_tracks(lay, groups, options.frames);
    char id[32];
    std::snprintf(id, sizeof id, "r%05zu", i);
    char log[32];
    std::snprintf(log, sizeof log, "log%04zu", uniform_index(rng, logs));
    const auto start = static_cast<std::int64_t>(uniform_index(rng, 1500));
    pool.snippets.push_back(assemble(id, log, start, ego, actors));
  }
  return pool;
}

}  // namespace curator::synth
