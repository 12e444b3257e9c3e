#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curator/error.hpp"
#include "curator/geometry.hpp"
#include "test_support.hpp"

namespace curator {
namespace {

using namespace geometry;
using testing::circle_points;
using testing::line_points;

// Values frozen from tests/oracles/derive_values.py (numpy reference).
constexpr double kCircleComplexity = 0.10015335287430287;
constexpr double kCircleRadialError = 0.0003807305074960965;
constexpr double kClothoidComplexity = 0.10391166449335609;

std::vector<Vec2> clothoid(double length = 50.0, double rate = 0.004, int steps = 5000) {
  const double h = length / steps;
  std::vector<Vec2> pts{{0.0, 0.0}};
  double x = 0.0, y = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double sm = (i + 0.5) * h;
    const double th = 0.5 * rate * sm * sm;
    x += h * std::cos(th);
    y += h * std::sin(th);
    pts.push_back({x, y});
  }
  return pts;
}

TEST(Resample, SegmentUniformSpacing) {
  const std::vector<Vec2> seg{{0, 0}, {10, 0}};
  const auto p = resample_arclength(seg, 11);
  ASSERT_EQ(p.size(), 11u);
  for (std::size_t i = 0; i < 11; ++i) {
    EXPECT_NEAR(p.waypoints()[i].x, static_cast<double>(i), 1e-12);
    EXPECT_EQ(p.waypoints()[i].y, 0.0);
  }
}

TEST(Resample, LShapeKeepsUnitSpacing) {
  const std::vector<Vec2> l{{0, 0}, {10, 0}, {10, 10}};
  const auto p = resample_arclength(l, 21);
  for (std::size_t i = 1; i < p.size(); ++i) {
    EXPECT_NEAR(p.arclengths()[i] - p.arclengths()[i - 1], 1.0, 1e-12);
  }
  // The corner lies on a sample, so chords equal arc spacing everywhere.
  for (std::size_t i = 1; i < p.size(); ++i) {
    EXPECT_NEAR(distance(p.waypoints()[i], p.waypoints()[i - 1]), 1.0, 1e-12);
  }
}

TEST(Resample, CircleStaysWithinChordSagitta) {
  const auto p = resample_arclength(circle_points(10.0, 360), 100);
  double worst = 0.0;
  for (const auto& q : p.waypoints()) worst = std::max(worst, std::abs(norm(q) - 10.0));
  // Linear interpolation between input samples sits inside the circle by at
  // most the sagitta r(1 - cos(pi/360)).
  EXPECT_LE(worst, 10.0 * (1.0 - std::cos(M_PI / 360.0)) + 1e-12);
  EXPECT_NEAR(worst, kCircleRadialError, 1e-9);
}

TEST(Resample, RejectsDegenerateInput) {
  const std::vector<Vec2> one{{1, 1}, {1, 1}};
  EXPECT_THROW(resample_arclength(one, 10), DomainError);
  const std::vector<Vec2> seg{{0, 0}, {1, 0}};
  EXPECT_THROW(resample_arclength(seg, 2), DomainError);
}

TEST(Resample, PreservesEndpoints) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({u(rng), u(rng)});
    const auto p = resample_arclength(pts, 37);
    EXPECT_EQ(p.front().x, pts.front().x);
    EXPECT_EQ(p.back().y, pts.back().y);
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_GE(p.arclengths()[i], p.arclengths()[i - 1]);
  }
}

TEST(Curvature, StraightSegmentIsZero) {
  const auto prof = curvature_profile(resample_arclength(line_points({0, 0}, {30, 40}, 5), 100));
  for (double k : prof.kappa) EXPECT_NEAR(k, 0.0, 1e-12);
  for (double k : prof.kappa_dot) EXPECT_NEAR(k, 0.0, 1e-12);
}

TEST(Curvature, CircleInteriorNearInverseRadius) {
  const auto prof = curvature_profile(resample_arclength(circle_points(10.0, 360), 100));
  for (std::size_t i = 1; i + 1 < prof.kappa.size(); ++i) {
    EXPECT_NEAR(std::abs(prof.kappa[i]), 0.1, 1e-3) << i;
  }
}

TEST(Curvature, SignFollowsTurnDirection) {
  auto pts = circle_points(10.0, 360);
  const auto ccw = curvature_profile(resample_arclength(pts, 100));
  std::reverse(pts.begin(), pts.end());
  const auto cw = curvature_profile(resample_arclength(pts, 100));
  EXPECT_GT(ccw.kappa[50], 0.0);
  EXPECT_LT(cw.kappa[50], 0.0);
}

TEST(Curvature, ClothoidRateOfChange) {
  const auto prof = curvature_profile(resample_arclength(clothoid(), 100));
  // One-sided differences at the ends pull the first few samples away.
  for (std::size_t i = 5; i + 5 < prof.kappa_dot.size(); ++i) {
    EXPECT_NEAR(prof.kappa_dot[i], 0.004, 1e-5) << i;
  }
  auto kdot = prof.kappa_dot;
  std::nth_element(kdot.begin(), kdot.begin() + 50, kdot.end());
  EXPECT_NEAR(kdot[50], 0.0039999980, 1e-8);
}

TEST(CurveComplexity, SlantedLineIsExactlyZero) {
  EXPECT_EQ(polyline_complexity(line_points({3, -4}, {100, 21}, 7), 100), 0.0);
}

TEST(CurveComplexity, MatchesReferenceValues) {
  EXPECT_EQ(polyline_complexity(line_points({0, 0}, {100, 0}, 11), 100), 0.0);
  const double circle = polyline_complexity(circle_points(10.0, 360), 100);
  EXPECT_NEAR(circle, 0.1, 2e-3);
  EXPECT_NEAR(circle, kCircleComplexity, 1e-9);
  const double cl = polyline_complexity(clothoid(), 100);
  EXPECT_NEAR(cl, 0.104, 1e-3);
  EXPECT_NEAR(cl, kClothoidComplexity, 1e-9);
}

TEST(CurveComplexity, RigidMotionInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), off(-1000, 1000);
  const auto base = clothoid();
  const double ref = polyline_complexity(base, 100);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = ang(rng);
    const Vec2 t{off(rng), off(rng)};
    std::vector<Vec2> moved;
    for (auto p : base) {
      moved.push_back({std::cos(a) * p.x - std::sin(a) * p.y + t.x,
                       std::sin(a) * p.x + std::cos(a) * p.y + t.y});
    }
    EXPECT_NEAR(polyline_complexity(moved, 100), ref, 1e-9);
  }
}

TEST(CurveComplexity, DegenerateInputsAreZero) {
  const std::vector<Vec2> still{{3, 3}, {3, 3}, {3, 3}};
  EXPECT_EQ(polyline_complexity(still, 100), 0.0);
}

TEST(Crossings, ParallelLanesDoNotCross) {
  std::vector<Path> lanes{Path::from_points(line_points({0, 0}, {100, 0}, 2)),
                          Path::from_points(line_points({0, 3.6}, {100, 3.6}, 2))};
  EXPECT_EQ(count_crossings(lanes).total, 0u);
}

TEST(Crossings, PerpendicularPairCountsOnEachLane) {
  std::vector<Path> lanes{Path::from_points(line_points({-10, 0}, {10, 0}, 2)),
                          Path::from_points(line_points({0, -10}, {0, 10}, 2))};
  const auto c = count_crossings(lanes);
  EXPECT_EQ(c.per_lane[0], 1u);
  EXPECT_EQ(c.per_lane[1], 1u);
  EXPECT_EQ(c.total, 2u);
}

TEST(Crossings, FourWayThroughLanes) {
  std::vector<Path> lanes{Path::from_points(line_points({-30, -1.8}, {30, -1.8}, 2)),
                          Path::from_points(line_points({30, 1.8}, {-30, 1.8}, 2)),
                          Path::from_points(line_points({1.8, -30}, {1.8, 30}, 2)),
                          Path::from_points(line_points({-1.8, 30}, {-1.8, -30}, 2))};
  const auto c = count_crossings(lanes);
  for (auto v : c.per_lane) EXPECT_EQ(v, 2u);
  EXPECT_EQ(c.total, 8u);
}

TEST(Crossings, SharedEndpointIsNotACrossing) {
  const auto a = Path::from_points(line_points({0, 0}, {10, 0}, 2));
  const auto b = Path::from_points(line_points({10, 0}, {10, 10}, 2));
  EXPECT_EQ(pair_crossings(a, b), 0u);
}

TEST(Distance, PointToSegment) {
  const auto seg = Path::from_points(line_points({-10, 0}, {10, 0}, 2));
  EXPECT_EQ(point_polyline_distance({3, 0}, seg), 0.0);
  EXPECT_DOUBLE_EQ(point_polyline_distance({0, 5}, seg), 5.0);
  EXPECT_DOUBLE_EQ(point_polyline_distance({15, 5}, seg), std::sqrt(50.0));
}

TEST(Polygon, PathIntersection) {
  const Polygon sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  EXPECT_TRUE(polygon_polyline_intersects(sq, Path::from_points(line_points({-5, 0}, {5, 0}, 2))));
  EXPECT_FALSE(polygon_polyline_intersects(sq, Path::from_points(line_points({-5, 3}, {5, 3}, 2))));
  // Touching an edge counts.
  EXPECT_TRUE(polygon_polyline_intersects(sq, Path::from_points(line_points({-5, 1}, {5, 1}, 2))));
}

TEST(Polygon, SimpleCheck) {
  EXPECT_TRUE(is_simple_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  EXPECT_FALSE(is_simple_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
}

}  // namespace
}  // namespace curator
