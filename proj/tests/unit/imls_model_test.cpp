#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "imls/imls_model.hpp"

namespace imls {
namespace {

FeaturedCloud grid_plane(double z, double half, double spacing, const Vector3& normal) {
  FeaturedCloud c;
  for (double x = -half; x <= half + 1e-9; x += spacing) {
    for (double y = -half; y <= half + 1e-9; y += spacing) {
      c.push_back(Point3(x, y, z), normal, 1.0, true);
    }
  }
  return c;
}

// Implicit surface value summed directly over every model point within r, without an index.
double direct_imls(const ModelMap& map, const Point3& x) {
  double num = 0.0, den = 0.0;
  const auto pts = map.points();
  const auto nrm = map.normals();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = (x - pts[i]).norm();
    if (d > map.radius()) continue;
    const double w = std::exp(-d * d / (map.kernel_width() * map.kernel_width()));
    num += w * (x - pts[i]).dot(nrm[i]);
    den += w;
  }
  return num / den;
}

TEST(ImlsWeight, TruncationBound) {
  const double w = imls_weight(0.20, 0.06);
  EXPECT_LE(w, 0.0002);
  EXPECT_NEAR(w, std::exp(-100.0 / 9.0), 1e-18);
  EXPECT_EQ(imls_weight(0.0, 0.06), 1.0);
}

TEST(ModelMap, RejectsBadParameters) {
  EXPECT_THROW(ModelMap(0, 0.06, 0.2), std::invalid_argument);
  EXPECT_THROW(ModelMap(1, 0.0, 0.2), std::invalid_argument);
  EXPECT_THROW(ModelMap(1, 0.06, -1.0), std::invalid_argument);
}

TEST(ModelMap, EmptyMapHasNoSupport) {
  const ModelMap map(3, 0.06, 0.2);
  EXPECT_TRUE(map.empty());
  EXPECT_FALSE(map.evaluate(Point3::Zero()).has_value());
  EXPECT_FALSE(map.project(Point3::Zero()).has_value());
}

TEST(ModelMap, FifoEviction) {
  ModelMap map(2, 0.06, 0.2);
  for (int k = 1; k <= 3; ++k) {
    FeaturedCloud c;
    c.push_back(Point3(k, 0, 0), Vector3::UnitZ(), 1.0, true);
    c.push_back(Point3(k, 1, 0), Vector3::UnitZ(), 1.0, true);
    map.insert_scan(c);
    EXPECT_EQ(map.scan_count(), static_cast<std::size_t>(std::min(k, 2)));
  }
  EXPECT_EQ(map.scans().front().points[0].x(), 2.0);
  EXPECT_EQ(map.scans().back().points[0].x(), 3.0);
  EXPECT_EQ(map.point_count(), 4u);
}

TEST(ModelMap, IndexHoldsExactlyTheMemberPoints) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> size(1, 40);
  ModelMap map(4, 0.06, 0.2);
  for (int k = 0; k < 15; ++k) {
    FeaturedCloud c;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) c.push_back(Point3(u(rng), u(rng), u(rng)), Vector3::UnitZ(), 1, true);
    map.insert_scan(c);

    std::vector<Point3> members;
    for (const auto& s : map.scans()) members.insert(members.end(), s.points.begin(), s.points.end());
    ASSERT_EQ(map.index().size(), members.size());
    // Every member is found at distance zero; a large radius returns all.
    for (const auto& p : members) EXPECT_EQ(map.nearest(p)->squared_distance, 0.0);
    EXPECT_EQ(map.index().radius(Point3::Zero(), 100.0).size(), members.size());
  }
}

TEST(Evaluate, PlaneIsExact) {
  ModelMap map(1, 0.06, 0.2);
  map.insert_scan(grid_plane(0.0, 1.0, 0.02, Vector3::UnitZ()));
  const auto e = map.evaluate(Point3(0, 0, 0.05));
  ASSERT_TRUE(e.has_value());
  EXPECT_NEAR(e->value, 0.05, 1e-6);
  EXPECT_EQ(e->normal, Vector3::UnitZ());
  EXPECT_GE(e->support, 1u);
  EXPECT_LE(std::abs(e->value), map.radius());
  const auto below = map.evaluate(Point3(0.013, -0.4, -0.12));
  EXPECT_NEAR(below->value, -0.12, 1e-9);
}

TEST(Evaluate, NoSupportBeyondRadius) {
  ModelMap map(1, 0.06, 0.2);
  map.insert_scan(grid_plane(0.0, 1.0, 0.02, Vector3::UnitZ()));
  EXPECT_FALSE(map.evaluate(Point3(0, 0, 0.21)).has_value());
  EXPECT_FALSE(map.evaluate(Point3(5, 0, 0)).has_value());
}

TEST(Evaluate, TwoParallelPlanesMatchDirectSummation) {
  ModelMap map(2, 0.06, 0.5);
  map.insert_scan(grid_plane(0.0, 1.0, 0.05, Vector3::UnitZ()));
  map.insert_scan(grid_plane(0.5, 1.0, 0.05, Vector3::UnitZ()));
  for (const Point3 x : {Point3(0, 0, 0.1), Point3(0.01, 0.02, 0.25), Point3(0.3, -0.2, 0.4)}) {
    const auto e = map.evaluate(x);
    ASSERT_TRUE(e.has_value());
    EXPECT_NEAR(e->value, direct_imls(map, x), 1e-9);
  }
  // Both planes contribute at z = 0.25 with equal weight: mean of +0.25 and -0.25.
  EXPECT_NEAR(map.evaluate(Point3(0, 0, 0.25))->value, 0.0, 1e-9);
}

TEST(Evaluate, RandomMapsMatchDirectSummation) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    FeaturedCloud c;
    for (int i = 0; i < 1000; ++i) {
      c.push_back(Point3(u(rng), u(rng), 0.2 * u(rng)),
                  Vector3(n(rng), n(rng), n(rng)).normalized(), 1.0, true);
    }
    ModelMap map(1, 0.06, 0.2);
    map.insert_scan(c);
    for (int q = 0; q < 200; ++q) {
      const Point3 x(u(rng), u(rng), 0.2 * u(rng));
      const auto e = map.evaluate(x);
      if (!e) continue;
      EXPECT_NEAR(e->value, direct_imls(map, x), 1e-12);
    }
  }
}

TEST(Project, PlaneProjectionIsExact) {
  ModelMap map(1, 0.06, 0.2);
  map.insert_scan(grid_plane(0.0, 1.0, 0.02, Vector3::UnitZ()));
  const auto y = map.project(Point3(0, 0, 0.05));
  ASSERT_TRUE(y.has_value());
  EXPECT_LT((y->point - Point3::Zero()).norm(), 1e-9);
  const auto fixed = map.project(Point3(0.3, 0.1, 0.0));
  EXPECT_LT((fixed->point - Point3(0.3, 0.1, 0.0)).norm(), 1e-12);
}

TEST(Project, SphereProjectionLandsOnSurface) {
  // 100k points on a 5 m sphere, normals toward the center (sensor inside).
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  FeaturedCloud c;
  for (int i = 0; i < 100000; ++i) {
    const Vector3 d = Vector3(n(rng), n(rng), n(rng)).normalized();
    c.push_back(5.0 * d, -d, 1.0, true);
  }
  ModelMap map(1, 0.06, 0.2);
  map.insert_scan(c);
  for (int q = 0; q < 200; ++q) {
    const Vector3 d = Vector3(n(rng), n(rng), n(rng)).normalized();
    const auto y = map.project(5.05 * d);
    ASSERT_TRUE(y.has_value());
    EXPECT_GE(y->point.norm(), 4.999);
    EXPECT_LE(y->point.norm(), 5.001);
  }
}

TEST(Project, RigidlyEquivariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  FeaturedCloud c;
  for (int i = 0; i < 20000; ++i) {
    const Vector3 d = Vector3(n(rng), n(rng), n(rng)).normalized();
    c.push_back(3.0 * d, d, 1.0, true);
  }
  const RigidTransform g =
      RigidTransform::from_axis_angle(Vector3(0.2, 1, -0.3).normalized(), 0.8, Vector3(10, 4, -2));
  ModelMap a(1, 0.06, 0.2), b(1, 0.06, 0.2);
  a.insert_scan(c);
  b.insert_scan(c.transformed(g));
  for (int q = 0; q < 100; ++q) {
    const Point3 x = 3.03 * Vector3(n(rng), n(rng), n(rng)).normalized();
    const auto ya = a.project(x);
    const auto yb = b.project(g * x);
    ASSERT_TRUE(ya && yb);
    EXPECT_LT((yb->point - g * ya->point).norm(), 1e-6);
  }
}

TEST(Project, EvictionKeepsResultsSupportedBySurvivors) {
  ModelMap map(2, 0.06, 0.2);
  map.insert_scan(grid_plane(0.0, 1.0, 0.05, Vector3::UnitZ()));    // will be evicted
  map.insert_scan(grid_plane(10.0, 1.0, 0.05, Vector3::UnitZ()));   // survives
  const Point3 x(0.1, 0.2, 10.07);
  const double before = map.evaluate(x)->value;
  map.insert_scan(grid_plane(-10.0, 1.0, 0.05, Vector3::UnitZ()));
  EXPECT_EQ(map.evaluate(x)->value, before);
  EXPECT_FALSE(map.evaluate(Point3(0, 0, 0.05)).has_value());
}

}  // namespace
}  // namespace imls
