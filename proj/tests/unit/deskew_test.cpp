#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "imls/deskew.hpp"
#include "imls/simulator.hpp"

namespace imls {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

RigidTransform rz(double deg, const Vector3& t = Vector3::Zero()) {
  return RigidTransform::from_axis_angle(Vector3::UnitZ(), deg * kDeg, t);
}

Sweep sweep_of(std::vector<std::pair<Point3, double>> pts, bool pre_deskewed = false) {
  Sweep s;
  for (const auto& [p, u] : pts) s.points.push_back({p, u, std::nullopt});
  s.pre_deskewed = pre_deskewed;
  return s;
}

TEST(PredictPose, StationaryVehicle) {
  const RigidTransform t = rz(30.0, Vector3(4, 5, 6));
  const RigidTransform p = predict_pose({t, t});
  EXPECT_LT((p.matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PredictPose, ConstantLinearVelocity) {
  const RigidTransform p = predict_pose(
      {RigidTransform::from_translation(Vector3(1, 0, 0)), RigidTransform::identity()});
  EXPECT_LT((p.translation() - Vector3(2, 0, 0)).norm(), 1e-15);
  EXPECT_LT(rotation_angle(p.rotation()), 1e-15);
}

TEST(PredictPose, MatchesMatrixProductFormula) {
  const RigidTransform prev = rz(10.0, Vector3(1, 0, 0));
  const RigidTransform prev2 = RigidTransform::identity();
  const Eigen::Matrix4d expected = prev.matrix() * prev2.matrix().inverse() * prev.matrix();
  EXPECT_LT((predict_pose({prev, prev2}).matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
  // Rz(10)+t(1,0,0) twice: Rz(20), t = (1,0,0) + Rz(10)(1,0,0).
  const RigidTransform p = predict_pose({prev, prev2});
  EXPECT_NEAR(rotation_angle(p.rotation()), 20.0 * kDeg, 1e-12);
  EXPECT_LT((p.translation() - Vector3(1 + std::cos(10 * kDeg), std::sin(10 * kDeg), 0)).norm(),
            1e-12);
}

TEST(PredictPose, FixedPointForRandomPoses) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const RigidTransform t = RigidTransform::from_axis_angle(
        Vector3(n(rng), n(rng), n(rng)).normalized(), n(rng), Vector3(n(rng), n(rng), n(rng)));
    EXPECT_LT((predict_pose({t, t}).matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DeskewSweep, NoMotionKeepsCoordinates) {
  const Sweep s = sweep_of({{Point3(1, 2, 3), 0.3}, {Point3(-4, 0, 1), 0.9}});
  const auto out = deskew_sweep(s, RigidTransform::identity(), RigidTransform::identity());
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], Point3(1, 2, 3));
  EXPECT_EQ(out[1], Point3(-4, 0, 1));
}

TEST(DeskewSweep, MidpointTranslation) {
  const Sweep s = sweep_of({{Point3(0, 0, 0), 0.5}});
  const auto out = deskew_sweep(s, RigidTransform::identity(),
                                RigidTransform::from_translation(Vector3(1, 0, 0)));
  EXPECT_LT((out[0] - Point3(0.5, 0, 0)).norm(), 1e-15);
}

TEST(DeskewSweep, QuarterOfRotation) {
  const Sweep s = sweep_of({{Point3(10, 0, 0), 0.25}});
  const auto out = deskew_sweep(s, RigidTransform::identity(), rz(3.6));
  EXPECT_LT((out[0] - rz(0.9) * Point3(10, 0, 0)).norm(), 1e-12);
}

TEST(DeskewSweep, PreDeskewedUsesEndPoseOnly) {
  const Sweep s = sweep_of({{Point3(1, 0, 0), 0.0}, {Point3(0, 1, 0), 0.7}}, true);
  const RigidTransform end = rz(90.0, Vector3(5, 0, 0));
  const auto out = deskew_sweep(s, RigidTransform::identity(), end);
  EXPECT_LT((out[0] - end * Point3(1, 0, 0)).norm(), 1e-12);
  EXPECT_LT((out[1] - end * Point3(0, 1, 0)).norm(), 1e-12);
}

TEST(DeskewSweep, EquivariantUnderGauge) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 5.0);
  Sweep s;
  for (int i = 0; i < 200; ++i) s.points.push_back({Point3(n(rng), n(rng), n(rng)), u(rng), {}});
  const RigidTransform a = rz(3.0, Vector3(1, 2, 0));
  const RigidTransform b = rz(7.0, Vector3(2, 3, 0.1));
  const RigidTransform g =
      RigidTransform::from_axis_angle(Vector3(1, 1, 0).normalized(), 0.4, Vector3(10, -3, 2));
  const auto plain = deskew_sweep(s, a, b);
  const auto moved = deskew_sweep(s, g * a, g * b);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    EXPECT_LT((moved[i] - g * plain[i]).norm(), 1e-9);
  }
}

TEST(DeskewSweep, TruePosesUndoSimulatedSkew) {
  // Sensor moving 1 m during the sweep inside a closed 40 x 30 x 10 m box.
  sim::SyntheticScene scene;
  const sim::Box room{Point3(5, 2, 3), Vector3(20, 15, 5), 0.0, Vector3::Zero()};
  scene.objects.push_back({room, false});
  scene.trajectory =
      sim::SensorTrajectory(Point3(0, 0, 1.5), 0.2, {{100.0, 0.0, 0.0}}, 10.0, 0.0, false);
  scene.lidar.azimuth_steps = 180;
  const auto swept = sim::simulate_sweep(scene, 1.0, 1.1, 0);
  ASSERT_NEAR((swept.end.translation() - swept.start.translation()).norm(), 1.0, 1e-9);
  ASSERT_GT(swept.sweep.points.size(), 1000u);

  const auto world = deskew_sweep(swept.sweep, swept.start, swept.end);
  double worst = 0.0;
  for (const auto& p : world) {
    const Vector3 d = (p - room.center).cwiseAbs() - room.half_extents;
    worst = std::max(worst, std::abs(d.maxCoeff()));
  }
  EXPECT_LT(worst, 1e-6);

  // Ignoring the motion leaves centimeter-to-decimeter errors.
  const auto skewed = deskew_sweep(swept.sweep, swept.end, swept.end);
  double skew_worst = 0.0;
  for (const auto& p : skewed) {
    const Vector3 d = (p - room.center).cwiseAbs() - room.half_extents;
    skew_worst = std::max(skew_worst, std::abs(d.maxCoeff()));
  }
  EXPECT_GT(skew_worst, 0.1);
}

}  // namespace
}  // namespace imls
