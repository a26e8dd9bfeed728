#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "imls/errors.hpp"
#include "imls/geometry.hpp"

namespace imls {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

RigidTransform rz(double deg, const Vector3& t = Vector3::Zero()) {
  return RigidTransform::from_axis_angle(Vector3::UnitZ(), deg * kDeg, t);
}

RigidTransform random_transform(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const Vector3 axis = Vector3(n(rng), n(rng), n(rng)).normalized();
  return RigidTransform::from_axis_angle(axis, angle(rng),
                                         Vector3(n(rng), n(rng), n(rng)) * 10.0);
}

void expect_near(const RigidTransform& a, const RigidTransform& b, double tol) {
  EXPECT_LT((a.rotation() - b.rotation()).cwiseAbs().maxCoeff(), tol);
  EXPECT_LT((a.translation() - b.translation()).cwiseAbs().maxCoeff(), tol);
}

TEST(RigidTransform, RejectsNonRotations) {
  EXPECT_THROW(RigidTransform(Matrix3::Identity() * 2.0, Vector3::Zero()),
               std::invalid_argument);
  Matrix3 reflection = Matrix3::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_THROW(RigidTransform(reflection, Vector3::Zero()), std::invalid_argument);
}

TEST(RigidTransform, ProjectsSmallDriftBackOntoSO3) {
  Matrix3 r = rz(30.0).rotation();
  r(0, 1) += 1e-8;
  const RigidTransform t(r, Vector3::Zero());
  EXPECT_LT(t.orthonormality_error(), 1e-12);
  EXPECT_NEAR(t.rotation().determinant(), 1.0, 1e-12);
}

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const RigidTransform t = random_transform(rng);
  expect_near(compose(RigidTransform::identity(), t), t, 1e-15);
  expect_near(compose(t, RigidTransform::identity()), t, 1e-15);
}

TEST(Compose, InverseGivesIdentity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const RigidTransform t = random_transform(rng);
    expect_near(compose(t, inverse(t)), RigidTransform::identity(), 1e-9);
    expect_near(compose(inverse(t), t), RigidTransform::identity(), 1e-9);
  }
}

TEST(Compose, HandMultipliedExample) {
  // Rz(90)+t(1,0,0) after Rz(90): rotations add, translation untouched.
  const RigidTransform got = compose(rz(90.0, Vector3(1, 0, 0)), rz(90.0));
  Matrix3 expected_r;
  expected_r << -1, 0, 0, 0, -1, 0, 0, 0, 1;
  EXPECT_LT((got.rotation() - expected_r).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((got.translation() - Vector3(1, 0, 0)).norm(), 1e-12);
}

TEST(Compose, AppliesRightOperandFirst) {
  const RigidTransform a = rz(90.0);
  const RigidTransform b = RigidTransform::from_translation(Vector3(1, 0, 0));
  // a(b(x)) for x = 0 is a * (1,0,0) = (0,1,0).
  EXPECT_LT(((a * b) * Point3::Zero() - Point3(0, 1, 0)).norm(), 1e-12);
}

TEST(Compose, MatchesHomogeneousMatrixProduct) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const RigidTransform a = random_transform(rng);
    const RigidTransform b = random_transform(rng);
    const Eigen::Matrix4d expected = a.matrix() * b.matrix();
    EXPECT_LT(((a * b).matrix() - expected).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Compose, IsAssociative) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const RigidTransform a = random_transform(rng);
    const RigidTransform b = random_transform(rng);
    const RigidTransform c = random_transform(rng);
    expect_near((a * b) * c, a * (b * c), 1e-9);
  }
}

TEST(Compose, LongChainsStayOrthonormal) {
  RigidTransform acc;
  for (int i = 0; i < 10000; ++i) {
    acc = acc * RigidTransform::from_axis_angle(Vector3(1, 2, 3).normalized(), 0.37);
  }
  EXPECT_LT(acc.orthonormality_error(), 1e-9);
}

TEST(Interpolate, EqualEndpoints) {
  std::mt19937_64 rng(6);
  const RigidTransform a = random_transform(rng);
  expect_near(interpolate(a, a, 0.5), a, 1e-12);
}

TEST(Interpolate, PureTranslation) {
  const RigidTransform b = RigidTransform::from_translation(Vector3(2, 0, 0));
  const RigidTransform got = interpolate(RigidTransform::identity(), b, 0.25);
  EXPECT_LT((got.translation() - Vector3(0.5, 0, 0)).norm(), 1e-15);
  EXPECT_LT(rotation_angle(got.rotation()), 1e-15);
}

TEST(Interpolate, HalfOfQuarterTurnAgainstQuaternionSlerp) {
  const RigidTransform got = interpolate(RigidTransform::identity(), rz(90.0), 0.5);
  expect_near(got, rz(45.0), 1e-12);
  // Independent oracle: Eigen's quaternion slerp.
  const Eigen::Quaterniond q0 = Eigen::Quaterniond::Identity();
  const Eigen::Quaterniond q1(rz(90.0).rotation());
  EXPECT_LT((got.rotation() - q0.slerp(0.5, q1).toRotationMatrix()).norm(), 1e-12);
}

TEST(Interpolate, EndpointsAreExact) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const RigidTransform a = random_transform(rng);
    const RigidTransform b = random_transform(rng);
    const RigidTransform at0 = interpolate(a, b, 0.0);
    const RigidTransform at1 = interpolate(a, b, 1.0);
    EXPECT_EQ(at0.rotation(), a.rotation());
    EXPECT_EQ(at0.translation(), a.translation());
    EXPECT_EQ(at1.rotation(), b.rotation());
    EXPECT_EQ(at1.translation(), b.translation());
  }
}

TEST(Interpolate, RejectsFractionOutsideUnitInterval) {
  EXPECT_THROW(interpolate(RigidTransform::identity(), rz(10.0), -0.1), std::invalid_argument);
  EXPECT_THROW(interpolate(RigidTransform::identity(), rz(10.0), 1.1), std::invalid_argument);
}

TEST(Interpolate, AngleGrowsLinearlyAlongGeodesic) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const RigidTransform a = random_transform(rng);
    const RigidTransform b = random_transform(rng);
    const double total = rotation_angle_between(a, b);
    const double u = frac(rng);
    EXPECT_NEAR(rotation_angle_between(a, interpolate(a, b, u)), u * total, 1e-9);
  }
}

TEST(Interpolate, TakesShortestArc) {
  // 350 degrees the long way is 10 degrees the short way.
  const RigidTransform got = interpolate(rz(0.0), rz(-10.0), 0.5);
  expect_near(got, rz(-5.0), 1e-12);
}

TEST(SmallMotion, ZeroIsIdentity) {
  expect_near(SmallMotion{}.to_transform(), RigidTransform::identity(), 1e-15);
}

TEST(SmallMotion, LinearizationHoldsForTinyAngles) {
  const Vector3 w(4e-4, -6e-4, 5e-4);
  const RigidTransform t = SmallMotion{w, Vector3::Zero()}.to_transform();
  const Matrix3 linear = Matrix3::Identity() + skew(w);
  EXPECT_LT((t.rotation() - linear).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SmallMotion, ExponentialMatchesAngleAxis) {
  const Vector3 w(0.3, -0.2, 0.9);
  const RigidTransform t = SmallMotion{w, Vector3(1, 2, 3)}.to_transform();
  const Matrix3 expected = Eigen::AngleAxisd(w.norm(), w.normalized()).toRotationMatrix();
  EXPECT_LT((t.rotation() - expected).norm(), 1e-12);
  EXPECT_EQ(t.translation(), Vector3(1, 2, 3));
}

TEST(Skew, ReproducesCrossProduct) {
  const Vector3 a(1, -2, 3), b(0.5, 4, -1);
  EXPECT_LT((skew(a) * b - a.cross(b)).norm(), 1e-15);
}

// Points on three orthogonal planes with their normals.
std::vector<PlaneConstraint> box_constraints(const RigidTransform& motion) {
  std::vector<PlaneConstraint> out;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Vector3 normals[3] = {Vector3::UnitX(), Vector3::UnitY(), Vector3::UnitZ()};
  for (int axis = 0; axis < 3; ++axis) {
    for (int i = 0; i < 30; ++i) {
      Point3 y(u(rng), u(rng), u(rng));
      y[axis] = 3.0 * (axis + 1);
      // The source is the target moved by the inverse motion.
      out.push_back({motion.inverse() * y, y, normals[axis]});
    }
  }
  return out;
}

TEST(PointToPlane, SatisfiedConstraintsGiveZeroMotion) {
  const SmallMotion m = solve_point_to_plane(box_constraints(RigidTransform::identity()));
  EXPECT_LT(m.rotvec.norm(), 1e-12);
  EXPECT_LT(m.trans.norm(), 1e-12);
}

TEST(PointToPlane, RecoversPureTranslation) {
  const RigidTransform shift = RigidTransform::from_translation(Vector3(0.1, 0, 0));
  const SmallMotion m = solve_point_to_plane(box_constraints(shift));
  EXPECT_LT((m.trans - Vector3(0.1, 0, 0)).norm(), 1e-6);
  EXPECT_LT(m.rotvec.norm(), 1e-6);
}

TEST(PointToPlane, IteratedSolveRecoversInjectedMotion) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector3 axis = Vector3(u(rng), u(rng), u(rng)).normalized();
    const Vector3 t = Vector3(u(rng), u(rng), u(rng)).normalized() * 0.2 * std::abs(u(rng));
    const RigidTransform truth =
        RigidTransform::from_axis_angle(axis, 2.0 * kDeg * std::abs(u(rng)), t);
    auto constraints = box_constraints(truth);
    RigidTransform estimate;
    for (int it = 0; it < 10; ++it) {
      std::vector<PlaneConstraint> moved = constraints;
      for (auto& c : moved) c.source = estimate * c.source;
      estimate = solve_point_to_plane(moved).to_transform() * estimate;
    }
    EXPECT_LT((estimate.translation() - truth.translation()).norm(), 1e-6);
    EXPECT_LT(rotation_angle_between(estimate, truth), 1e-6);
  }
}

TEST(PointToPlane, NormalEquationsAreSolved) {
  // Noisy constraints: the gradient of the linearized objective vanishes.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  auto constraints = box_constraints(rz(1.0, Vector3(0.05, -0.02, 0.01)));
  for (auto& c : constraints) c.target += Vector3(noise(rng), noise(rng), noise(rng));
  const SmallMotion m = solve_point_to_plane(constraints);
  Eigen::Matrix<double, 6, 1> grad = Eigen::Matrix<double, 6, 1>::Zero();
  double scale = 0.0;
  for (const auto& c : constraints) {
    Eigen::Matrix<double, 6, 1> row;
    row << c.source.cross(c.normal), c.normal;
    const double residual = c.normal.dot(c.source + m.rotvec.cross(c.source) + m.trans - c.target);
    grad += row * residual;
    scale += row.norm() * std::abs(c.normal.dot(c.target - c.source));
  }
  EXPECT_LT(grad.norm(), 1e-9 * scale);
}

TEST(PointToPlane, SinglePlaneIsDegenerate) {
  std::vector<PlaneConstraint> constraints;
  for (int i = 0; i < 20; ++i) {
    const Point3 p(i * 0.3, (i % 5) * 0.7, 0.0);
    constraints.push_back({p, p, Vector3::UnitZ()});
  }
  EXPECT_THROW(solve_point_to_plane(constraints), DegenerateSystem);
}

TEST(PointToPlane, TooFewConstraintsAreDegenerate) {
  auto constraints = box_constraints(RigidTransform::identity());
  constraints.resize(5);
  EXPECT_THROW(solve_point_to_plane(constraints), DegenerateSystem);
}

TEST(RotationAngle, KnownValues) {
  EXPECT_NEAR(rotation_angle(rz(37.0).rotation()), 37.0 * kDeg, 1e-12);
  EXPECT_NEAR(rotation_angle(rz(180.0).rotation()), std::numbers::pi, 1e-7);
  EXPECT_NEAR(rotation_angle_between(rz(10.0), rz(-25.0)), 35.0 * kDeg, 1e-12);
}

}  // namespace
}  // namespace imls
