#include "imls/geometry.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imls/errors.hpp"

namespace imls {
namespace {

constexpr double kAcceptTolerance = 1e-6;
constexpr double kDriftTolerance = 1e-9;
constexpr double kMaxConditionNumber = 1e12;

double orthonormality_error(const Matrix3& r) {
  return (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff();
}

Matrix3 reorthonormalize(const Matrix3& r) {
  return Eigen::Quaterniond(r).normalized().toRotationMatrix();
}

}  // namespace

RigidTransform::RigidTransform()
    : rotation_(Matrix3::Identity()), translation_(Vector3::Zero()) {}

RigidTransform::RigidTransform(const Matrix3& rotation, const Vector3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw std::invalid_argument("RigidTransform: non-finite entries");
  }
  const double err = imls::orthonormality_error(rotation);
  if (err > kAcceptTolerance || rotation.determinant() <= 0.0) {
    throw std::invalid_argument("RigidTransform: rotation is not in SO(3)");
  }
  if (err > kDriftTolerance) rotation_ = reorthonormalize(rotation);
}

RigidTransform::RigidTransform(Unchecked, const Matrix3& rotation,
                               const Vector3& translation)
    : rotation_(rotation), translation_(translation) {}

RigidTransform RigidTransform::from_translation(const Vector3& translation) {
  return {Matrix3::Identity(), translation};
}

RigidTransform RigidTransform::from_quaternion(const Eigen::Quaterniond& q,
                                               const Vector3& translation) {
  return {q.normalized().toRotationMatrix(), translation};
}

RigidTransform RigidTransform::from_axis_angle(const Vector3& axis, double angle_rad,
                                               const Vector3& translation) {
  return {Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix(),
          translation};
}

Eigen::Quaterniond RigidTransform::quaternion() const {
  return Eigen::Quaterniond(rotation_).normalized();
}

Eigen::Matrix4d RigidTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform RigidTransform::inverse() const {
  const Matrix3 rt = rotation_.transpose();
  return {Unchecked{}, rt, -(rt * translation_)};
}

double RigidTransform::orthonormality_error() const {
  return imls::orthonormality_error(rotation_);
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  Matrix3 r = a.rotation_ * b.rotation_;
  if (imls::orthonormality_error(r) > kDriftTolerance) r = reorthonormalize(r);
  return {RigidTransform::Unchecked{}, r, a.rotation_ * b.translation_ + a.translation_};
}

RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("interpolate: fraction outside [0, 1]");
  }
  if (u == 0.0) return a;
  if (u == 1.0) return b;
  // Eigen's slerp flips the sign of the second quaternion when needed, which
  // yields the shortest arc.
  const Eigen::Quaterniond q = a.quaternion().slerp(u, b.quaternion());
  return {RigidTransform::Unchecked{}, q.normalized().toRotationMatrix(),
          (1.0 - u) * a.translation_ + u * b.translation_};
}

double rotation_angle(const Matrix3& rotation) {
  // atan2 form stays accurate near 0 and pi, unlike acos of the trace.
  const Eigen::Quaterniond q(rotation);
  const double s = q.vec().norm();
  return 2.0 * std::atan2(s, std::abs(q.w()));
}

double rotation_angle_between(const RigidTransform& a, const RigidTransform& b) {
  return rotation_angle(a.rotation().transpose() * b.rotation());
}

Matrix3 skew(const Vector3& v) {
  Matrix3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

RigidTransform SmallMotion::to_transform() const {
  const double angle = rotvec.norm();
  if (angle == 0.0) return RigidTransform::from_translation(trans);
  return RigidTransform::from_axis_angle(rotvec / angle, angle, trans);
}

SmallMotion solve_point_to_plane(std::span<const PlaneConstraint> constraints) {
  if (constraints.size() < 6) {
    throw DegenerateSystem("point-to-plane solve needs at least 6 constraints");
  }
  using Matrix6 = Eigen::Matrix<double, 6, 6>;
  using Vector6 = Eigen::Matrix<double, 6, 1>;
  // n . (w x p) == w . (p x n), so each row is [p x n, n] and the right-hand
  // side is n . (y - p).
  Matrix6 ata = Matrix6::Zero();
  Vector6 atb = Vector6::Zero();
  for (const auto& c : constraints) {
    Vector6 row;
    row.head<3>() = c.source.cross(c.normal);
    row.tail<3>() = c.normal;
    ata.selfadjointView<Eigen::Lower>().rankUpdate(row);
    atb += row * c.normal.dot(c.target - c.source);
  }
  ata = ata.selfadjointView<Eigen::Lower>();

  const Eigen::LDLT<Matrix6> ldlt(ata);
  const Vector6 pivots = ldlt.vectorD().cwiseAbs();
  const double largest = pivots.maxCoeff();
  const double smallest = pivots.minCoeff();
  if (ldlt.info() != Eigen::Success || !(largest > 0.0) ||
      smallest * kMaxConditionNumber < largest) {
    throw DegenerateSystem("point-to-plane normal matrix is rank deficient");
  }
  const Vector6 x = ldlt.solve(atb);
  return {x.head<3>(), x.tail<3>()};
}

}  // namespace imls
