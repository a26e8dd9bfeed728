#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <span>

namespace imls {

using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Rigid motion in SE(3). The rotation is kept orthonormal (det +1) to 1e-9.
class RigidTransform {
 public:
  RigidTransform();

  /// Throws std::invalid_argument when `rotation` is not a rotation matrix
  /// (orthonormality error above 1e-6 or negative determinant). Small drift is
  /// projected back onto SO(3).
  RigidTransform(const Matrix3& rotation, const Vector3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vector3& translation);
  static RigidTransform from_quaternion(const Eigen::Quaterniond& q,
                                        const Vector3& translation = Vector3::Zero());
  /// Rotation of `angle_rad` about `axis` followed by `translation`.
  static RigidTransform from_axis_angle(const Vector3& axis, double angle_rad,
                                        const Vector3& translation = Vector3::Zero());

  const Matrix3& rotation() const { return rotation_; }
  const Vector3& translation() const { return translation_; }
  Eigen::Quaterniond quaternion() const;
  Eigen::Matrix4d matrix() const;

  RigidTransform inverse() const;
  Point3 apply(const Point3& p) const { return rotation_ * p + translation_; }
  Point3 operator*(const Point3& p) const { return apply(p); }

  /// max |R^T R - I| entry.
  double orthonormality_error() const;

 private:
  struct Unchecked {};
  RigidTransform(Unchecked, const Matrix3& rotation, const Vector3& translation);

  friend RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
  friend RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b,
                                    double u);

  Matrix3 rotation_;
  Vector3 translation_;
};

/// a * b: applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}
inline RigidTransform inverse(const RigidTransform& t) { return t.inverse(); }

/// Linear interpolation of the translation and shortest-arc slerp of the
/// rotation. `u` must lie in [0, 1]; the endpoints are returned exactly.
RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b, double u);

/// Rotation angle (radians, in [0, pi]) of a rotation matrix.
double rotation_angle(const Matrix3& rotation);
/// Angle of a^-1 b.
double rotation_angle_between(const RigidTransform& a, const RigidTransform& b);

Matrix3 skew(const Vector3& v);

/// Six small-motion unknowns: axis-angle rotation and translation.
struct SmallMotion {
  Vector3 rotvec = Vector3::Zero();
  Vector3 trans = Vector3::Zero();

  /// Exact exponential of the rotation vector, then the translation.
  RigidTransform to_transform() const;
};

struct PlaneConstraint {
  Point3 source;
  Point3 target;
  Vector3 normal;
};

/// Minimizes sum (n . ((I + [w]x) x + t - y))^2 over the small motion.
/// Throws DegenerateSystem with fewer than 6 constraints or when the ratio of
/// extreme LDLT pivots of the normal matrix exceeds 1e12.
SmallMotion solve_point_to_plane(std::span<const PlaneConstraint> constraints);

}  // namespace imls
