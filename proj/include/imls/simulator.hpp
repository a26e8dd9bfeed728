#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "imls/geometry.hpp"
#include "imls/scan_io.hpp"

namespace imls::sim {

/// Infinite plane.
struct Plane {
  Point3 point = Point3::Zero();
  Vector3 normal = Vector3::UnitZ();
};

/// Box rotated by `yaw` about +z, translating with constant `velocity` (m/s).
struct Box {
  Point3 center = Point3::Zero();  // at t = 0
  Vector3 half_extents = Vector3::Ones();
  double yaw = 0.0;
  Vector3 velocity = Vector3::Zero();

  bool dynamic() const { return !velocity.isZero(); }
};

/// Closed vertical cylinder.
struct Cylinder {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
  double z_min = 0.0;
  double z_max = 1.0;
};

using Primitive = std::variant<Plane, Box, Cylinder>;

struct SceneObject {
  Primitive shape;
  bool ground = false;  // label only
};

/// One piece of a planar path whose curvature varies linearly with arc length
/// (a clothoid; constant curvature and straight lines are special cases).
struct PathSegment {
  double length = 0.0;
  double curvature_start = 0.0;
  double curvature_end = 0.0;
};

/// Planar sensor path at constant height. The vehicle is at rest for t <= 0,
/// accelerates uniformly to `cruise_speed` during `ramp_time`, then cruises.
/// Past the end of the path it keeps going straight, or wraps when `closed`.
class SensorTrajectory {
 public:
  SensorTrajectory();  // static at the origin
  SensorTrajectory(const Point3& start, double heading, std::vector<PathSegment> segments,
                   double cruise_speed, double ramp_time, bool closed);

  static SensorTrajectory stationary(const Point3& position, double heading = 0.0);

  RigidTransform pose_at(double t) const;
  /// Pose after `distance` meters along the path.
  RigidTransform pose_at_distance(double distance) const;
  double distance_at(double t) const;
  double path_length() const { return length_; }

  const Point3& start() const { return start_; }
  double heading() const { return heading_; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  double cruise_speed() const { return speed_; }
  double ramp_time() const { return ramp_; }
  bool closed() const { return closed_; }

 private:
  void tabulate();
  double heading_at(double distance) const;

  Point3 start_;
  double heading_ = 0.0;
  std::vector<PathSegment> segments_;
  double speed_ = 0.0;
  double ramp_ = 0.0;
  bool closed_ = false;
  double length_ = 0.0;
  double step_ = 0.01;
  std::vector<Eigen::Vector3d> table_;  // x, y, heading every `step_` meters
};

struct LidarModel {
  int beams = 32;
  int azimuth_steps = 360;
  double fov_down_deg = -30.67;
  double fov_up_deg = 10.67;
  double max_range = 100.0;
};

struct SyntheticScene {
  std::vector<SceneObject> objects;
  SensorTrajectory trajectory;
  LidarModel lidar;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  double sweep_period = 0.1;
  std::size_t sweep_count = 1;
};

struct PointLabel {
  int object = -1;  // index into SyntheticScene::objects
  bool dynamic = false;
  bool ground = false;
};

struct SimulatedSweep {
  Sweep sweep;
  RigidTransform start;  // sensor pose at the first ray
  RigidTransform end;    // sensor pose at the end of the sweep
  std::vector<PointLabel> labels;
};

/// Distance along `direction` (unit) from `origin` to the first surface hit at
/// time `t`, with the hit object; negative distance when nothing is hit.
std::pair<double, int> cast_ray(const SyntheticScene& scene, const Point3& origin,
                                const Vector3& direction, double t);

/// Ray j of every beam leaves interpolate(pose(t0), pose(t1), u) with
/// azimuth 2 pi u, u = j / azimuth_steps. Returns carry time fraction u and
/// Gaussian range noise from a generator seeded by (`seed`, `sweep_index`).
/// Rays that hit nothing within range are dropped. Poses are world poses.
SimulatedSweep simulate_sweep(const SyntheticScene& scene, double t0, double t1,
                              std::size_t sweep_index);

struct SimulatedRun {
  std::vector<SimulatedSweep> sweeps;
  /// End-of-sweep sensor poses relative to the first one.
  std::vector<RigidTransform> truth;
};

/// Sweep k spans [(k - 1) T, k T] for k = 0 .. sweep_count - 1.
SimulatedRun simulate_run(const SyntheticScene& scene);

/// Plain-text scene description; see README for the grammar. Throws
/// ConfigError.
SyntheticScene parse_scene(const std::string& text);
SyntheticScene load_scene(const std::filesystem::path& path);
std::string format_scene(const SyntheticScene& scene);

/// Street loop of `perimeter` meters around a central block, driven in
/// `sweeps` sweeps starting from rest, with poles, facade detail, parked cars
/// and `dynamic_boxes` moving cars. `seed` varies the layout and noise.
SyntheticScene square_loop_scene(std::uint64_t seed, std::size_t sweeps = 80,
                                 double perimeter = 200.0, int dynamic_boxes = 4);

/// Straight street between two facades with poles, driven at `speed` m/s
/// after a one-second ramp from rest.
SyntheticScene corridor_scene(std::uint64_t seed, std::size_t sweeps, double speed);

/// Static sensor in a corner formed by the floor and two walls.
SyntheticScene room_scene(std::uint64_t seed, double noise_sigma);

}  // namespace imls::sim
