#include "imls/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "imls/errors.hpp"

namespace imls::sim {
namespace {

constexpr double kEps = 1e-9;
constexpr double kMiss = -1.0;
constexpr double kDeg = std::numbers::pi / 180.0;

Matrix3 yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Vector3::UnitZ()).toRotationMatrix();
}

double intersect(const Plane& plane, const Point3& o, const Vector3& d, double) {
  const double denom = plane.normal.dot(d);
  if (std::abs(denom) < 1e-15) return kMiss;
  const double t = plane.normal.dot(plane.point - o) / denom;
  return t > kEps ? t : kMiss;
}

double intersect(const Box& box, const Point3& o, const Vector3& d, double time) {
  const Matrix3 rt = yaw_rotation(box.yaw).transpose();
  const Vector3 lo = rt * (o - (box.center + box.velocity * time));
  const Vector3 ld = rt * d;
  double near = -std::numeric_limits<double>::infinity();
  double far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double h = box.half_extents[a];
    if (std::abs(ld[a]) < 1e-15) {
      if (std::abs(lo[a]) > h) return kMiss;
      continue;
    }
    double t1 = (-h - lo[a]) / ld[a];
    double t2 = (h - lo[a]) / ld[a];
    if (t1 > t2) std::swap(t1, t2);
    near = std::max(near, t1);
    far = std::min(far, t2);
    if (near > far) return kMiss;
  }
  // From inside the box the ray hits the exit face.
  if (near > kEps) return near;
  return far > kEps ? far : kMiss;
}

double intersect(const Cylinder& cyl, const Point3& o, const Vector3& d, double) {
  double best = std::numeric_limits<double>::infinity();
  const double ox = o.x() - cyl.cx;
  const double oy = o.y() - cyl.cy;
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 1e-15) {
    const double b = 2.0 * (ox * d.x() + oy * d.y());
    const double c = ox * ox + oy * oy - cyl.radius * cyl.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t <= kEps) continue;
        const double z = o.z() + t * d.z();
        if (z >= cyl.z_min && z <= cyl.z_max) {
          best = std::min(best, t);
          break;
        }
      }
    }
  }
  if (std::abs(d.z()) > 1e-15) {
    for (double zc : {cyl.z_min, cyl.z_max}) {
      const double t = (zc - o.z()) / d.z();
      if (t <= kEps) continue;
      const double x = ox + t * d.x();
      const double y = oy + t * d.y();
      if (x * x + y * y <= cyl.radius * cyl.radius) best = std::min(best, t);
    }
  }
  return std::isfinite(best) ? best : kMiss;
}

}  // namespace

// ---------------------------------------------------------------------------
// SensorTrajectory

SensorTrajectory::SensorTrajectory() : start_(Point3::Zero()) {}

SensorTrajectory::SensorTrajectory(const Point3& start, double heading,
                                   std::vector<PathSegment> segments, double cruise_speed,
                                   double ramp_time, bool closed)
    : start_(start),
      heading_(heading),
      segments_(std::move(segments)),
      speed_(cruise_speed),
      ramp_(ramp_time),
      closed_(closed) {
  if (cruise_speed < 0.0 || ramp_time < 0.0)
    throw ConfigError("trajectory: negative speed or ramp time");
  for (const auto& seg : segments_)
    if (!(seg.length > 0.0)) throw ConfigError("trajectory: segment length must be positive");
  tabulate();
}

SensorTrajectory SensorTrajectory::stationary(const Point3& position, double heading) {
  return SensorTrajectory(position, heading, {}, 0.0, 0.0, false);
}

double SensorTrajectory::heading_at(double distance) const {
  double h = heading_;
  for (const auto& seg : segments_) {
    const double ds = std::min(distance, seg.length);
    h += seg.curvature_start * ds +
         (seg.curvature_end - seg.curvature_start) * ds * ds / (2.0 * seg.length);
    distance -= seg.length;
    if (distance <= 0.0) break;
  }
  return h;
}

void SensorTrajectory::tabulate() {
  length_ = 0.0;
  for (const auto& seg : segments_) length_ += seg.length;
  table_.clear();
  if (segments_.empty()) return;
  const auto steps = static_cast<std::size_t>(std::ceil(length_ / step_));
  step_ = length_ / static_cast<double>(steps);
  table_.reserve(steps + 1);
  double x = start_.x();
  double y = start_.y();
  table_.emplace_back(x, y, heading_);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s0 = static_cast<double>(i) * step_;
    // Simpson's rule on the unit tangent.
    const double h0 = heading_at(s0);
    const double hm = heading_at(s0 + 0.5 * step_);
    const double h1 = heading_at(s0 + step_);
    x += step_ / 6.0 * (std::cos(h0) + 4.0 * std::cos(hm) + std::cos(h1));
    y += step_ / 6.0 * (std::sin(h0) + 4.0 * std::sin(hm) + std::sin(h1));
    table_.emplace_back(x, y, h1);
  }
}

double SensorTrajectory::distance_at(double t) const {
  if (t <= 0.0 || speed_ == 0.0) return 0.0;
  if (t < ramp_) return 0.5 * speed_ / ramp_ * t * t;
  return 0.5 * speed_ * ramp_ + speed_ * (t - ramp_);
}

RigidTransform SensorTrajectory::pose_at(double t) const {
  return pose_at_distance(distance_at(t));
}

RigidTransform SensorTrajectory::pose_at_distance(double d) const {
  if (table_.empty()) {
    return RigidTransform(yaw_rotation(heading_), start_);
  }
  double extra_heading = 0.0;
  double beyond = 0.0;
  if (closed_ && d >= length_) {
    const double laps = std::floor(d / length_);
    extra_heading = laps * (table_.back().z() - table_.front().z());
    d -= laps * length_;
  } else if (d > length_) {
    beyond = d - length_;
    d = length_;
  }
  d = std::max(d, 0.0);
  const double pos = d / step_;
  const auto i = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
  const double f = pos - static_cast<double>(i);
  const Eigen::Vector3d e = (1.0 - f) * table_[i] + f * table_[i + 1];
  const double heading = e.z() + extra_heading;
  Point3 p(e.x(), e.y(), start_.z());
  p += beyond * Vector3(std::cos(heading), std::sin(heading), 0.0);
  return RigidTransform(yaw_rotation(heading), p);
}

// ---------------------------------------------------------------------------
// Ray casting

std::pair<double, int> cast_ray(const SyntheticScene& scene, const Point3& origin,
                                const Vector3& direction, double t) {
  double best = std::numeric_limits<double>::infinity();
  int hit = -1;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const double d = std::visit(
        [&](const auto& shape) { return intersect(shape, origin, direction, t); },
        scene.objects[i].shape);
    if (d > 0.0 && d < best) {
      best = d;
      hit = static_cast<int>(i);
    }
  }
  if (hit < 0) return {kMiss, -1};
  return {best, hit};
}

SimulatedSweep simulate_sweep(const SyntheticScene& scene, double t0, double t1,
                              std::size_t sweep_index) {
  const LidarModel& lidar = scene.lidar;
  if (lidar.beams < 1 || lidar.azimuth_steps < 1)
    throw ConfigError("lidar: beams and azimuth_steps must be positive");
  SimulatedSweep out;
  out.sweep.index = sweep_index;
  out.sweep.pre_deskewed = false;
  out.start = scene.trajectory.pose_at(t0);
  out.end = scene.trajectory.pose_at(t1);

  std::vector<double> elevations(static_cast<std::size_t>(lidar.beams));
  for (int b = 0; b < lidar.beams; ++b) {
    const double f = lidar.beams == 1 ? 0.0 : static_cast<double>(b) / (lidar.beams - 1);
    elevations[static_cast<std::size_t>(b)] =
        (lidar.fov_down_deg + f * (lidar.fov_up_deg - lidar.fov_down_deg)) * kDeg;
  }

  std::seed_seq seq{static_cast<std::uint64_t>(scene.seed),
                    static_cast<std::uint64_t>(sweep_index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> noise(0.0, 1.0);

  const auto steps = static_cast<std::size_t>(lidar.azimuth_steps);
  out.sweep.points.reserve(steps * elevations.size());
  out.labels.reserve(steps * elevations.size());
  for (std::size_t j = 0; j < steps; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(steps);
    const double time = t0 + u * (t1 - t0);
    const RigidTransform pose = interpolate(out.start, out.end, u);
    const double az = 2.0 * std::numbers::pi * u;
    for (double el : elevations) {
      const Vector3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                        std::sin(el));
      const auto [range, object] =
          cast_ray(scene, pose.translation(), pose.rotation() * dir, time);
      // Draw even on a miss so the noise sequence does not depend on hits.
      const double n = scene.noise_sigma > 0.0 ? scene.noise_sigma * noise(rng) : 0.0;
      if (object < 0 || range > lidar.max_range) continue;
      TimedPoint tp;
      tp.position = (range + n) * dir;
      tp.time_fraction = u;
      out.sweep.points.push_back(tp);
      const SceneObject& obj = scene.objects[static_cast<std::size_t>(object)];
      PointLabel label;
      label.object = object;
      label.ground = obj.ground;
      if (const auto* box = std::get_if<Box>(&obj.shape)) label.dynamic = box->dynamic();
      out.labels.push_back(label);
    }
  }
  return out;
}

SimulatedRun simulate_run(const SyntheticScene& scene) {
  SimulatedRun run;
  const RigidTransform origin_inv = scene.trajectory.pose_at(0.0).inverse();
  for (std::size_t k = 0; k < scene.sweep_count; ++k) {
    const double t1 = static_cast<double>(k) * scene.sweep_period;
    const double t0 = t1 - scene.sweep_period;
    run.sweeps.push_back(simulate_sweep(scene, t0, t1, k));
    run.truth.push_back(origin_inv * run.sweeps.back().end);
  }
  return run;
}

// ---------------------------------------------------------------------------
// Scene files

namespace {

[[noreturn]] void scene_error(std::size_t line, const std::string& what) {
  throw ConfigError("scene line " + std::to_string(line) + ": " + what);
}

std::vector<double> read_numbers(std::istringstream& in, std::size_t line,
                                 std::size_t min_count, std::size_t max_count,
                                 std::string* flag = nullptr) {
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      if (flag != nullptr && flag->empty() && !(in >> std::ws).good()) {
        *flag = token;
        break;
      }
      scene_error(line, "bad number '" + token + "'");
    }
  }
  if (values.size() < min_count || values.size() > max_count)
    scene_error(line, "wrong number of values");
  return values;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

SyntheticScene parse_scene(const std::string& text) {
  SyntheticScene scene;
  Point3 start = Point3::Zero();
  double heading = 0.0;
  double speed = 0.0;
  double ramp = 0.0;
  bool closed = false;
  std::vector<PathSegment> segments;

  std::istringstream lines(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(lines, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream in(raw);
    std::string key;
    if (!(in >> key)) continue;
    if (key == "lidar") {
      const auto v = read_numbers(in, number, 5, 5);
      if (v[0] < 1 || v[1] < 1 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
        scene_error(number, "beams and azimuth steps must be positive integers");
      if (!(v[4] > 0.0) || v[2] > v[3]) scene_error(number, "bad field of view or range");
      scene.lidar = {static_cast<int>(v[0]), static_cast<int>(v[1]), v[2], v[3], v[4]};
    } else if (key == "noise") {
      const auto v = read_numbers(in, number, 1, 1);
      if (v[0] < 0.0) scene_error(number, "noise must be non-negative");
      scene.noise_sigma = v[0];
    } else if (key == "seed") {
      const auto v = read_numbers(in, number, 1, 1);
      if (v[0] < 0.0 || v[0] != std::floor(v[0])) scene_error(number, "bad seed");
      scene.seed = static_cast<std::uint64_t>(v[0]);
    } else if (key == "sweeps") {
      const auto v = read_numbers(in, number, 1, 1);
      if (v[0] < 1.0 || v[0] != std::floor(v[0])) scene_error(number, "bad sweep count");
      scene.sweep_count = static_cast<std::size_t>(v[0]);
    } else if (key == "period") {
      const auto v = read_numbers(in, number, 1, 1);
      if (!(v[0] > 0.0)) scene_error(number, "period must be positive");
      scene.sweep_period = v[0];
    } else if (key == "start") {
      const auto v = read_numbers(in, number, 4, 4);
      start = Point3(v[0], v[1], v[2]);
      heading = v[3] * kDeg;
    } else if (key == "motion") {
      const auto v = read_numbers(in, number, 3, 3);
      if (v[0] < 0.0 || v[1] < 0.0) scene_error(number, "negative speed or ramp");
      speed = v[0];
      ramp = v[1];
      closed = v[2] != 0.0;
    } else if (key == "segment") {
      const auto v = read_numbers(in, number, 3, 3);
      if (!(v[0] > 0.0)) scene_error(number, "segment length must be positive");
      segments.push_back({v[0], v[1], v[2]});
    } else if (key == "plane") {
      std::string flag;
      const auto v = read_numbers(in, number, 6, 6, &flag);
      if (!flag.empty() && flag != "ground") scene_error(number, "unknown flag " + flag);
      const Vector3 n(v[3], v[4], v[5]);
      if (n.norm() < 1e-12) scene_error(number, "zero plane normal");
      scene.objects.push_back({Plane{Point3(v[0], v[1], v[2]), n.normalized()}, !flag.empty()});
    } else if (key == "box") {
      const auto v = read_numbers(in, number, 7, 10);
      if (v.size() != 7 && v.size() != 10) scene_error(number, "wrong number of values");
      Box box;
      box.center = Point3(v[0], v[1], v[2]);
      box.half_extents = Vector3(v[3], v[4], v[5]);
      if ((box.half_extents.array() <= 0.0).any())
        scene_error(number, "box half extents must be positive");
      box.yaw = v[6] * kDeg;
      if (v.size() == 10) box.velocity = Vector3(v[7], v[8], v[9]);
      scene.objects.push_back({box, false});
    } else if (key == "cylinder") {
      const auto v = read_numbers(in, number, 5, 5);
      if (!(v[2] > 0.0) || !(v[4] > v[3])) scene_error(number, "bad cylinder");
      scene.objects.push_back({Cylinder{v[0], v[1], v[2], v[3], v[4]}, false});
    } else {
      scene_error(number, "unknown keyword '" + key + "'");
    }
  }
  scene.trajectory = SensorTrajectory(start, heading, std::move(segments), speed, ramp, closed);
  return scene;
}

SyntheticScene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scene(text.str());
}

std::string format_scene(const SyntheticScene& scene) {
  std::ostringstream out;
  const LidarModel& l = scene.lidar;
  out << "lidar " << l.beams << ' ' << l.azimuth_steps << ' ' << fmt(l.fov_down_deg) << ' '
      << fmt(l.fov_up_deg) << ' ' << fmt(l.max_range) << '\n';
  out << "noise " << fmt(scene.noise_sigma) << '\n';
  out << "seed " << scene.seed << '\n';
  out << "sweeps " << scene.sweep_count << '\n';
  out << "period " << fmt(scene.sweep_period) << '\n';
  const SensorTrajectory& tr = scene.trajectory;
  out << "start " << fmt(tr.start().x()) << ' ' << fmt(tr.start().y()) << ' '
      << fmt(tr.start().z()) << ' ' << fmt(tr.heading() / kDeg) << '\n';
  out << "motion " << fmt(tr.cruise_speed()) << ' ' << fmt(tr.ramp_time()) << ' '
      << (tr.closed() ? 1 : 0) << '\n';
  for (const auto& seg : tr.segments())
    out << "segment " << fmt(seg.length) << ' ' << fmt(seg.curvature_start) << ' '
        << fmt(seg.curvature_end) << '\n';
  for (const auto& obj : scene.objects) {
    if (const auto* p = std::get_if<Plane>(&obj.shape)) {
      out << "plane " << fmt(p->point.x()) << ' ' << fmt(p->point.y()) << ' '
          << fmt(p->point.z()) << ' ' << fmt(p->normal.x()) << ' ' << fmt(p->normal.y())
          << ' ' << fmt(p->normal.z()) << (obj.ground ? " ground" : "") << '\n';
    } else if (const auto* b = std::get_if<Box>(&obj.shape)) {
      out << "box " << fmt(b->center.x()) << ' ' << fmt(b->center.y()) << ' '
          << fmt(b->center.z()) << ' ' << fmt(b->half_extents.x()) << ' '
          << fmt(b->half_extents.y()) << ' ' << fmt(b->half_extents.z()) << ' '
          << fmt(b->yaw / kDeg) << ' ' << fmt(b->velocity.x()) << ' ' << fmt(b->velocity.y())
          << ' ' << fmt(b->velocity.z()) << '\n';
    } else if (const auto* c = std::get_if<Cylinder>(&obj.shape)) {
      out << "cylinder " << fmt(c->cx) << ' ' << fmt(c->cy) << ' ' << fmt(c->radius) << ' '
          << fmt(c->z_min) << ' ' << fmt(c->z_max) << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Presets

namespace {

constexpr double kSensorHeight = 1.73;
// 0.8 degree horizontal steps, close to the 1.33 degree beam spacing, so that
// 20-point neighborhoods span several rings instead of one ring segment.
constexpr int kStreetAzimuthSteps = 450;

void add_ground(SyntheticScene& scene) {
  scene.objects.push_back({Plane{Point3::Zero(), Vector3::UnitZ()}, true});
}

void add_box(SyntheticScene& scene, const Point3& center, const Vector3& half, double yaw,
             const Vector3& velocity = Vector3::Zero()) {
  Box box;
  box.center = center;
  box.half_extents = half;
  box.yaw = yaw;
  box.velocity = velocity;
  scene.objects.push_back({box, false});
}

void add_pole(SyntheticScene& scene, double x, double y, double radius, double height) {
  scene.objects.push_back({Cylinder{x, y, radius, 0.0, height}, false});
}

// Facade of a square block centered at `c` with half size `half`; the face
// normal points outward when `outward`, inward otherwise. Pilasters stick out
// of the face on the open side.
void add_square_facade(SyntheticScene& scene, std::mt19937_64& rng, const Point3& c,
                       double half, double height, bool outward) {
  std::uniform_real_distribution<double> gap(3.0, 7.0);
  std::uniform_real_distribution<double> depth(0.15, 0.35);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  const double thickness = 1.0;
  for (int side = 0; side < 4; ++side) {
    const double yaw = side * std::numbers::pi / 2.0;
    const Matrix3 rot = yaw_rotation(yaw);
    // Side frame: the face lies at local x = half, spanning local y.
    const double wall_x = outward ? half - thickness / 2.0 : half + thickness / 2.0;
    const double span = outward ? half : half + thickness;
    add_box(scene, c + rot * Vector3(wall_x, 0.0, height / 2.0),
            Vector3(thickness / 2.0, span, height / 2.0), yaw);
    const double sign = outward ? 1.0 : -1.0;
    for (double y = -half + gap(rng); y < half - 1.0; y += gap(rng)) {
      const double dp = depth(rng);
      add_box(scene, c + rot * Vector3(half + sign * dp / 2.0, y, height / 2.0 - 0.5),
              Vector3(dp / 2.0, width(rng) / 2.0, height / 2.0 - 0.5), yaw);
    }
  }
}

}  // namespace

SyntheticScene square_loop_scene(std::uint64_t seed, std::size_t sweeps, double perimeter,
                                 int dynamic_boxes) {
  SyntheticScene scene;
  scene.seed = seed;
  scene.noise_sigma = 0.02;
  scene.sweep_count = sweeps;
  scene.sweep_period = 0.1;
  scene.lidar.azimuth_steps = kStreetAzimuthSteps;

  // Rounded square: each corner is a pair of clothoids turning 90 degrees in
  // total; the loop starts mid-side with zero curvature.
  const double corner = perimeter / 4.0;
  const double kmax = std::numbers::pi / corner;
  std::vector<PathSegment> segments;
  for (int i = 0; i < 4; ++i) {
    segments.push_back({corner / 2.0, 0.0, kmax});
    segments.push_back({corner / 2.0, kmax, 0.0});
  }
  // The last sweep ends exactly one lap after the start.
  const double duration = static_cast<double>(sweeps - 1) * scene.sweep_period;
  const double ramp = std::min(3.0, 0.4 * duration);
  const double speed = perimeter / (duration - ramp / 2.0);
  scene.trajectory = SensorTrajectory(Point3(0.0, 0.0, kSensorHeight), 0.0,
                                      std::move(segments), speed, ramp, true);

  // Block geometry from the path footprint.
  const SensorTrajectory& tr = scene.trajectory;
  Eigen::Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
  for (double d = 0.0; d < perimeter; d += 0.25) {
    const Eigen::Vector2d p = tr.pose_at_distance(d).translation().head<2>();
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Point3 center(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()), 0.0);
  double near = 1e300, far = 0.0;  // L-infinity distance of the path from the center
  for (double d = 0.0; d < perimeter; d += 0.25) {
    const Vector3 p = tr.pose_at_distance(d).translation() - center;
    const double linf = std::max(std::abs(p.x()), std::abs(p.y()));
    near = std::min(near, linf);
    far = std::max(far, linf);
  }

  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  add_ground(scene);
  add_square_facade(scene, rng, center, near - 7.0, 12.0, true);
  add_square_facade(scene, rng, center, far + 8.0, 15.0, false);

  // Poles and parked cars along the street, alternating sides.
  std::uniform_real_distribution<double> pole_gap(6.0, 10.0);
  std::uniform_real_distribution<double> pole_radius(0.12, 0.3);
  std::uniform_real_distribution<double> pole_height(4.5, 8.0);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  int side = 1;
  for (double d = 4.0; d < perimeter - 2.0; d += pole_gap(rng)) {
    const RigidTransform pose = tr.pose_at_distance(d);
    const Vector3 left = pose.rotation().col(1);
    const Point3 at = pose.translation() + left * side * (4.5 + jitter(rng));
    add_pole(scene, at.x(), at.y(), pole_radius(rng), pole_height(rng));
    side = -side;
  }
  std::uniform_real_distribution<double> car_gap(20.0, 35.0);
  for (double d = 10.0; d < perimeter - 5.0; d += car_gap(rng)) {
    const RigidTransform pose = tr.pose_at_distance(d);
    const Vector3 right = -pose.rotation().col(1);
    const Point3 at = pose.translation() + right * (6.0 + jitter(rng));
    const double yaw = std::atan2(pose.rotation()(1, 0), pose.rotation()(0, 0));
    add_box(scene, Point3(at.x(), at.y(), 0.75), Vector3(2.1, 0.95, 0.75), yaw);
  }

  // Moving cars in the lane to the right of the sensor.
  std::uniform_real_distribution<double> car_speed(6.0, 12.0);
  for (int i = 0; i < dynamic_boxes; ++i) {
    const double d = perimeter * (0.12 + static_cast<double>(i) / std::max(dynamic_boxes, 1));
    const RigidTransform pose = tr.pose_at_distance(d);
    const Vector3 forward = pose.rotation().col(0);
    const Vector3 right = -pose.rotation().col(1);
    const Point3 at = pose.translation() + right * 2.6;
    const double yaw = std::atan2(forward.y(), forward.x());
    const double v = car_speed(rng) * (i % 2 == 0 ? 1.0 : -1.0);
    // Start behind (or ahead of) the spot so the car is near it mid-run.
    const Point3 c0 = at - forward * v * duration * 0.5;
    add_box(scene, Point3(c0.x(), c0.y(), 0.8), Vector3(2.0, 1.0, 0.8), yaw, forward * v);
  }
  return scene;
}

SyntheticScene corridor_scene(std::uint64_t seed, std::size_t sweeps, double speed) {
  SyntheticScene scene;
  scene.seed = seed;
  scene.noise_sigma = 0.02;
  scene.sweep_count = sweeps;
  scene.sweep_period = 0.1;
  scene.lidar.azimuth_steps = kStreetAzimuthSteps;
  const double duration = static_cast<double>(sweeps) * scene.sweep_period;
  const double length = std::max(speed * duration + 50.0, 60.0);
  scene.trajectory = SensorTrajectory(Point3(0.0, 0.0, kSensorHeight), 0.0,
                                      {{length, 0.0, 0.0}}, speed, 1.0, false);

  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 2);
  std::uniform_real_distribution<double> gap(3.0, 7.0);
  std::uniform_real_distribution<double> depth(0.15, 0.35);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::uniform_real_distribution<double> pole_gap(7.0, 12.0);
  add_ground(scene);
  const double x0 = -30.0;
  const double x1 = length + 100.0;
  const double half_width = 8.0;
  for (double sign : {-1.0, 1.0}) {
    add_box(scene, Point3(0.5 * (x0 + x1), sign * (half_width + 0.5), 4.0),
            Vector3(0.5 * (x1 - x0), 0.5, 4.0), 0.0);
    for (double x = x0 + gap(rng); x < x1; x += gap(rng)) {
      const double dp = depth(rng);
      add_box(scene, Point3(x, sign * (half_width - dp / 2.0), 3.5),
              Vector3(width(rng) / 2.0, dp / 2.0, 3.5), 0.0);
    }
    for (double x = x0 + pole_gap(rng); x < x1; x += pole_gap(rng))
      add_pole(scene, x, sign * 5.0, 0.15, 6.0);
  }
  add_box(scene, Point3(x0 - 0.5, 0.0, 4.0), Vector3(0.5, half_width + 1.0, 4.0), 0.0);
  return scene;
}

SyntheticScene room_scene(std::uint64_t seed, double noise_sigma) {
  SyntheticScene scene;
  scene.seed = seed;
  scene.noise_sigma = noise_sigma;
  scene.sweep_count = 2;
  scene.trajectory = SensorTrajectory::stationary(Point3(0.0, 0.0, kSensorHeight));
  add_ground(scene);
  scene.objects.push_back({Plane{Point3(4.0, 0.0, 0.0), -Vector3::UnitX()}, false});
  scene.objects.push_back({Plane{Point3(0.0, 6.0, 0.0), -Vector3::UnitY()}, false});
  return scene;
}

}  // namespace imls::sim
