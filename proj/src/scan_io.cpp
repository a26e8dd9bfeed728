#include "imls/scan_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "imls/errors.hpp"

namespace imls {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary readers assume a little-endian host");

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw IoError("write failed for " + path.string());
}

std::string format_decimal(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void synthesize_time_fractions(std::span<TimedPoint> points) {
  if (points.empty()) return;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const auto azimuth = [](const Point3& p) { return std::atan2(p.y(), p.x()); };
  const double origin = azimuth(points.front().position);
  for (auto& p : points) {
    double delta = azimuth(p.position) - origin;
    delta = std::fmod(delta, kTwoPi);
    if (delta < 0.0) delta += kTwoPi;
    double u = delta / kTwoPi;
    if (u >= 1.0) u = 0.0;
    p.time_fraction = u;
  }
}

Sweep read_kitti_sweep(const std::filesystem::path& path, std::size_t index) {
  const std::vector<char> bytes = read_file(path);
  if (bytes.size() % 16 != 0) {
    throw MalformedFile(path.string() + ": size is not a multiple of 16 bytes");
  }
  Sweep sweep;
  sweep.index = index;
  sweep.pre_deskewed = true;
  sweep.points.reserve(bytes.size() / 16);
  for (std::size_t offset = 0; offset < bytes.size(); offset += 16) {
    std::array<float, 4> v;
    std::memcpy(v.data(), bytes.data() + offset, 16);
    for (float f : v) {
      if (!std::isfinite(f)) {
        throw MalformedFile(path.string() + ": non-finite value in record " +
                            std::to_string(offset / 16));
      }
    }
    TimedPoint p;
    p.position = Point3(v[0], v[1], v[2]);
    p.intensity = v[3];
    if (p.position.squaredNorm() == 0.0) continue;
    sweep.points.push_back(p);
  }
  if (sweep.points.empty()) throw EmptySweep(path.string() + ": no returns");
  synthesize_time_fractions(sweep.points);
  return sweep;
}

void write_kitti_sweep(const Sweep& sweep, const std::filesystem::path& path) {
  auto out = open_output(path, true);
  for (const auto& p : sweep.points) {
    const std::array<float, 4> v{static_cast<float>(p.position.x()),
                                 static_cast<float>(p.position.y()),
                                 static_cast<float>(p.position.z()),
                                 p.intensity.value_or(0.0f)};
    out.write(reinterpret_cast<const char*>(v.data()), 16);
  }
  check_written(out, path);
}

std::string format_kitti_pose(const RigidTransform& pose) {
  const Matrix3& r = pose.rotation();
  const Vector3& t = pose.translation();
  std::string line;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 4; ++col) {
      if (!line.empty()) line += ' ';
      line += format_decimal(col < 3 ? r(row, col) : t[row]);
    }
  }
  return line;
}

void write_kitti_trajectory(std::span<const RigidTransform> poses,
                            const std::filesystem::path& path) {
  auto out = open_output(path, false);
  for (const auto& pose : poses) out << format_kitti_pose(pose) << '\n';
  check_written(out, path);
}

std::vector<RigidTransform> read_kitti_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<RigidTransform> poses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    Eigen::Matrix<double, 3, 4> m;
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 4; ++col) {
        if (!(ss >> m(row, col))) {
          throw MalformedFile(path.string() + ":" + std::to_string(line_no) +
                              ": expected 12 values");
        }
      }
    }
    if (!m.allFinite()) {
      throw MalformedFile(path.string() + ":" + std::to_string(line_no) +
                          ": non-finite value");
    }
    try {
      poses.emplace_back(m.leftCols<3>(), m.col(3));
    } catch (const std::invalid_argument&) {
      throw MalformedFile(path.string() + ":" + std::to_string(line_no) +
                          ": rotation is not orthonormal");
    }
  }
  return poses;
}

void write_ply(std::span<const Point3> points, std::span<const Vector3> normals,
               const std::filesystem::path& path) {
  if (!normals.empty() && normals.size() != points.size()) {
    throw std::invalid_argument("write_ply: normals/points size mismatch");
  }
  auto out = open_output(path, true);
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << points.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (!normals.empty()) {
    out << "property double nx\nproperty double ny\nproperty double nz\n";
  }
  out << "end_header\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.write(reinterpret_cast<const char*>(points[i].data()), 3 * sizeof(double));
    if (!normals.empty()) {
      out.write(reinterpret_cast<const char*>(normals[i].data()), 3 * sizeof(double));
    }
  }
  check_written(out, path);
}

PlyCloud read_ply(const std::filesystem::path& path) {
  const std::vector<char> bytes = read_file(path);
  const std::string_view text(bytes.data(), bytes.size());
  const std::string_view end_marker = "end_header\n";
  const auto header_end = text.find(end_marker);
  if (text.substr(0, 4) != "ply\n" || header_end == std::string_view::npos) {
    throw MalformedFile(path.string() + ": not a PLY file");
  }

  struct Property {
    std::string name;
    std::size_t size;
    bool is_double;
  };
  std::vector<Property> props;
  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool saw_vertex = false;
  std::istringstream header(std::string(text.substr(0, header_end)));
  std::string line;
  while (std::getline(header, line)) {
    std::istringstream ss(line);
    std::string keyword;
    ss >> keyword;
    if (keyword == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt != "binary_little_endian") {
        throw MalformedFile(path.string() + ": only binary_little_endian is supported");
      }
    } else if (keyword == "element") {
      std::string name;
      ss >> name;
      in_vertex = name == "vertex";
      if (in_vertex) {
        if (!(ss >> vertex_count)) throw MalformedFile(path.string() + ": bad vertex count");
        saw_vertex = true;
      } else if (saw_vertex) {
        // Elements after the vertices are ignored; nothing more to parse.
        break;
      }
    } else if (keyword == "property" && in_vertex) {
      std::string type, name;
      ss >> type >> name;
      std::size_t size = 0;
      bool is_double = false;
      if (type == "float" || type == "float32") {
        size = 4;
      } else if (type == "double" || type == "float64") {
        size = 8;
        is_double = true;
      } else if (type == "uchar" || type == "char" || type == "uint8" || type == "int8") {
        size = 1;
      } else if (type == "ushort" || type == "short" || type == "uint16" || type == "int16") {
        size = 2;
      } else if (type == "uint" || type == "int" || type == "uint32" || type == "int32") {
        size = 4;
      } else {
        throw MalformedFile(path.string() + ": unsupported property type " + type);
      }
      props.push_back({name, size, is_double});
    }
  }

  const auto find = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i].name == name) return static_cast<int>(i);
    }
    return -1;
  };
  const std::array<int, 3> xyz{find("x"), find("y"), find("z")};
  const std::array<int, 3> nxyz{find("nx"), find("ny"), find("nz")};
  if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0) {
    throw MalformedFile(path.string() + ": missing x/y/z properties");
  }
  const bool has_normals = nxyz[0] >= 0 && nxyz[1] >= 0 && nxyz[2] >= 0;

  std::vector<std::size_t> offsets(props.size());
  std::size_t stride = 0;
  for (std::size_t i = 0; i < props.size(); ++i) {
    offsets[i] = stride;
    stride += props[i].size;
  }
  const std::size_t body = header_end + end_marker.size();
  if (bytes.size() < body + vertex_count * stride) {
    throw MalformedFile(path.string() + ": truncated vertex data");
  }
  const auto read_value = [&](std::size_t vertex, int prop) {
    const char* src = bytes.data() + body + vertex * stride + offsets[prop];
    if (props[prop].is_double) {
      double d;
      std::memcpy(&d, src, 8);
      return d;
    }
    if (props[prop].size != 4) {
      throw MalformedFile(path.string() + ": coordinates must be float or double");
    }
    float f;
    std::memcpy(&f, src, 4);
    return static_cast<double>(f);
  };

  PlyCloud cloud;
  cloud.points.reserve(vertex_count);
  if (has_normals) cloud.normals.reserve(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    const Point3 p(read_value(v, xyz[0]), read_value(v, xyz[1]), read_value(v, xyz[2]));
    if (!p.allFinite()) {
      throw MalformedFile(path.string() + ": non-finite coordinate at vertex " +
                          std::to_string(v));
    }
    cloud.points.push_back(p);
    if (has_normals) {
      const Vector3 n(read_value(v, nxyz[0]), read_value(v, nxyz[1]),
                      read_value(v, nxyz[2]));
      if (!n.allFinite()) {
        throw MalformedFile(path.string() + ": non-finite normal at vertex " +
                            std::to_string(v));
      }
      cloud.normals.push_back(n);
    }
  }
  return cloud;
}

Sweep read_ply_sweep(const std::filesystem::path& path, std::size_t index) {
  const PlyCloud cloud = read_ply(path);
  Sweep sweep;
  sweep.index = index;
  for (const auto& p : cloud.points) {
    if (p.squaredNorm() == 0.0) continue;
    sweep.points.push_back({p, 0.0, std::nullopt});
  }
  if (sweep.points.empty()) throw EmptySweep(path.string() + ": no returns");
  synthesize_time_fractions(sweep.points);
  return sweep;
}

}  // namespace imls
