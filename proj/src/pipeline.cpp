#include "imls/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "imls/errors.hpp"
#include "imls/scan_io.hpp"

namespace imls {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

InputFormat parse_input_format(const std::string& name) {
  if (name == "kitti") return InputFormat::kKitti;
  if (name == "ply") return InputFormat::kPly;
  throw ConfigError("unknown input format '" + name + "' (expected kitti or ply)");
}

std::string to_string(InputFormat format) {
  return format == InputFormat::kKitti ? "kitti" : "ply";
}

std::vector<std::filesystem::path> list_sweep_files(const std::filesystem::path& dir,
                                                    InputFormat format) {
  const std::string ext = format == InputFormat::kKitti ? ".bin" : ".ply";
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ext)
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::string format_manifest(const RunManifest& m) {
  std::ostringstream out;
  out << "# imls odometry manifest\n";
  out << "# input " << m.args.input_dir.string() << '\n';
  out << "# format " << to_string(m.args.format) << '\n';
  out << "# output_traj " << m.args.output_traj.string() << '\n';
  out << "# output_map " << (m.args.output_map ? m.args.output_map->string() : "-") << '\n';
  std::istringstream config(format_config(m.config));
  for (std::string line; std::getline(config, line);) out << "# config " << line << '\n';
  out << "# sweeps " << m.sweeps.size() << '\n';
  out << "# file raw kept samples iterations fallback mean_abs_residual"
         " deskew_ms removal_ms features_ms sampling_ms match_ms insert_ms total_ms\n";
  for (std::size_t i = 0; i < m.sweeps.size(); ++i) {
    const SweepReport& s = m.sweeps[i];
    const StageTimings& t = s.timings;
    out << (i < m.inputs.size() ? m.inputs[i].filename().string() : std::to_string(s.index))
        << ' ' << s.raw_points << ' ' << s.kept_points << ' ' << s.samples << ' '
        << s.match.iterations_run << ' ' << (s.match.fallback ? 1 : 0) << ' '
        << fixed(s.match.mean_abs_residual, 6) << ' ' << fixed(t.deskew_ms, 3) << ' '
        << fixed(t.removal_ms, 3) << ' ' << fixed(t.features_ms, 3) << ' '
        << fixed(t.sampling_ms, 3) << ' ' << fixed(t.match_ms, 3) << ' '
        << fixed(t.insert_ms, 3) << ' ' << fixed(t.total_ms(), 3) << '\n';
  }
  return out.str();
}

int run_odometry(const OdometryArgs& args, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.args = args;
  try {
    manifest.config = args.config ? load_config(*args.config) : RunConfig{};
    manifest.config.validate();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    manifest.inputs = list_sweep_files(args.input_dir, args.format);
    if (manifest.inputs.empty())
      throw IoError("no " + to_string(args.format) + " sweeps in " + args.input_dir.string());

    Odometry odometry(manifest.config);
    for (std::size_t i = 0; i < manifest.inputs.size(); ++i) {
      const auto& file = manifest.inputs[i];
      const Sweep sweep = args.format == InputFormat::kKitti ? read_kitti_sweep(file, i)
                                                             : read_ply_sweep(file, i);
      manifest.sweeps.push_back(odometry.localize_sweep(sweep));
      const SweepReport& r = manifest.sweeps.back();
      out << "sweep " << i + 1 << '/' << manifest.inputs.size() << ' '
          << file.filename().string() << ": " << r.samples << " samples, "
          << fixed(r.timings.total_ms(), 1) << " ms" << (r.match.fallback ? " (fallback)" : "")
          << '\n';
    }

    const std::vector<RigidTransform> trajectory = odometry.sensor_trajectory();
    write_kitti_trajectory(trajectory, args.output_traj);
    if (args.output_map) {
      // Back to the sensor's axes, like the trajectory.
      const RigidTransform back = manifest.config.axis_remap.transform().inverse();
      const ModelMap& model = odometry.model();
      std::vector<Point3> points(model.points().begin(), model.points().end());
      std::vector<Vector3> normals(model.normals().begin(), model.normals().end());
      for (auto& p : points) p = back * p;
      for (auto& n : normals) n = back.rotation() * n;
      write_ply(points, normals, *args.output_map);
    }
    if (args.manifest) write_text(*args.manifest, format_manifest(manifest));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  StageTimings sum;
  std::size_t fallbacks = 0;
  for (const auto& s : manifest.sweeps) {
    sum.deskew_ms += s.timings.deskew_ms;
    sum.removal_ms += s.timings.removal_ms;
    sum.features_ms += s.timings.features_ms;
    sum.sampling_ms += s.timings.sampling_ms;
    sum.match_ms += s.timings.match_ms;
    sum.insert_ms += s.timings.insert_ms;
    if (s.match.fallback) ++fallbacks;
  }
  const double n = static_cast<double>(manifest.sweeps.size());
  out << "processed " << manifest.sweeps.size() << " sweeps, " << fallbacks
      << " fallbacks\n";
  out << "mean ms per sweep: deskew " << fixed(sum.deskew_ms / n, 2) << ", removal "
      << fixed(sum.removal_ms / n, 2) << ", features " << fixed(sum.features_ms / n, 2)
      << ", sampling " << fixed(sum.sampling_ms / n, 2) << ", match "
      << fixed(sum.match_ms / n, 2) << ", insert " << fixed(sum.insert_ms / n, 2)
      << ", total " << fixed(sum.total_ms() / n, 2) << '\n';
  return 0;
}

}  // namespace imls
