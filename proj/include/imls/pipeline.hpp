#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imls/config.hpp"
#include "imls/odometry.hpp"

namespace imls {

enum class InputFormat { kKitti, kPly };

/// Throws ConfigError for anything other than "kitti" or "ply".
InputFormat parse_input_format(const std::string& name);
std::string to_string(InputFormat format);

struct OdometryArgs {
  std::filesystem::path input_dir;
  InputFormat format = InputFormat::kKitti;
  std::optional<std::filesystem::path> config;  // defaults when absent
  std::filesystem::path output_traj;
  std::optional<std::filesystem::path> output_map;
  std::optional<std::filesystem::path> manifest;
};

struct RunManifest {
  OdometryArgs args;
  RunConfig config;
  std::vector<std::filesystem::path> inputs;
  std::vector<SweepReport> sweeps;
};

/// Regular files with the format's extension (".bin" or ".ply"), sorted by
/// file name. Throws IoError when the directory cannot be listed.
std::vector<std::filesystem::path> list_sweep_files(const std::filesystem::path& dir,
                                                    InputFormat format);

/// Header lines starting with '#', the configuration, then one line per sweep.
std::string format_manifest(const RunManifest& manifest);

/// Runs the odometry over every sweep of `args.input_dir` and writes the
/// outputs. Progress and the timing summary go to `out`, errors to `err`.
/// Returns 0 on success, 1 on unreadable or malformed input, 2 on a bad
/// configuration.
int run_odometry(const OdometryArgs& args, std::ostream& out, std::ostream& err);

}  // namespace imls
