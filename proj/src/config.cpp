#include "imls/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "imls/errors.hpp"

namespace imls {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config: " + key + " expects an integer, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " expects on/off, got '" + value + "'");
}

int to_count(const std::string& key, const std::string& value) {
  const long long v = to_int(key, value);
  if (v < 1 || v > 1'000'000'000) throw ConfigError("config: " + key + " must be >= 1");
  return static_cast<int>(v);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"s", [](RunConfig& c, auto& k, auto& v) { c.s = to_count(k, v); }},
      {"h", [](RunConfig& c, auto& k, auto& v) { c.h = to_double(k, v); }},
      {"r", [](RunConfig& c, auto& k, auto& v) { c.r = to_double(k, v); }},
      {"n", [](RunConfig& c, auto& k, auto& v) { c.n = to_count(k, v); }},
      {"iterations", [](RunConfig& c, auto& k, auto& v) { c.iterations = to_count(k, v); }},
      {"object_removal",
       [](RunConfig& c, auto& k, auto& v) { c.object_removal = to_bool(k, v); }},
      {"deskew",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "auto") {
           c.deskew = DeskewMode::kAuto;
         } else {
           c.deskew = to_bool(k, v) ? DeskewMode::kOn : DeskewMode::kOff;
         }
       }},
      {"sampling",
       [](RunConfig& c, auto&, auto& v) {
         if (v == "ours") {
           c.sampling = SamplingMode::kOurs;
         } else if (v == "random") {
           c.sampling = SamplingMode::kRandom;
         } else if (v == "all") {
           c.sampling = SamplingMode::kAll;
         } else {
           throw ConfigError("config: sampling must be ours, random or all");
         }
       }},
      {"k_neighbors",
       [](RunConfig& c, auto& k, auto& v) { c.k_neighbors = to_count(k, v); }},
      {"axis_remap", [](RunConfig& c, auto&, auto& v) { c.axis_remap = AxisRemap::parse(v); }},
      {"min_samples",
       [](RunConfig& c, auto& k, auto& v) { c.min_samples = to_count(k, v); }},
      {"seed",
       [](RunConfig& c, auto& k, auto& v) {
         const long long s = to_int(k, v);
         if (s < 0) throw ConfigError("config: seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"ground_voxel",
       [](RunConfig& c, auto& k, auto& v) { c.removal.ground.voxel_size = to_double(k, v); }},
      {"ground_seed_radius",
       [](RunConfig& c, auto& k, auto& v) { c.removal.ground.seed_radius = to_double(k, v); }},
      {"ground_max_slope_deg",
       [](RunConfig& c, auto& k, auto& v) {
         c.removal.ground.max_slope_deg = to_double(k, v);
       }},
      {"ground_max_step",
       [](RunConfig& c, auto& k, auto& v) { c.removal.ground.max_step = to_double(k, v); }},
      {"cluster_link",
       [](RunConfig& c, auto& k, auto& v) { c.removal.link_distance = to_double(k, v); }},
      {"removal_extent_x",
       [](RunConfig& c, auto& k, auto& v) { c.removal.max_extent.x() = to_double(k, v); }},
      {"removal_extent_y",
       [](RunConfig& c, auto& k, auto& v) { c.removal.max_extent.y() = to_double(k, v); }},
      {"removal_extent_z",
       [](RunConfig& c, auto& k, auto& v) { c.removal.max_extent.z() = to_double(k, v); }},
  };
  return table;
}

Vector3 axis_from_token(const std::string& token, const std::string& spec) {
  std::string t = trim(token);
  double sign = 1.0;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    sign = t[0] == '-' ? -1.0 : 1.0;
    t = t.substr(1);
  }
  if (t == "x") return sign * Vector3::UnitX();
  if (t == "y") return sign * Vector3::UnitY();
  if (t == "z") return sign * Vector3::UnitZ();
  throw ConfigError("config: bad axis_remap '" + spec + "'");
}

}  // namespace

AxisRemap AxisRemap::parse(const std::string& spec) {
  std::string expr = spec;
  if (spec == "kitti") expr = "-y,x,z";
  if (spec == "identity") expr = "x,y,z";
  std::vector<std::string> tokens;
  std::stringstream ss(expr);
  std::string token;
  while (std::getline(ss, token, ',')) tokens.push_back(token);
  if (tokens.size() != 3) throw ConfigError("config: bad axis_remap '" + spec + "'");
  AxisRemap remap;
  remap.spec = spec;
  for (int row = 0; row < 3; ++row) {
    remap.sensor_to_vehicle.row(row) = axis_from_token(tokens[row], spec).transpose();
  }
  const Matrix3& m = remap.sensor_to_vehicle;
  if ((m.transpose() * m - Matrix3::Identity()).cwiseAbs().maxCoeff() > 0.0 ||
      m.determinant() < 0.5) {
    throw ConfigError("config: axis_remap '" + spec + "' is not a proper rotation");
  }
  return remap;
}

void RunConfig::validate() const {
  if (s < 1) throw ConfigError("config: s must be >= 1");
  if (!(h > 0.0)) throw ConfigError("config: h must be > 0");
  if (!(r > 0.0)) throw ConfigError("config: r must be > 0");
  if (n < 1) throw ConfigError("config: n must be >= 1");
  if (iterations < 1) throw ConfigError("config: iterations must be >= 1");
  if (k_neighbors < 3) throw ConfigError("config: k_neighbors must be >= 3");
  if (min_samples < 6) throw ConfigError("config: min_samples must be >= 6");
  const GroundParams& g = removal.ground;
  if (!(g.voxel_size > 0.0) || !(g.seed_radius > 0.0) || !(g.max_step > 0.0) ||
      !(g.max_slope_deg > 0.0 && g.max_slope_deg < 90.0)) {
    throw ConfigError("config: invalid ground extraction parameters");
  }
  if (!(removal.link_distance > 0.0)) throw ConfigError("config: cluster_link must be > 0");
  if (!(removal.max_extent.array() >= 0.0).all()) {
    throw ConfigError("config: removal extents must be >= 0");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
    it->second(config, key, value);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_string(SamplingMode mode) {
  switch (mode) {
    case SamplingMode::kOurs: return "ours";
    case SamplingMode::kRandom: return "random";
    case SamplingMode::kAll: return "all";
  }
  return "?";
}

std::string to_string(DeskewMode mode) {
  switch (mode) {
    case DeskewMode::kAuto: return "auto";
    case DeskewMode::kOn: return "on";
    case DeskewMode::kOff: return "off";
  }
  return "?";
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "s = " << c.s << '\n'
      << "h = " << c.h << '\n'
      << "r = " << c.r << '\n'
      << "n = " << c.n << '\n'
      << "iterations = " << c.iterations << '\n'
      << "object_removal = " << (c.object_removal ? "on" : "off") << '\n'
      << "deskew = " << to_string(c.deskew) << '\n'
      << "sampling = " << to_string(c.sampling) << '\n'
      << "k_neighbors = " << c.k_neighbors << '\n'
      << "axis_remap = " << c.axis_remap.spec << '\n'
      << "min_samples = " << c.min_samples << '\n'
      << "seed = " << c.seed << '\n'
      << "ground_voxel = " << c.removal.ground.voxel_size << '\n'
      << "ground_seed_radius = " << c.removal.ground.seed_radius << '\n'
      << "ground_max_slope_deg = " << c.removal.ground.max_slope_deg << '\n'
      << "ground_max_step = " << c.removal.ground.max_step << '\n'
      << "cluster_link = " << c.removal.link_distance << '\n'
      << "removal_extent_x = " << c.removal.max_extent.x() << '\n'
      << "removal_extent_y = " << c.removal.max_extent.y() << '\n'
      << "removal_extent_z = " << c.removal.max_extent.z() << '\n';
  return out.str();
}

}  // namespace imls
