// Command-line front end: odometry, evaluate, simulate.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "imls/errors.hpp"
#include "imls/evaluation.hpp"
#include "imls/pipeline.hpp"
#include "imls/scan_io.hpp"
#include "imls/simulator.hpp"

namespace {

int run_evaluate(const std::string& est, const std::string& gt) {
  try {
    const auto estimate = imls::read_kitti_trajectory(est);
    const auto truth = imls::read_kitti_trajectory(gt);
    std::cout << imls::format_report(imls::evaluate_kitti(estimate, truth));
    return 0;
  } catch (const imls::TooShort& e) {
    // Still useful on short runs: report the endpoint error alone.
    const auto estimate = imls::read_kitti_trajectory(est);
    const auto truth = imls::read_kitti_trajectory(gt);
    std::cerr << "warning: " << e.what() << '\n';
    std::cout << "endpoint_error_m " << imls::endpoint_error(estimate, truth) << '\n';
    return 0;
  } catch (const imls::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_simulate(const std::string& scene_file, const std::string& preset, std::uint64_t seed,
                 std::size_t sweeps, double speed, const std::filesystem::path& out_dir) {
  try {
    imls::sim::SyntheticScene scene;
    if (!scene_file.empty()) {
      scene = imls::sim::load_scene(scene_file);
    } else if (preset == "loop") {
      scene = imls::sim::square_loop_scene(seed, sweeps);
    } else if (preset == "corridor") {
      scene = imls::sim::corridor_scene(seed, sweeps, speed);
    } else if (preset == "room") {
      scene = imls::sim::room_scene(seed, 0.02);
      scene.sweep_count = sweeps;
    } else {
      std::cerr << "error: give --scene or --preset loop|corridor|room\n";
      return 2;
    }
    std::filesystem::create_directories(out_dir);
    const imls::sim::SimulatedRun run = imls::sim::simulate_run(scene);
    for (std::size_t k = 0; k < run.sweeps.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "%06zu.bin", k);
      imls::write_kitti_sweep(run.sweeps[k].sweep, out_dir / name);
    }
    imls::write_kitti_trajectory(run.truth, out_dir / "truth.txt");
    std::cout << "wrote " << run.sweeps.size() << " sweeps and truth.txt to "
              << out_dir.string() << '\n';
    return 0;
  } catch (const imls::ConfigError& e) {
    std::cerr << "scene error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMLS scan-to-model LiDAR odometry"};
  app.require_subcommand(1);

  auto* odo = app.add_subcommand("odometry", "Localize a directory of sweeps");
  std::string input, format = "kitti", config, traj, map, manifest;
  odo->add_option("--input", input, "Directory of sweep files")->required();
  odo->add_option("--format", format, "kitti or ply")->check(CLI::IsMember({"kitti", "ply"}));
  odo->add_option("--config", config, "key = value configuration file");
  odo->add_option("--output-traj", traj, "KITTI pose file to write")->required();
  odo->add_option("--output-map", map, "PLY file for the final model");
  odo->add_option("--manifest", manifest, "Per-sweep run manifest");

  auto* eval = app.add_subcommand("evaluate", "KITTI drift of an estimate against truth");
  std::string est, gt;
  eval->add_option("--est", est, "Estimated trajectory")->required();
  eval->add_option("--gt", gt, "Ground-truth trajectory")->required();

  auto* sim = app.add_subcommand("simulate", "Write synthetic KITTI sweeps and truth");
  std::string scene_file, preset, out_dir;
  std::uint64_t seed = 0;
  std::size_t sweeps = 80;
  double speed = 10.0;
  auto* scene_opt = sim->add_option("--scene", scene_file, "Scene description file");
  sim->add_option("--preset", preset, "loop, corridor or room")
      ->check(CLI::IsMember({"loop", "corridor", "room"}))
      ->excludes(scene_opt);
  sim->add_option("--seed", seed, "Preset layout and noise seed");
  sim->add_option("--sweeps", sweeps, "Preset sweep count")->check(CLI::PositiveNumber);
  sim->add_option("--speed", speed, "Corridor cruise speed (m/s)");
  sim->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (odo->parsed()) {
    imls::OdometryArgs args;
    args.input_dir = input;
    args.format = imls::parse_input_format(format);
    if (!config.empty()) args.config = config;
    args.output_traj = traj;
    if (!map.empty()) args.output_map = map;
    if (!manifest.empty()) args.manifest = manifest;
    return imls::run_odometry(args, std::cout, std::cerr);
  }
  if (eval->parsed()) return run_evaluate(est, gt);
  return run_simulate(scene_file, preset, seed, sweeps, speed, out_dir);
}
