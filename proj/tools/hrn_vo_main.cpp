// hrn-vo: event-based visual odometry with a hierarchical resonator.
//
// Subcommands:
//   run    --config <file> [--out <dir>] [--fusion] [--set sec.key=value]...
//   eval   --traj <csv> --gt <file> --mode <rot3|planar> --window <spec>
//   synth  --scene <file> --traj <file> --out <dir>
//
// Exit codes: 0 ok, 2 config error, 3 data error, 4 no temporal overlap.

#include <CLI11.hpp>
#include <iostream>

#include "hrnvo/commands.hpp"
#include "hrnvo/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitEval = 4;

// "sec.key=value" command-line override.
void applyOverride(hrnvo::KeyValueConfig& cfg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override needs key=value: " + spec);
  std::string key = spec.substr(0, eq);
  std::string section;
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  } else {
    section = "run";
  }
  cfg.set(section, key, spec.substr(eq + 1));
}

hrnvo::WindowSpec parseWindowSpec(const std::string& spec) {
  hrnvo::WindowSpec w;
  if (spec == "last10" || spec == "last-10s-of-train") {
    w.mode = hrnvo::WindowMode::LastTenSecondsOfTrain;
  } else if (spec == "split70" || spec == "split-70-30") {
    w.mode = hrnvo::WindowMode::Split7030;
  } else {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("window must be last10, split70, or begin:end seconds");
    w.mode = hrnvo::WindowMode::Explicit;
    w.explicitBegin = std::stod(spec.substr(0, colon));
    w.explicitEnd = std::stod(spec.substr(colon + 1));
  }
  return w;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const hrnvo::NoOverlapError*>(&e)) return kExitEval;
  if (dynamic_cast<const hrnvo::NotFoundError*>(&e) ||
      dynamic_cast<const hrnvo::FormatError*>(&e) ||
      dynamic_cast<const hrnvo::DegenerateInput*>(&e))
    return kExitData;
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-based visual odometry with a hierarchical resonator network"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Track a dataset and write the trajectory CSV");
  std::string runConfigPath;
  std::string runOut;
  bool runFusion = false;
  bool runNoFusion = false;
  std::vector<std::string> runOverrides;
  run->add_option("--config", runConfigPath, "run configuration file")->required();
  run->add_option("--out", runOut, "output directory (overrides config)");
  run->add_flag("--fusion", runFusion, "enable IMU fusion");
  run->add_flag("--no-fusion", runNoFusion, "disable IMU fusion");
  run->add_option("--set", runOverrides, "override config entries, section.key=value");

  auto* eval = app.add_subcommand("eval", "Compare a trajectory CSV against ground truth");
  hrnvo::EvalOptions evalOptions;
  std::string evalMode = "rot3";
  std::string evalWindow = "last10";
  std::string evalTraj, evalGt, evalOut = "eval";
  eval->add_option("--traj", evalTraj, "network trajectory CSV")->required();
  eval->add_option("--gt", evalGt, "ground truth file (t px py pz qx qy qz qw)")->required();
  eval->add_option("--mode", evalMode, "rot3 | planar");
  eval->add_option("--window", evalWindow, "last10 | split70 | begin:end");
  eval->add_option("--out", evalOut, "output directory");
  eval->add_option("--rate", evalOptions.resampleRateHz, "resampling rate in Hz");
  eval->add_option("--period-h", evalOptions.periodH, "unwrap period for the h trace, px");
  eval->add_option("--period-v", evalOptions.periodV, "unwrap period for the v trace, px");
  eval->add_flag("--per-axis", evalOptions.perAxis, "per-axis angle error instead of geodesic");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string sceneFile, trajFile, synthOut;
  synth->add_option("--scene", sceneFile, "scene spec file")->required();
  synth->add_option("--traj", trajFile, "trajectory spec file")->required();
  synth->add_option("--out", synthOut, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      hrnvo::KeyValueConfig cfg = hrnvo::KeyValueConfig::fromFile(runConfigPath);
      if (!runOut.empty()) cfg.set("run", "out_dir", runOut);
      if (runFusion) cfg.set("resonator", "fusion", "true");
      if (runNoFusion) cfg.set("resonator", "fusion", "false");
      for (const auto& o : runOverrides) applyOverride(cfg, o);
      const hrnvo::RunOutputs out = hrnvo::runTracking(hrnvo::parseRunConfig(cfg));
      std::cout << "trajectory: " << out.trajectoryCsv.string() << "\n"
                << "manifest: " << out.manifest.string() << "\n"
                << "packages: " << out.packageCount << "\n";
    } else if (eval->parsed()) {
      evalOptions.trajectoryCsv = evalTraj;
      evalOptions.groundTruthFile = evalGt;
      evalOptions.outDir = evalOut;
      evalOptions.window = parseWindowSpec(evalWindow);
      if (evalMode == "rot3")
        evalOptions.mode = hrnvo::ErrorMode::Rotational3Dof;
      else if (evalMode == "planar")
        evalOptions.mode = hrnvo::ErrorMode::Planar;
      else
        throw std::invalid_argument("mode must be rot3 or planar");
      const hrnvo::EvalOutputs out = hrnvo::runEvaluation(evalOptions);
      std::cout << "report: " << out.report.string() << "\n"
                << "median_angle_error_deg: " << out.result.medianAngleErrorDeg << "\n";
      if (evalOptions.mode == hrnvo::ErrorMode::Planar)
        std::cout << "median_position_error: " << out.result.medianPositionError << "\n";
    } else if (synth->parsed()) {
      const hrnvo::KeyValueConfig sceneCfg = hrnvo::KeyValueConfig::fromFile(sceneFile);
      const hrnvo::KeyValueConfig trajCfg = hrnvo::KeyValueConfig::fromFile(trajFile);
      const hrnvo::SynthParams params = hrnvo::parseSynthParams(sceneCfg, trajCfg);
      const hrnvo::SynthOutputs out = hrnvo::runSynth(params, synthOut);
      std::cout << "manifest: " << out.manifest.string() << "\n"
                << "events: " << out.eventCount << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  }
  return kExitOk;
}
