#pragma once

#include <filesystem>
#include <string>

#include "hrnvo/evaluation.hpp"
#include "hrnvo/run_config.hpp"

namespace hrnvo {

struct RunOutputs {
  std::filesystem::path trajectoryCsv;
  std::filesystem::path manifest;
  long packageCount = 0;
};

// Streams the dataset through preprocessing and the resonator, writing
// trajectory.csv, optional similarity-profile dumps, and a manifest under
// cfg.outDir. Partial outputs are removed if the run fails.
RunOutputs runTracking(const RunConfig& cfg);

struct EvalOptions {
  std::filesystem::path trajectoryCsv;
  std::filesystem::path groundTruthFile;  // text-v1 groundtruth.txt
  ErrorMode mode = ErrorMode::Rotational3Dof;
  bool perAxis = false;
  WindowSpec window;
  std::filesystem::path outDir = "eval";
  double resampleRateHz = 400.0;
  double periodH = 0.0;  // unwrap periods for the network h/v traces
  double periodV = 0.0;
};

struct EvalOutputs {
  std::filesystem::path report;
  std::filesystem::path seriesCsv;
  std::filesystem::path overlayPlot;
  std::filesystem::path errorPlot;
  ErrorReport result;
};

// resample -> lag -> calibrate -> error, plus report/series/plot files.
EvalOutputs runEvaluation(const EvalOptions& options);

// Ground-truth file to trajectory triples: (pan, tilt, roll) degrees for
// rotational mode, (x, y, roll) for planar mode. Roll is unwrapped.
Trajectory groundTruthTrajectory(const std::filesystem::path& file, ErrorMode mode);

struct SynthOutputs {
  std::filesystem::path datasetDir;
  std::filesystem::path manifest;
  std::size_t eventCount = 0;
};

SynthOutputs runSynth(const SynthParams& params, const std::filesystem::path& outDir);

}  // namespace hrnvo
