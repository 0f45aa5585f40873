#include "hrnvo/commands.hpp"

#include <fstream>
#include <numbers>
#include <optional>

#include "hrnvo/cache_io.hpp"
#include "hrnvo/errors.hpp"
#include "hrnvo/frame_transform.hpp"
#include "hrnvo/svg_plot.hpp"

namespace hrnvo {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Removes the files it owns unless release() was called.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (released_) return;
    for (const auto& f : files_) {
      std::error_code ec;
      std::filesystem::remove(f, ec);
    }
  }
  void add(const std::filesystem::path& f) { files_.push_back(f); }
  void release() { released_ = true; }

 private:
  std::vector<std::filesystem::path> files_;
  bool released_ = false;
};

void writeProfileRow(std::ofstream& out, double t, const CoefficientVector& profile) {
  out << t;
  for (Eigen::Index i = 0; i < profile.size(); ++i) out << "," << profile[i];
  out << "\n";
}

}  // namespace

RunOutputs runTracking(const RunConfig& cfg) {
  cfg.validate();

  CodebookSet set;
  bool fromCache = false;
  if (!cfg.codebookCache.empty())
    fromCache = loadCodebookSetCache(cfg.codebookCache, cfg.grid, cfg.polar, cfg.kind, cfg.seed,
                                     set, cfg.dimension, cfg.polarDimension);
  if (!fromCache) {
    set = buildCodebookSet(cfg.grid, cfg.polar, cfg.kind, cfg.seed, cfg.dimension,
                           cfg.polarDimension);
    if (!cfg.codebookCache.empty()) saveCodebookSetCache(cfg.codebookCache, set);
  }
  auto books = std::make_shared<CodebookSet>(std::move(set));
  auto transform = buildFrameTransform(*books);

  EventFileReader reader(cfg.dataset / "events.txt", cfg.sensor);
  std::vector<ImuSample> imu;
  if (cfg.resonator.fusionEnabled) {
    imu = loadImuFile(cfg.dataset / "imu.txt");
    if (imu.empty())
      throw NotFoundError("fusion enabled but no usable imu.txt in " + cfg.dataset.string());
  }

  std::filesystem::create_directories(cfg.outDir);
  OutputGuard guard;
  RunOutputs outputs;
  outputs.trajectoryCsv = cfg.outDir / "trajectory.csv";
  outputs.manifest = cfg.outDir / "manifest.txt";

  std::ofstream csv(outputs.trajectoryCsv);
  guard.add(outputs.trajectoryCsv);
  csv.precision(12);
  csv << "t,h,v,r\n";

  std::ofstream hProf, vProf, rProf;
  if (cfg.dumpProfiles) {
    for (const char* name : {"profile_h.csv", "profile_v.csv", "profile_r.csv"})
      guard.add(cfg.outDir / name);
    hProf.open(cfg.outDir / "profile_h.csv");
    vProf.open(cfg.outDir / "profile_v.csv");
    rProf.open(cfg.outDir / "profile_r.csv");
  }

  Resonator resonator(books, transform, cfg.resonator);
  Rng rng(cfg.seed);
  EventPackager packager({cfg.sensor, cfg.grid, cfg.packageSize, cfg.binarizeThreshold});
  double prevTMid = 0.0;

  while (auto ev = reader.next()) {
    auto frame = packager.push(*ev);
    if (!frame) continue;

    if (!resonator.initialized()) {
      outputs.packageCount += 1;
      if (frame->bits.sum() == 0.0) {
        // Nothing to anchor on yet; report the identity estimate.
        csv << frame->tMid << ",0,0,0\n";
        continue;
      }
      resonator.init(*frame, rng);
      prevTMid = frame->tMid;
      const Estimate est = resonator.stepFrame(*frame);
      csv << est.tMid << "," << est.hOut << "," << est.vOut << "," << est.rOut << "\n";
      if (cfg.dumpProfiles) {
        writeProfileRow(hProf, est.tMid, est.hProfile);
        writeProfileRow(vProf, est.tMid, est.vProfile);
        writeProfileRow(rProf, est.tMid, est.rProfile);
      }
      continue;
    }

    std::optional<ImuRates> rates;
    double dt = frame->tMid - prevTMid;
    if (cfg.resonator.fusionEnabled && dt > 0.0) {
      const ImuSample s = interpolateAt(imu, frame->tMid);
      ImuRates r;
      r.rollDegPerSec = cfg.imuRollSign * s.angularVelocity[2] * kDegPerRad;
      r.panPxPerSec = s.angularVelocity[1] * cfg.imuPanScale;
      r.tiltPxPerSec = s.angularVelocity[0] * cfg.imuTiltScale;
      rates = r;
    }
    const Estimate est = resonator.stepFrame(*frame, rates, dt);
    prevTMid = frame->tMid;
    outputs.packageCount += 1;
    csv << est.tMid << "," << est.hOut << "," << est.vOut << "," << est.rOut << "\n";
    if (cfg.dumpProfiles) {
      writeProfileRow(hProf, est.tMid, est.hProfile);
      writeProfileRow(vProf, est.tMid, est.vProfile);
      writeProfileRow(rProf, est.tMid, est.rProfile);
    }
  }
  reader.checkFormatTolerance();

  {
    std::ofstream manifest(outputs.manifest);
    guard.add(outputs.manifest);
    manifest << runConfigToKeyValue(cfg).toString();
    manifest << "[result]\n";
    manifest << "package_count = " << outputs.packageCount << "\n";
    manifest << "skipped_lines = " << reader.skippedCount() << "\n";
    manifest << "codebooks_from_cache = " << (fromCache ? "true" : "false") << "\n";
  }
  guard.release();
  return outputs;
}

Trajectory groundTruthTrajectory(const std::filesystem::path& file, ErrorMode mode) {
  const std::vector<GroundTruthSample> samples = loadGroundTruthFile(file);
  if (samples.empty()) throw NotFoundError("ground truth file empty or missing: " + file.string());
  Trajectory traj;
  traj.label = "ground truth";
  traj.samples.reserve(samples.size());
  for (const auto& s : samples) {
    const Eigen::Vector3d euler = quatToEuler(s.quaternion);  // (roll, pan, tilt)
    TrajectorySample t;
    t.t = s.t;
    if (mode == ErrorMode::Rotational3Dof) {
      t.value = {euler[1], euler[2], euler[0]};  // (pan, tilt, roll)
    } else {
      t.value = {s.position[0], s.position[1], euler[0]};  // (x, y, roll)
    }
    traj.samples.push_back(t);
  }
  unwrapTrajectory(traj, {0.0, 0.0, 360.0});
  return traj;
}

EvalOutputs runEvaluation(const EvalOptions& options) {
  Trajectory net = readTrajectoryCsv(options.trajectoryCsv);
  net.label = "network";
  unwrapTrajectory(net, {options.periodH, options.periodV, 360.0});
  const Trajectory gt = groundTruthTrajectory(options.groundTruthFile, options.mode);

  ErrorOptions errOptions;
  errOptions.mode = options.mode;
  errOptions.perAxis = options.perAxis;
  const ErrorReport report =
      evaluateTrajectories(net, gt, options.window, errOptions, options.resampleRateHz);

  std::filesystem::create_directories(options.outDir);
  EvalOutputs out;
  out.result = report;
  out.report = options.outDir / "report.txt";
  out.seriesCsv = options.outDir / "error_series.csv";
  out.overlayPlot = options.outDir / "trajectories.svg";
  out.errorPlot = options.outDir / "error_over_time.svg";
  writeErrorReport(out.report, out.seriesCsv, report, errOptions);

  // Overlay plot: calibrated network output against the ground truth.
  const Trajectory calibrated = applyCalibration(net, report.calibration);
  Trajectory gtShifted = gt;
  for (auto& s : gtShifted.samples) s.value[2] -= report.calibration.rollOffsetGt;

  const char* axisNames[3] = {"axis 0", "axis 1", "roll (deg)"};
  std::vector<PlotPanel> panels;
  for (int axis = 0; axis < 3; ++axis) {
    PlotPanel panel;
    panel.yLabel = axisNames[axis];
    PlotSeries netSeries{"network", {}, {}, "#1f77b4"};
    for (const auto& s : calibrated.samples) {
      netSeries.x.push_back(s.t);
      netSeries.y.push_back(s.value[axis]);
    }
    PlotSeries gtSeries{"ground truth", {}, {}, "#ff7f0e"};
    for (const auto& s : gtShifted.samples) {
      gtSeries.x.push_back(s.t);
      gtSeries.y.push_back(s.value[axis]);
    }
    panel.series = {netSeries, gtSeries};
    panels.push_back(panel);
  }
  writeSvgPlot(out.overlayPlot, "Trajectory overlay (calibrated)", "time (s)", panels);

  PlotPanel errPanel;
  errPanel.yLabel = options.mode == ErrorMode::Planar ? "error (units / deg)" : "angle error (deg)";
  PlotSeries angleSeries{"angle error", {}, {}, "#d62728"};
  for (const auto& e : report.series) {
    angleSeries.x.push_back(e.t);
    angleSeries.y.push_back(e.angleErrorDeg);
  }
  errPanel.series = {angleSeries};
  if (options.mode == ErrorMode::Planar) {
    PlotSeries posSeries{"position error", {}, {}, "#2ca02c"};
    for (const auto& e : report.series) {
      posSeries.x.push_back(e.t);
      posSeries.y.push_back(e.positionError);
    }
    errPanel.series.push_back(posSeries);
  }
  writeSvgPlot(out.errorPlot, "Tracking error over time", "time (s)", {errPanel});
  return out;
}

SynthOutputs runSynth(const SynthParams& params, const std::filesystem::path& outDir) {
  const SynthDataset data = generateDataset(params);
  writeDataset(data, params, outDir);
  SynthOutputs out;
  out.datasetDir = outDir;
  out.manifest = outDir / "manifest.txt";
  out.eventCount = data.events.size();
  return out;
}

}  // namespace hrnvo
