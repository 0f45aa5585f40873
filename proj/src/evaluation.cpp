#include "hrnvo/evaluation.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

#include "hrnvo/event_io.hpp"

namespace hrnvo {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

}  // namespace

Eigen::Vector3d Trajectory::at(double t) const {
  if (samples.empty()) throw std::invalid_argument("Trajectory::at: empty trajectory");
  if (t <= samples.front().t) return samples.front().value;
  if (t >= samples.back().t) return samples.back().value;
  const auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const TrajectorySample& s, double v) { return s.t < v; });
  const auto hi = static_cast<std::size_t>(it - samples.begin());
  const auto& a = samples[hi - 1];
  const auto& b = samples[hi];
  const double span = b.t - a.t;
  const double alpha = span > 0 ? (t - a.t) / span : 0.0;
  return (1 - alpha) * a.value + alpha * b.value;
}

Trajectory resample(const Trajectory& traj, double rateHz) {
  if (traj.samples.size() < 2) throw std::invalid_argument("resample: need at least 2 samples");
  if (!(rateHz > 0)) throw std::invalid_argument("resample: rate must be positive");
  Trajectory out;
  out.label = traj.label;
  const double t0 = traj.beginTime();
  const double t1 = traj.endTime();
  const double dt = 1.0 / rateHz;
  const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / dt)) + 1;
  out.samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    out.samples.push_back({t, traj.at(t)});
  }
  return out;
}

LagResult estimateLag(const Trajectory& a, const Trajectory& b, double maxLagSeconds) {
  if (a.samples.size() < 2 || b.samples.size() < 2)
    throw std::invalid_argument("estimateLag: trajectories too short");
  const double dtA = a.samples[1].t - a.samples[0].t;
  const double dtB = b.samples[1].t - b.samples[0].t;
  if (std::abs(dtA - dtB) > 1e-9 * std::max(dtA, dtB))
    throw std::invalid_argument("estimateLag: trajectories must share the sampling rate");

  auto rollTrace = [](const Trajectory& t) {
    std::vector<double> roll(t.samples.size());
    for (std::size_t i = 0; i < roll.size(); ++i) roll[i] = t.samples[i].value[2];
    const double mean = std::accumulate(roll.begin(), roll.end(), 0.0) / roll.size();
    for (double& v : roll) v -= mean;
    return roll;
  };
  const std::vector<double> ra = rollTrace(a);
  const std::vector<double> rb = rollTrace(b);

  auto variance = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return s;
  };
  if (variance(ra) <= 0.0 || variance(rb) <= 0.0)
    throw DegenerateInput("estimateLag: zero-variance roll trace");

  // b starts offsetTicks samples after a on the common clock.
  const double offsetSeconds = b.samples.front().t - a.samples.front().t;
  const long offsetTicks = std::lround(offsetSeconds / dtA);
  const long maxShift = std::lround(maxLagSeconds / dtA);

  double bestAbs = -1.0;
  double bestCorr = 0.0;
  long bestShift = 0;
  for (long shift = -maxShift; shift <= maxShift; ++shift) {
    // Correlate a[i] with b evaluated at a-time i + shift ticks.
    double dot = 0, na = 0, nb = 0;
    long count = 0;
    for (long i = 0; i < static_cast<long>(ra.size()); ++i) {
      const long j = i + shift - offsetTicks;
      if (j < 0 || j >= static_cast<long>(rb.size())) continue;
      dot += ra[i] * rb[j];
      na += ra[i] * ra[i];
      nb += rb[j] * rb[j];
      ++count;
    }
    if (count < 8 || na <= 0 || nb <= 0) continue;
    const double corr = dot / std::sqrt(na * nb);
    if (std::abs(corr) > bestAbs) {
      bestAbs = std::abs(corr);
      bestCorr = corr;
      bestShift = shift;
    }
  }
  if (bestAbs < 0) throw DegenerateInput("estimateLag: no overlap within the lag range");

  LagResult res;
  res.lagSeconds = static_cast<double>(bestShift) * dtA;
  res.peakCorrelation = bestCorr;
  res.antiCorrelated = bestCorr < 0;
  return res;
}

SimilarityTransform2d umeyama2d(const Eigen::Matrix2Xd& src, const Eigen::Matrix2Xd& dst) {
  if (src.cols() != dst.cols() || src.cols() < 2)
    throw std::invalid_argument("umeyama2d: need matching point sets with >= 2 points");
  const double n = static_cast<double>(src.cols());
  const Eigen::Vector2d muSrc = src.rowwise().mean();
  const Eigen::Vector2d muDst = dst.rowwise().mean();
  const Eigen::Matrix2Xd cs = src.colwise() - muSrc;
  const Eigen::Matrix2Xd cd = dst.colwise() - muDst;
  const double varSrc = cs.squaredNorm() / n;
  if (varSrc <= 0.0) throw DegenerateInput("umeyama2d: rank-deficient source points");
  const Eigen::Matrix2d sigma = cd * cs.transpose() / n;

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector2d s = Eigen::Vector2d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0) s[1] = -1;

  SimilarityTransform2d out;
  out.rotation = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  out.scale = svd.singularValues().dot(s) / varSrc;
  out.translation = muDst - out.scale * out.rotation * muSrc;
  return out;
}

namespace {

struct Overlap {
  double begin = 0.0;
  double end = 0.0;
};

Overlap overlapOf(const Trajectory& a, const Trajectory& b) {
  Overlap o{std::max(a.beginTime(), b.beginTime()), std::min(a.endTime(), b.endTime())};
  if (o.end <= o.begin) throw NoOverlapError("trajectories do not overlap in time");
  return o;
}

Overlap resolveWindow(const WindowSpec& spec, const Overlap& overlap) {
  switch (spec.mode) {
    case WindowMode::Split7030: {
      // Calibrate on the first 70%, evaluate on the rest.
      return {overlap.begin, overlap.begin + 0.7 * (overlap.end - overlap.begin)};
    }
    case WindowMode::LastTenSecondsOfTrain: {
      const double trainEnd = overlap.begin + 0.7 * (overlap.end - overlap.begin);
      return {std::max(overlap.begin, trainEnd - 10.0), trainEnd};
    }
    case WindowMode::Explicit:
      return {spec.explicitBegin, spec.explicitEnd};
  }
  throw std::logic_error("unknown window mode");
}

}  // namespace

CalibrationParams calibrate(const Trajectory& net, const Trajectory& gt,
                            const WindowSpec& window, double resampleRateHz) {
  const Trajectory net400 = resample(net, resampleRateHz);
  const Trajectory gt400 = resample(gt, resampleRateHz);
  const LagResult lag = estimateLag(gt400, net400);

  CalibrationParams params;
  params.lagSeconds = lag.lagSeconds;
  params.rollAntiCorrelated = lag.antiCorrelated;

  // Lag-corrected network time axis: net value at gt time t is net.at(t + lag).
  Trajectory netAligned;
  netAligned.label = net.label;
  netAligned.samples.reserve(net.samples.size());
  for (const auto& s : net.samples)
    netAligned.samples.push_back({s.t - params.lagSeconds, s.value});

  const Overlap overlap = overlapOf(netAligned, gt);
  const Overlap win = resolveWindow(window, overlap);
  if (win.end <= win.begin || win.end <= overlap.begin || win.begin >= overlap.end)
    throw std::invalid_argument("calibrate: empty window overlap");
  params.windowBegin = win.begin;
  params.windowEnd = win.end;

  // Sample the fit pairs on a uniform grid inside the window.
  const double dt = 1.0 / resampleRateHz;
  std::vector<Eigen::Vector2d> srcPts, dstPts;
  for (double t = win.begin; t <= win.end; t += dt) {
    const Eigen::Vector3d nv = netAligned.at(t);
    const Eigen::Vector3d gv = gt.at(t);
    srcPts.push_back(nv.head<2>());
    dstPts.push_back(gv.head<2>());
  }
  Eigen::Matrix2Xd src(2, static_cast<Eigen::Index>(srcPts.size()));
  Eigen::Matrix2Xd dst(2, static_cast<Eigen::Index>(dstPts.size()));
  for (Eigen::Index i = 0; i < src.cols(); ++i) {
    src.col(i) = srcPts[static_cast<std::size_t>(i)];
    dst.col(i) = dstPts[static_cast<std::size_t>(i)];
  }
  params.planeFit = umeyama2d(src, dst);

  // Roll starts at 0 on both sides; it is absolute, never scaled.
  params.rollOffsetNet = netAligned.at(overlap.begin)[2];
  params.rollOffsetGt = gt.at(overlap.begin)[2];
  return params;
}

Trajectory applyCalibration(const Trajectory& net, const CalibrationParams& params) {
  Trajectory out;
  out.label = net.label + " (calibrated)";
  out.samples.reserve(net.samples.size());
  for (const auto& s : net.samples) {
    TrajectorySample c;
    c.t = s.t - params.lagSeconds;
    const Eigen::Vector2d plane = params.planeFit.apply(s.value.head<2>());
    c.value = {plane[0], plane[1], s.value[2] - params.rollOffsetNet};
    out.samples.push_back(c);
  }
  return out;
}

Eigen::Matrix3d rotationFromPanTiltRoll(double panDeg, double tiltDeg, double rollDeg) {
  const double p = panDeg / kDegPerRad;
  const double t = tiltDeg / kDegPerRad;
  const double r = rollDeg / kDegPerRad;
  return (Eigen::AngleAxisd(r, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(p, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(t, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

double rotationAngleDeg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * kDegPerRad;
}

ErrorReport computeError(const Trajectory& netCalibrated, const Trajectory& gt,
                         const ErrorOptions& options) {
  const Overlap overlap = overlapOf(netCalibrated, gt);
  ErrorReport report;
  std::vector<double> angleErrors, posErrors;
  for (const auto& s : netCalibrated.samples) {
    if (s.t < overlap.begin || s.t > overlap.end) continue;
    const Eigen::Vector3d g = gt.at(s.t);
    ErrorSample e;
    e.t = s.t;
    if (options.mode == ErrorMode::Rotational3Dof) {
      if (options.perAxis) {
        e.angleErrorDeg = ((s.value - g).cwiseAbs()).maxCoeff();
      } else {
        const Eigen::Matrix3d rn = rotationFromPanTiltRoll(s.value[0], s.value[1], s.value[2]);
        const Eigen::Matrix3d rg = rotationFromPanTiltRoll(g[0], g[1], g[2]);
        e.angleErrorDeg = rotationAngleDeg(rn, rg);
      }
    } else {
      e.positionError = (s.value.head<2>() - g.head<2>()).norm();
      e.angleErrorDeg = std::abs(s.value[2] - g[2]);
      posErrors.push_back(e.positionError);
    }
    angleErrors.push_back(e.angleErrorDeg);
    report.series.push_back(e);
  }
  if (report.series.empty()) throw std::invalid_argument("computeError: no overlapping samples");
  report.medianAngleErrorDeg = median(angleErrors);
  report.medianPositionError = median(posErrors);
  return report;
}

ErrorReport evaluateTrajectories(const Trajectory& net, const Trajectory& gt,
                                 const WindowSpec& window, const ErrorOptions& options,
                                 double resampleRateHz) {
  const CalibrationParams params = calibrate(net, gt, window, resampleRateHz);
  Trajectory calibrated = applyCalibration(net, params);

  // Ground-truth roll referenced to its own start, matching the network.
  Trajectory gtShifted = gt;
  for (auto& s : gtShifted.samples) s.value[2] -= params.rollOffsetGt;

  // Evaluate outside the calibration window only.
  Trajectory evalTraj;
  evalTraj.label = calibrated.label;
  for (const auto& s : calibrated.samples)
    if (s.t < params.windowBegin || s.t > params.windowEnd) evalTraj.samples.push_back(s);
  if (evalTraj.samples.size() < 2)
    throw std::invalid_argument("evaluateTrajectories: no data outside the calibration window");

  ErrorReport report = computeError(evalTraj, gtShifted, options);
  report.calibration = params;
  return report;
}

void writeErrorReport(const std::filesystem::path& reportFile,
                      const std::filesystem::path& seriesCsv, const ErrorReport& report,
                      const ErrorOptions& options) {
  {
    std::ofstream out(reportFile);
    out << "mode: " << (options.mode == ErrorMode::Rotational3Dof ? "rot3" : "planar") << "\n";
    out << "median_angle_error_deg: " << report.medianAngleErrorDeg << "\n";
    if (options.mode == ErrorMode::Planar)
      out << "median_position_error: " << report.medianPositionError << "\n";
    out << "samples: " << report.series.size() << "\n";
    out << "lag_seconds: " << report.calibration.lagSeconds << "\n";
    out << "fit_scale: " << report.calibration.planeFit.scale << "\n";
    out << "fit_rotation_deg: "
        << std::atan2(report.calibration.planeFit.rotation(1, 0),
                      report.calibration.planeFit.rotation(0, 0)) * kDegPerRad
        << "\n";
    out << "fit_translation: " << report.calibration.planeFit.translation[0] << " "
        << report.calibration.planeFit.translation[1] << "\n";
    out << "roll_offset_net_deg: " << report.calibration.rollOffsetNet << "\n";
    out << "roll_offset_gt_deg: " << report.calibration.rollOffsetGt << "\n";
    out << "window_begin: " << report.calibration.windowBegin << "\n";
    out << "window_end: " << report.calibration.windowEnd << "\n";
    out << "roll_anti_correlated: " << (report.calibration.rollAntiCorrelated ? 1 : 0) << "\n";
  }
  {
    std::ofstream out(seriesCsv);
    out << (options.mode == ErrorMode::Planar ? "t,angle_error_deg,pos_error"
                                              : "t,angle_error_deg")
        << "\n";
    for (const auto& e : report.series) {
      out << e.t << "," << e.angleErrorDeg;
      if (options.mode == ErrorMode::Planar) out << "," << e.positionError;
      out << "\n";
    }
  }
}

Trajectory readTrajectoryCsv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw NotFoundError("trajectory csv not found: " + file.string());
  Trajectory traj;
  traj.label = file.stem().string();
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("t,", 0) == 0) continue;  // header
    }
    TrajectorySample s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &s.t, &s.value[0], &s.value[1],
                    &s.value[2]) != 4)
      throw FormatError("bad trajectory row: " + line);
    traj.samples.push_back(s);
  }
  if (traj.samples.empty()) throw FormatError("empty trajectory csv: " + file.string());
  return traj;
}

void writeTrajectoryCsv(const std::filesystem::path& file, const Trajectory& traj) {
  std::ofstream out(file);
  out << "t,h,v,r\n";
  for (const auto& s : traj.samples)
    out << s.t << "," << s.value[0] << "," << s.value[1] << "," << s.value[2] << "\n";
}

void unwrapTrajectory(Trajectory& traj, const Eigen::Vector3d& periods) {
  for (int c = 0; c < 3; ++c) {
    if (periods[c] <= 0) continue;
    std::vector<double> series(traj.samples.size());
    for (std::size_t i = 0; i < series.size(); ++i) series[i] = traj.samples[i].value[c];
    unwrapInPlace(series, periods[c]);
    for (std::size_t i = 0; i < series.size(); ++i) traj.samples[i].value[c] = series[i];
  }
}

}  // namespace hrnvo
