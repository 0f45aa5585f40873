#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "hrnvo/errors.hpp"

namespace hrnvo {

// Timestamped triple: (h px, v px, r deg) for network output,
// (pan, tilt, roll) deg or (x m, y m, roll deg) for ground truth.
struct TrajectorySample {
  double t = 0.0;
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::string label;

  double beginTime() const { return samples.front().t; }
  double endTime() const { return samples.back().t; }
  // Linear interpolation, clamped outside the range.
  Eigen::Vector3d at(double t) const;
};

// Uniform resampling at the given rate over the trajectory's own range.
Trajectory resample(const Trajectory& traj, double rateHz);

struct LagResult {
  double lagSeconds = 0.0;      // evaluate b at (t + lag) to align with a
  double peakCorrelation = 0.0; // signed normalized correlation at the peak
  bool antiCorrelated = false;  // peak found on |corr| with negative sign
};

// Lag between the third components (roll) of two trajectories resampled to
// the same rate, from normalized cross-correlation of the mean-removed
// traces. Search range is +/- maxLagSeconds.
LagResult estimateLag(const Trajectory& a, const Trajectory& b, double maxLagSeconds = 1.0);

struct SimilarityTransform2d {
  double scale = 1.0;
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();  // det = +1
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();

  Eigen::Vector2d apply(const Eigen::Vector2d& p) const {
    return scale * (rotation * p) + translation;
  }
};

// Least-squares similarity transform dst ~ s*R*src + t with the
// reflection-correction step enforcing det(R) = +1.
SimilarityTransform2d umeyama2d(const Eigen::Matrix2Xd& src, const Eigen::Matrix2Xd& dst);

enum class WindowMode { LastTenSecondsOfTrain, Split7030, Explicit };

struct WindowSpec {
  WindowMode mode = WindowMode::LastTenSecondsOfTrain;
  double explicitBegin = 0.0;  // absolute seconds, Explicit mode only
  double explicitEnd = 0.0;
};

struct CalibrationParams {
  double lagSeconds = 0.0;
  SimilarityTransform2d planeFit;  // (h, v) -> first two ground-truth axes
  double rollOffsetNet = 0.0;      // subtracted so roll starts at 0
  double rollOffsetGt = 0.0;
  double windowBegin = 0.0;  // absolute time range used for fitting
  double windowEnd = 0.0;
  bool rollAntiCorrelated = false;
};

// Lag alignment plus Umeyama fit of the (h, v) trace onto the first two
// ground-truth components, fitted inside the window only. Roll is shifted
// to start at 0 on both sides, never scaled.
CalibrationParams calibrate(const Trajectory& net, const Trajectory& gt,
                            const WindowSpec& window, double resampleRateHz = 400.0);

// Maps the network trajectory through the calibration: timestamps shifted
// by the lag, (h, v) through the plane fit, roll offset removed.
Trajectory applyCalibration(const Trajectory& net, const CalibrationParams& params);

enum class ErrorMode { Rotational3Dof, Planar };

struct ErrorOptions {
  ErrorMode mode = ErrorMode::Rotational3Dof;
  // Report per-axis absolute differences instead of the geodesic angle.
  bool perAxis = false;
};

struct ErrorSample {
  double t = 0.0;
  double angleErrorDeg = 0.0;
  double positionError = 0.0;  // planar mode only
};

struct ErrorReport {
  double medianAngleErrorDeg = 0.0;
  double medianPositionError = 0.0;
  std::vector<ErrorSample> series;
  CalibrationParams calibration;
};

// Per-sample error between a calibrated network trajectory and the ground
// truth at the network timestamps. Rotational mode composes orientations
// from (pan, tilt, roll) and takes the geodesic angle; planar mode reports
// Euclidean (x, y) distance plus absolute roll difference.
ErrorReport computeError(const Trajectory& netCalibrated, const Trajectory& gt,
                         const ErrorOptions& options);

// Full pipeline: resample -> lag -> calibrate on the window -> error on
// the remainder of the overlap (fit data excluded from the report).
ErrorReport evaluateTrajectories(const Trajectory& net, const Trajectory& gt,
                                 const WindowSpec& window, const ErrorOptions& options,
                                 double resampleRateHz = 400.0);

// "key: value" report plus "t,angle_error_deg[,pos_error]" series CSV.
void writeErrorReport(const std::filesystem::path& reportFile,
                      const std::filesystem::path& seriesCsv, const ErrorReport& report,
                      const ErrorOptions& options);

// Composes R = Rz(roll) * Ry(pan) * Rx(tilt), angles in degrees.
Eigen::Matrix3d rotationFromPanTiltRoll(double panDeg, double tiltDeg, double rollDeg);

// Geodesic angle between two rotations, degrees.
double rotationAngleDeg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

// Trajectory CSV ("t,h,v,r" header) reader/writer used by the CLI.
Trajectory readTrajectoryCsv(const std::filesystem::path& file);
void writeTrajectoryCsv(const std::filesystem::path& file, const Trajectory& traj);

// Unwrap each component of a trajectory with the given periods (0 = no
// unwrap for that component).
void unwrapTrajectory(Trajectory& traj, const Eigen::Vector3d& periods);

}  // namespace hrnvo
