#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hrnvo/codebooks.hpp"
#include "hrnvo/errors.hpp"

namespace hrnvo {

struct RawEvent {
  double t = 0.0;  // seconds
  int x = 0;
  int y = 0;
  int polarity = 0;
};

struct ImuSample {
  double t = 0.0;
  Eigen::Vector3d linearAcceleration = Eigen::Vector3d::Zero();  // m/s^2
  Eigen::Vector3d angularVelocity = Eigen::Vector3d::Zero();     // rad/s
};

struct GroundTruthSample {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector4d quaternion = {1, 0, 0, 0};  // (w, x, y, z), unit norm
};

// One event package binarized onto the processing grid.
struct BinaryFrame {
  GridSpec grid;
  Eigen::MatrixXd bits;  // height x width, entries in {0, 1}
  double tMid = 0.0;     // midpoint of first/last event timestamps
};

struct SensorDims {
  int width = 0;
  int height = 0;
};

struct PreprocessParams {
  SensorDims sensor;
  GridSpec target;
  int packageSize = 2000;
  int binarizeThreshold = 0;  // pixels with count > threshold become 1
};

// Streaming "t x y p" parser. Lines starting with '#' are ignored;
// malformed or out-of-range lines are skipped and counted.
class EventFileReader {
 public:
  EventFileReader(const std::filesystem::path& file, SensorDims sensor);

  std::optional<RawEvent> next();
  std::size_t parsedCount() const { return parsed_; }
  std::size_t skippedCount() const { return skipped_; }
  // More than 1% bad lines is a format error; call once the stream is done.
  void checkFormatTolerance() const;

 private:
  std::ifstream in_;
  SensorDims sensor_;
  std::size_t parsed_ = 0;
  std::size_t skipped_ = 0;
};

// Accumulates fixed-count event packages and binarizes them onto the
// target grid. Trailing partial packages are dropped.
class EventPackager {
 public:
  explicit EventPackager(const PreprocessParams& params);

  // Feed one event; returns a frame every packageSize events.
  std::optional<BinaryFrame> push(const RawEvent& ev);

 private:
  PreprocessParams params_;
  Eigen::MatrixXd counts_;
  int filled_ = 0;
  double tFirst_ = 0.0;
  double tLast_ = 0.0;
};

struct Dataset {
  std::vector<RawEvent> events;
  std::vector<ImuSample> imu;
  std::vector<GroundTruthSample> groundTruth;
  std::size_t skippedLines = 0;
};

// Loads events.txt (required), imu.txt and groundtruth.txt (optional) from
// a dataset directory in the text-v1 layout. Eager; intended for tests and
// evaluation. The tracking CLI streams events instead.
Dataset loadDataset(const std::filesystem::path& directory, SensorDims sensor);

std::vector<ImuSample> loadImuFile(const std::filesystem::path& file);
std::vector<GroundTruthSample> loadGroundTruthFile(const std::filesystem::path& file);

// Convenience for tests: run the packager over a whole event vector.
std::vector<BinaryFrame> preprocess(const std::vector<RawEvent>& events,
                                    const PreprocessParams& params);

// Intrinsic Z-Y-X decomposition of a unit quaternion into degrees:
// roll about the optical (z) axis applied first, then pan (y), then tilt (x).
// The quaternion is renormalized; |q| must be within 1e-3 of 1.
Eigen::Vector3d quatToEuler(const Eigen::Vector4d& quaternion);

// Inverse of quatToEuler; angles in degrees.
Eigen::Vector4d eulerToQuat(double rollDeg, double panDeg, double tiltDeg);

// Linear interpolation with clamping outside the sample range. Samples
// must be sorted by timestamp.
ImuSample interpolateAt(const std::vector<ImuSample>& samples, double t);
GroundTruthSample interpolateAt(const std::vector<GroundTruthSample>& samples, double t);

// Remove 'period' jumps from a sampled angle/shift series, in place.
void unwrapInPlace(std::vector<double>& series, double period);

}  // namespace hrnvo
