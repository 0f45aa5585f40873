#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <vector>

#include "hrnvo/event_io.hpp"
#include "hrnvo/rng.hpp"

namespace hrnvo {

enum class ShapeKind { RectangleOutline, TriangleOutline, CircleOutline };

struct Shape {
  ShapeKind kind = ShapeKind::RectangleOutline;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();  // canvas px
  double size = 10.0;      // half-extent / circumradius, px
  double angleDeg = 0.0;   // in-plane orientation
};

struct SceneSpec {
  int canvasWidth = 192;
  int canvasHeight = 144;
  int shapeCount = 6;
  std::vector<ShapeKind> kinds = {ShapeKind::RectangleOutline, ShapeKind::TriangleOutline,
                                  ShapeKind::CircleOutline};
  double strokeWidth = 1.6;
  std::uint64_t seed = 1;
  // When non-empty, used verbatim instead of random placement.
  std::vector<Shape> shapes;
};

enum class MotionKind { Sinusoid, Linear, RandomWalk };

// One scalar motion channel. Sinusoid: amplitude*sin(2*pi*t/period + phase).
// Linear: rate*t. RandomWalk: Catmull-Rom through random knots in
// [-amplitude, amplitude] spaced knotInterval apart.
struct AxisMotion {
  MotionKind kind = MotionKind::Sinusoid;
  double amplitude = 0.0;
  double period = 1.0;       // seconds (Sinusoid)
  double phase = 0.0;        // radians (Sinusoid)
  double rate = 0.0;         // units/second (Linear)
  double knotInterval = 1.0; // seconds (RandomWalk)
};

struct TrajectorySpec {
  double durationSeconds = 10.0;
  double sampleRateHz = 1000.0;  // render rate
  AxisMotion x;    // horizontal content shift, px
  AxisMotion y;    // vertical content shift, px
  AxisMotion roll; // content rotation, degrees
};

struct SynthParams {
  SceneSpec scene;
  TrajectorySpec trajectory;
  int cameraWidth = 64;
  int cameraHeight = 48;
  double eventNoisePerFrame = 0.0;   // expected noise events per render interval
  double imuNoiseSigma = 0.0;        // added to every gyro channel
  Eigen::Vector3d imuBias = Eigen::Vector3d::Zero();
  std::uint64_t seed = 7;
  // Remove one scene shape at this time (<0 = never).
  double removeShapeAtTime = -1.0;
  int removeShapeIndex = -1;
};

struct SynthDataset {
  std::vector<RawEvent> events;
  std::vector<ImuSample> imu;
  std::vector<GroundTruthSample> groundTruth;
  GridSpec window;
  std::vector<Shape> shapes;  // resolved scene
};

// Evaluates the content transform (h px, v px, roll deg) and its rate over
// time. All channels are shifted to start at exactly 0, so the transform at
// t=0 is the identity. Random-walk knots are drawn once at construction.
class TrajectorySampler {
 public:
  TrajectorySampler(const TrajectorySpec& spec, std::uint64_t seed);
  Eigen::Vector3d at(double t) const;
  Eigen::Vector3d rateAt(double t) const;  // (dh, dv, droll)/dt

 private:
  TrajectorySpec spec_;
  std::array<std::vector<double>, 3> knots_;
  Eigen::Vector3d origin_ = Eigen::Vector3d::Zero();
};

// Rasterize the scene onto its canvas. 0/1 values.
Eigen::MatrixXd renderScene(const SceneSpec& scene);

// Render the camera window at pose (h, v, rollDeg): the first view
// translated by (h, v) then rotated about the window center.
Eigen::MatrixXd renderView(const Eigen::MatrixXd& canvas, int width, int height, double h,
                           double v, double rollDeg);

// Sample image at R(-angle)*(u - center) + center - (dx, dy), bilinear,
// zero outside. This is the generative warp shared by the synthesizer and
// the registration oracle.
Eigen::MatrixXd warpImage(const Eigen::MatrixXd& image, double dx, double dy, double angleDeg);

// Full dataset in memory: per-interval change events with interpolated
// timestamps, analytic-rate IMU with configured noise, exact ground truth.
SynthDataset generateDataset(const SynthParams& params);

// generateDataset + the three event-io text files and a manifest.
void writeDataset(const SynthDataset& data, const SynthParams& params,
                  const std::filesystem::path& outDir);

struct RegistrationResult {
  double dx = 0.0;
  double dy = 0.0;
  double angleDeg = 0.0;
  double score = 0.0;
};

// Exhaustive overlap maximization of the frame against warped copies of
// the map image over the (shift, shift, angle) grid. Ties resolve to the
// smallest (|dx|, |dy|, |dtheta|) lexicographically. Independent of the
// resonator path; the grids must cover the true transform.
RegistrationResult bruteForceRegister(const BinaryFrame& frame, const Eigen::MatrixXd& mapImage,
                                      double shiftRangePx, double angleRangeDeg, int shiftSteps,
                                      int angleSteps);

}  // namespace hrnvo
