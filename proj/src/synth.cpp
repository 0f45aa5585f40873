#include "hrnvo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "hrnvo/errors.hpp"

namespace hrnvo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double sampleBilinear(const Eigen::MatrixXd& image, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double ax = x - x0;
  const double ay = y - y0;
  double acc = 0.0;
  for (int dy = 0; dy <= 1; ++dy) {
    for (int dx = 0; dx <= 1; ++dx) {
      const int xi = x0 + dx;
      const int yi = y0 + dy;
      if (xi < 0 || xi >= image.cols() || yi < 0 || yi >= image.rows()) continue;
      const double w = (dx ? ax : 1 - ax) * (dy ? ay : 1 - ay);
      acc += w * image(yi, xi);
    }
  }
  return acc;
}

double segmentDistance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                       const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

bool onShapeOutline(const Shape& shape, const Eigen::Vector2d& p, double stroke) {
  const double half = stroke / 2.0;
  const double theta = shape.angleDeg / kDegPerRad;
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const Eigen::Vector2d q = rot.transpose() * (p - shape.center);
  switch (shape.kind) {
    case ShapeKind::CircleOutline:
      return std::abs(q.norm() - shape.size) <= half;
    case ShapeKind::RectangleOutline: {
      const Eigen::Vector2d b(shape.size, 0.65 * shape.size);
      const Eigen::Vector2d d = q.cwiseAbs() - b;
      const double outside = d.cwiseMax(0.0).norm();
      const double inside = std::min(std::max(d.x(), d.y()), 0.0);
      return std::abs(outside + inside) <= half;
    }
    case ShapeKind::TriangleOutline: {
      Eigen::Vector2d v[3];
      for (int i = 0; i < 3; ++i) {
        const double a = kTwoPi * i / 3.0 - std::numbers::pi / 2.0;
        v[i] = shape.size * Eigen::Vector2d(std::cos(a), std::sin(a));
      }
      for (int i = 0; i < 3; ++i)
        if (segmentDistance(q, v[i], v[(i + 1) % 3]) <= half) return true;
      return false;
    }
  }
  return false;
}

std::vector<Shape> resolveShapes(const SceneSpec& scene) {
  if (!scene.shapes.empty()) return scene.shapes;
  Rng rng(scene.seed);
  std::vector<Shape> shapes;
  shapes.reserve(static_cast<std::size_t>(scene.shapeCount));
  for (int i = 0; i < scene.shapeCount; ++i) {
    Shape s;
    s.kind = scene.kinds[rng.uniformInt(scene.kinds.size())];
    s.size = rng.uniform(8.0, 16.0);
    s.angleDeg = rng.uniform(0.0, 360.0);
    const double margin = s.size + scene.strokeWidth;
    s.center = {rng.uniform(margin, scene.canvasWidth - margin),
                rng.uniform(margin, scene.canvasHeight - margin)};
    shapes.push_back(s);
  }
  return shapes;
}

Eigen::MatrixXd renderShapes(const SceneSpec& scene, const std::vector<Shape>& shapes,
                             int skipIndex) {
  Eigen::MatrixXd canvas = Eigen::MatrixXd::Zero(scene.canvasHeight, scene.canvasWidth);
  for (int y = 0; y < scene.canvasHeight; ++y) {
    for (int x = 0; x < scene.canvasWidth; ++x) {
      const Eigen::Vector2d p(x, y);
      for (std::size_t i = 0; i < shapes.size(); ++i) {
        if (static_cast<int>(i) == skipIndex) continue;
        if (onShapeOutline(shapes[i], p, scene.strokeWidth)) {
          canvas(y, x) = 1.0;
          break;
        }
      }
    }
  }
  return canvas;
}

double catmullRom(const std::vector<double>& knots, double pos) {
  const auto n = static_cast<long>(knots.size());
  const long i = std::clamp(static_cast<long>(std::floor(pos)), 0L, n - 2);
  const double s = pos - static_cast<double>(i);
  auto k = [&](long j) { return knots[static_cast<std::size_t>(std::clamp(j, 0L, n - 1))]; };
  const double p0 = k(i - 1), p1 = k(i), p2 = k(i + 1), p3 = k(i + 2);
  return 0.5 * ((2 * p1) + (-p0 + p2) * s + (2 * p0 - 5 * p1 + 4 * p2 - p3) * s * s +
                (-p0 + 3 * p1 - 3 * p2 + p3) * s * s * s);
}

double catmullRomRate(const std::vector<double>& knots, double pos, double knotInterval) {
  const auto n = static_cast<long>(knots.size());
  const long i = std::clamp(static_cast<long>(std::floor(pos)), 0L, n - 2);
  const double s = pos - static_cast<double>(i);
  auto k = [&](long j) { return knots[static_cast<std::size_t>(std::clamp(j, 0L, n - 1))]; };
  const double p0 = k(i - 1), p1 = k(i), p2 = k(i + 1), p3 = k(i + 2);
  const double d = 0.5 * ((-p0 + p2) + 2 * (2 * p0 - 5 * p1 + 4 * p2 - p3) * s +
                          3 * (-p0 + 3 * p1 - 3 * p2 + p3) * s * s);
  return d / knotInterval;
}

}  // namespace

TrajectorySampler::TrajectorySampler(const TrajectorySpec& spec, std::uint64_t seed)
    : spec_(spec) {
  const AxisMotion* axes[3] = {&spec_.x, &spec_.y, &spec_.roll};
  for (int c = 0; c < 3; ++c) {
    if (axes[c]->kind != MotionKind::RandomWalk) continue;
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1));
    const auto count =
        static_cast<std::size_t>(std::ceil(spec_.durationSeconds / axes[c]->knotInterval)) + 3;
    knots_[static_cast<std::size_t>(c)].resize(count);
    for (auto& k : knots_[static_cast<std::size_t>(c)])
      k = rng.uniform(-axes[c]->amplitude, axes[c]->amplitude);
  }
  origin_.setZero();
  origin_ = at(0.0);
}

Eigen::Vector3d TrajectorySampler::at(double t) const {
  const AxisMotion* axes[3] = {&spec_.x, &spec_.y, &spec_.roll};
  Eigen::Vector3d out;
  for (int c = 0; c < 3; ++c) {
    const AxisMotion& m = *axes[c];
    switch (m.kind) {
      case MotionKind::Sinusoid:
        out[c] = m.amplitude * std::sin(kTwoPi * t / m.period + m.phase);
        break;
      case MotionKind::Linear:
        out[c] = m.rate * t;
        break;
      case MotionKind::RandomWalk:
        out[c] = catmullRom(knots_[static_cast<std::size_t>(c)], t / m.knotInterval);
        break;
    }
  }
  return out - origin_;
}

Eigen::Vector3d TrajectorySampler::rateAt(double t) const {
  const AxisMotion* axes[3] = {&spec_.x, &spec_.y, &spec_.roll};
  Eigen::Vector3d out;
  for (int c = 0; c < 3; ++c) {
    const AxisMotion& m = *axes[c];
    switch (m.kind) {
      case MotionKind::Sinusoid:
        out[c] = m.amplitude * kTwoPi / m.period * std::cos(kTwoPi * t / m.period + m.phase);
        break;
      case MotionKind::Linear:
        out[c] = m.rate;
        break;
      case MotionKind::RandomWalk:
        out[c] = catmullRomRate(knots_[static_cast<std::size_t>(c)], t / m.knotInterval,
                                m.knotInterval);
        break;
    }
  }
  return out;
}

Eigen::MatrixXd renderScene(const SceneSpec& scene) {
  return renderShapes(scene, resolveShapes(scene), -1);
}

Eigen::MatrixXd renderView(const Eigen::MatrixXd& canvas, int width, int height, double h,
                           double v, double rollDeg) {
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  const double offX = (canvas.cols() - width) / 2.0;
  const double offY = (canvas.rows() - height) / 2.0;
  const double theta = rollDeg / kDegPerRad;
  const double c = std::cos(-theta), s = std::sin(-theta);
  Eigen::MatrixXd view(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double rx = x - cx;
      const double ry = y - cy;
      const double sx = c * rx - s * ry + cx - h + offX;
      const double sy = s * rx + c * ry + cy - v + offY;
      view(y, x) = sampleBilinear(canvas, sx, sy) >= 0.5 ? 1.0 : 0.0;
    }
  }
  return view;
}

Eigen::MatrixXd warpImage(const Eigen::MatrixXd& image, double dx, double dy, double angleDeg) {
  const double cx = image.cols() / 2.0;
  const double cy = image.rows() / 2.0;
  const double theta = angleDeg / kDegPerRad;
  const double c = std::cos(-theta), s = std::sin(-theta);
  Eigen::MatrixXd out(image.rows(), image.cols());
  for (int y = 0; y < image.rows(); ++y) {
    for (int x = 0; x < image.cols(); ++x) {
      const double rx = x - cx;
      const double ry = y - cy;
      out(y, x) = sampleBilinear(image, c * rx - s * ry + cx - dx, s * rx + c * ry + cy - dy);
    }
  }
  return out;
}

SynthDataset generateDataset(const SynthParams& params) {
  const SceneSpec& scene = params.scene;
  SynthDataset data;
  data.window = {params.cameraWidth, params.cameraHeight};
  data.shapes = resolveShapes(scene);

  const Eigen::MatrixXd canvasFull = renderShapes(scene, data.shapes, -1);
  Eigen::MatrixXd canvasRemoved;
  const bool removal = params.removeShapeAtTime >= 0.0 && params.removeShapeIndex >= 0 &&
                       params.removeShapeIndex < static_cast<int>(data.shapes.size());
  if (removal) canvasRemoved = renderShapes(scene, data.shapes, params.removeShapeIndex);

  const TrajectorySampler sampler(params.trajectory, params.seed);
  Rng rng(params.seed);
  const double dt = 1.0 / params.trajectory.sampleRateHz;
  const auto steps = static_cast<long>(std::ceil(params.trajectory.durationSeconds / dt));

  const double cx = params.cameraWidth / 2.0;
  const double cy = params.cameraHeight / 2.0;
  const double offX = (scene.canvasWidth - params.cameraWidth) / 2.0;
  const double offY = (scene.canvasHeight - params.cameraHeight) / 2.0;

  auto checkInside = [&](const Eigen::Vector3d& pose) {
    const double theta = pose[2] / kDegPerRad;
    const double c = std::cos(-theta), s = std::sin(-theta);
    const double corners[4][2] = {{0, 0},
                                  {static_cast<double>(params.cameraWidth - 1), 0},
                                  {0, static_cast<double>(params.cameraHeight - 1)},
                                  {static_cast<double>(params.cameraWidth - 1),
                                   static_cast<double>(params.cameraHeight - 1)}};
    for (const auto& corner : corners) {
      const double rx = corner[0] - cx;
      const double ry = corner[1] - cy;
      const double sx = c * rx - s * ry + cx - pose[0] + offX;
      const double sy = s * rx + c * ry + cy - pose[1] + offY;
      if (sx < 0 || sx > scene.canvasWidth - 1 || sy < 0 || sy > scene.canvasHeight - 1)
        throw std::invalid_argument("generateDataset: camera window leaves the canvas");
    }
  };

  auto emitImuAndGt = [&](double t, const Eigen::Vector3d& pose) {
    ImuSample imu;
    imu.t = t;
    const Eigen::Vector3d rate = sampler.rateAt(t);
    // Channel convention: gx = tilt px/s, gy = pan px/s, gz = roll rad/s.
    imu.angularVelocity[0] = rate[1] + params.imuBias[0] + params.imuNoiseSigma * rng.gaussian();
    imu.angularVelocity[1] = rate[0] + params.imuBias[1] + params.imuNoiseSigma * rng.gaussian();
    imu.angularVelocity[2] = (rate[2] + params.imuBias[2] + params.imuNoiseSigma * rng.gaussian()) /
                             kDegPerRad;
    data.imu.push_back(imu);

    GroundTruthSample gt;
    gt.t = t;
    gt.position = {pose[0], pose[1], 0.0};
    gt.quaternion = eulerToQuat(pose[2], 0.0, 0.0);
    data.groundTruth.push_back(gt);
  };

  Eigen::Vector3d pose = sampler.at(0.0);
  checkInside(pose);
  Eigen::MatrixXd prev = renderView(canvasFull, params.cameraWidth, params.cameraHeight, pose[0],
                                    pose[1], pose[2]);
  emitImuAndGt(0.0, pose);

  std::vector<RawEvent> interval;
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    pose = sampler.at(t);
    checkInside(pose);
    const Eigen::MatrixXd& canvas =
        (removal && t >= params.removeShapeAtTime) ? canvasRemoved : canvasFull;
    const Eigen::MatrixXd cur =
        renderView(canvas, params.cameraWidth, params.cameraHeight, pose[0], pose[1], pose[2]);

    interval.clear();
    for (int y = 0; y < params.cameraHeight; ++y) {
      for (int x = 0; x < params.cameraWidth; ++x) {
        if (cur(y, x) == prev(y, x)) continue;
        RawEvent ev;
        ev.t = t - dt + dt * rng.uniform();
        ev.x = x;
        ev.y = y;
        ev.polarity = cur(y, x) > prev(y, x) ? 1 : 0;
        interval.push_back(ev);
      }
    }
    const int noise = rng.poisson(params.eventNoisePerFrame);
    for (int i = 0; i < noise; ++i) {
      RawEvent ev;
      ev.t = t - dt + dt * rng.uniform();
      ev.x = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(params.cameraWidth)));
      ev.y = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(params.cameraHeight)));
      ev.polarity = static_cast<int>(rng.uniformInt(2));
      interval.push_back(ev);
    }
    std::sort(interval.begin(), interval.end(), [](const RawEvent& a, const RawEvent& b) {
      return std::tie(a.t, a.y, a.x) < std::tie(b.t, b.y, b.x);
    });
    data.events.insert(data.events.end(), interval.begin(), interval.end());

    emitImuAndGt(t, pose);
    prev = cur;
  }
  return data;
}

void writeDataset(const SynthDataset& data, const SynthParams& params,
                  const std::filesystem::path& outDir) {
  std::filesystem::create_directories(outDir);
  {
    std::ofstream out(outDir / "events.txt");
    out.precision(9);
    out << std::fixed;
    for (const auto& ev : data.events)
      out << ev.t << " " << ev.x << " " << ev.y << " " << ev.polarity << "\n";
  }
  {
    std::ofstream out(outDir / "imu.txt");
    out.precision(9);
    out << std::fixed;
    for (const auto& s : data.imu)
      out << s.t << " " << s.linearAcceleration[0] << " " << s.linearAcceleration[1] << " "
          << s.linearAcceleration[2] << " " << s.angularVelocity[0] << " "
          << s.angularVelocity[1] << " " << s.angularVelocity[2] << "\n";
  }
  {
    std::ofstream out(outDir / "groundtruth.txt");
    out.precision(9);
    out << std::fixed;
    for (const auto& s : data.groundTruth)
      out << s.t << " " << s.position[0] << " " << s.position[1] << " " << s.position[2] << " "
          << s.quaternion[1] << " " << s.quaternion[2] << " " << s.quaternion[3] << " "
          << s.quaternion[0] << "\n";
  }
  {
    std::ofstream out(outDir / "manifest.txt");
    out << "generator = synth\n";
    out << "seed = " << params.seed << "\n";
    out << "camera_width = " << params.cameraWidth << "\n";
    out << "camera_height = " << params.cameraHeight << "\n";
    out << "canvas_width = " << params.scene.canvasWidth << "\n";
    out << "canvas_height = " << params.scene.canvasHeight << "\n";
    out << "scene_seed = " << params.scene.seed << "\n";
    out << "shape_count = " << data.shapes.size() << "\n";
    out << "duration_seconds = " << params.trajectory.durationSeconds << "\n";
    out << "sample_rate_hz = " << params.trajectory.sampleRateHz << "\n";
    out << "event_noise_per_frame = " << params.eventNoisePerFrame << "\n";
    out << "imu_noise_sigma = " << params.imuNoiseSigma << "\n";
    out << "events = " << data.events.size() << "\n";
    out << "remove_shape_at_time = " << params.removeShapeAtTime << "\n";
    out << "remove_shape_index = " << params.removeShapeIndex << "\n";
  }
}

RegistrationResult bruteForceRegister(const BinaryFrame& frame, const Eigen::MatrixXd& mapImage,
                                      double shiftRangePx, double angleRangeDeg, int shiftSteps,
                                      int angleSteps) {
  if (frame.bits.sum() == 0.0) throw DegenerateInput("bruteForceRegister: empty frame");
  if (shiftSteps < 1 || angleSteps < 1)
    throw std::invalid_argument("bruteForceRegister: steps must be >= 1");

  auto axisValues = [](double range, int steps) {
    std::vector<double> values(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
      values[static_cast<std::size_t>(i)] =
          steps == 1 ? 0.0 : -range + 2.0 * range * i / (steps - 1);
    // Smallest magnitude first so the running argmax lands on the spec's
    // tie-break without a second pass.
    std::sort(values.begin(), values.end(), [](double a, double b) {
      return std::make_pair(std::abs(a), a) < std::make_pair(std::abs(b), b);
    });
    return values;
  };
  const std::vector<double> shifts = axisValues(shiftRangePx, shiftSteps);
  const std::vector<double> angles = axisValues(angleRangeDeg, angleSteps);

  std::vector<Eigen::Vector2i> setPixels;
  for (int y = 0; y < frame.bits.rows(); ++y)
    for (int x = 0; x < frame.bits.cols(); ++x)
      if (frame.bits(y, x) > 0.5) setPixels.push_back({x, y});

  const double cx = frame.bits.cols() / 2.0;
  const double cy = frame.bits.rows() / 2.0;

  RegistrationResult best;
  best.score = -1.0;
  for (double dx : shifts) {
    for (double dy : shifts) {
      for (double angle : angles) {
        const double theta = angle / kDegPerRad;
        const double c = std::cos(-theta), s = std::sin(-theta);
        double score = 0.0;
        for (const auto& px : setPixels) {
          const double rx = px[0] - cx;
          const double ry = px[1] - cy;
          score += sampleBilinear(mapImage, c * rx - s * ry + cx - dx, s * rx + c * ry + cy - dy);
        }
        if (score > best.score) best = {dx, dy, angle, score};
      }
    }
  }
  return best;
}

}  // namespace hrnvo
