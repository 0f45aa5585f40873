#include "hrnvo/event_io.hpp"

#include <algorithm>
#include <cfenv>
#include <charconv>
#include <cmath>
#include <numbers>

namespace hrnvo {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Splits on spaces/tabs and parses every field as double. Returns false on
// any parse failure or trailing garbage.
bool parseFields(const std::string& line, double* out, int count) {
  const char* p = line.data();
  const char* end = p + line.size();
  for (int i = 0; i < count; ++i) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p >= end) return false;
    auto [next, ec] = std::from_chars(p, end, out[i]);
    if (ec != std::errc()) return false;
    p = next;
  }
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  return p == end;
}

bool nextDataLine(std::ifstream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    return true;
  }
  return false;
}

// Round half-to-even, then clamp into [0, limit).
int roundAndClamp(double value, int limit) {
  const int r = static_cast<int>(std::nearbyint(value));
  return std::clamp(r, 0, limit - 1);
}

}  // namespace

EventFileReader::EventFileReader(const std::filesystem::path& file, SensorDims sensor)
    : in_(file), sensor_(sensor) {
  if (!in_) throw NotFoundError("events file not found: " + file.string());
}

std::optional<RawEvent> EventFileReader::next() {
  std::string line;
  while (nextDataLine(in_, line)) {
    double f[4];
    if (!parseFields(line, f, 4)) {
      ++skipped_;
      continue;
    }
    const int x = static_cast<int>(f[1]);
    const int y = static_cast<int>(f[2]);
    const int p = static_cast<int>(f[3]);
    if (f[1] != std::floor(f[1]) || f[2] != std::floor(f[2]) || (p != 0 && p != 1) ||
        x < 0 || x >= sensor_.width || y < 0 || y >= sensor_.height) {
      ++skipped_;
      continue;
    }
    ++parsed_;
    return RawEvent{f[0], x, y, p};
  }
  return std::nullopt;
}

void EventFileReader::checkFormatTolerance() const {
  const std::size_t total = parsed_ + skipped_;
  if (total > 0 && static_cast<double>(skipped_) > 0.01 * static_cast<double>(total))
    throw FormatError("events file: more than 1% malformed lines (" +
                      std::to_string(skipped_) + "/" + std::to_string(total) + ")");
}

EventPackager::EventPackager(const PreprocessParams& params) : params_(params) {
  if (params_.packageSize <= 0) throw std::invalid_argument("packageSize must be positive");
  if (params_.target.width < 2 || params_.target.height < 2)
    throw std::invalid_argument("target grid dimensions must be >= 2");
  counts_ = Eigen::MatrixXd::Zero(params_.target.height, params_.target.width);
}

std::optional<BinaryFrame> EventPackager::push(const RawEvent& ev) {
  const double fx = static_cast<double>(params_.sensor.width) / params_.target.width;
  const double fy = static_cast<double>(params_.sensor.height) / params_.target.height;
  const int gx = roundAndClamp(ev.x / fx, params_.target.width);
  const int gy = roundAndClamp(ev.y / fy, params_.target.height);
  if (filled_ == 0) tFirst_ = ev.t;
  tLast_ = ev.t;
  counts_(gy, gx) += 1.0;
  ++filled_;
  if (filled_ < params_.packageSize) return std::nullopt;

  BinaryFrame frame;
  frame.grid = params_.target;
  frame.tMid = 0.5 * (tFirst_ + tLast_);
  frame.bits = (counts_.array() > static_cast<double>(params_.binarizeThreshold)).cast<double>();
  counts_.setZero();
  filled_ = 0;
  return frame;
}

std::vector<ImuSample> loadImuFile(const std::filesystem::path& file) {
  std::vector<ImuSample> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  while (nextDataLine(in, line)) {
    double f[7];
    if (!parseFields(line, f, 7)) continue;
    ImuSample s;
    s.t = f[0];
    s.linearAcceleration = {f[1], f[2], f[3]};
    s.angularVelocity = {f[4], f[5], f[6]};
    out.push_back(s);
  }
  return out;
}

std::vector<GroundTruthSample> loadGroundTruthFile(const std::filesystem::path& file) {
  std::vector<GroundTruthSample> out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  while (nextDataLine(in, line)) {
    double f[8];
    if (!parseFields(line, f, 8)) continue;
    GroundTruthSample s;
    s.t = f[0];
    s.position = {f[1], f[2], f[3]};
    // File order is qx qy qz qw; stored as (w, x, y, z).
    s.quaternion = {f[7], f[4], f[5], f[6]};
    const double norm = s.quaternion.norm();
    if (norm < 1e-9) continue;
    s.quaternion /= norm;
    out.push_back(s);
  }
  return out;
}

Dataset loadDataset(const std::filesystem::path& directory, SensorDims sensor) {
  Dataset ds;
  EventFileReader reader(directory / "events.txt", sensor);
  while (auto ev = reader.next()) ds.events.push_back(*ev);
  reader.checkFormatTolerance();
  ds.skippedLines = reader.skippedCount();
  ds.imu = loadImuFile(directory / "imu.txt");
  ds.groundTruth = loadGroundTruthFile(directory / "groundtruth.txt");
  return ds;
}

std::vector<BinaryFrame> preprocess(const std::vector<RawEvent>& events,
                                    const PreprocessParams& params) {
  EventPackager packager(params);
  std::vector<BinaryFrame> frames;
  for (const RawEvent& ev : events)
    if (auto frame = packager.push(ev)) frames.push_back(std::move(*frame));
  return frames;
}

Eigen::Vector3d quatToEuler(const Eigen::Vector4d& quaternion) {
  const double norm = quaternion.norm();
  if (norm < 1e-9) throw std::invalid_argument("quatToEuler: zero quaternion");
  if (std::abs(norm - 1.0) > 1e-3)
    throw std::invalid_argument("quatToEuler: quaternion norm deviates from 1");
  const Eigen::Vector4d q = quaternion / norm;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  // R = Rz(roll) * Ry(pan) * Rx(tilt)
  const double roll = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  const double sinPan = std::clamp(2.0 * (w * y - z * x), -1.0, 1.0);
  const double pan = std::asin(sinPan);
  const double tilt = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
  return {roll * kDegPerRad, pan * kDegPerRad, tilt * kDegPerRad};
}

Eigen::Vector4d eulerToQuat(double rollDeg, double panDeg, double tiltDeg) {
  const double hr = rollDeg / kDegPerRad / 2.0;
  const double hp = panDeg / kDegPerRad / 2.0;
  const double ht = tiltDeg / kDegPerRad / 2.0;
  const double cr = std::cos(hr), sr = std::sin(hr);
  const double cp = std::cos(hp), sp = std::sin(hp);
  const double ct = std::cos(ht), st = std::sin(ht);
  return {cr * cp * ct + sr * sp * st, cr * cp * st - sr * sp * ct,
          cr * sp * ct + sr * cp * st, sr * cp * ct - cr * sp * st};
}

namespace {

template <typename Sample>
std::pair<std::size_t, double> bracket(const std::vector<Sample>& samples, double t) {
  if (samples.empty()) throw std::invalid_argument("interpolateAt: empty sequence");
  if (t <= samples.front().t) return {0, 0.0};
  if (t >= samples.back().t) return {samples.size() - 1, 0.0};
  const auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const Sample& s, double v) { return s.t < v; });
  const std::size_t hi = static_cast<std::size_t>(it - samples.begin());
  const std::size_t lo = hi - 1;
  const double span = samples[hi].t - samples[lo].t;
  return {lo, span > 0 ? (t - samples[lo].t) / span : 0.0};
}

}  // namespace

ImuSample interpolateAt(const std::vector<ImuSample>& samples, double t) {
  const auto [lo, alpha] = bracket(samples, t);
  if (alpha == 0.0) {
    ImuSample s = samples[lo];
    s.t = t;
    return s;
  }
  const ImuSample& a = samples[lo];
  const ImuSample& b = samples[lo + 1];
  ImuSample s;
  s.t = t;
  s.linearAcceleration = (1 - alpha) * a.linearAcceleration + alpha * b.linearAcceleration;
  s.angularVelocity = (1 - alpha) * a.angularVelocity + alpha * b.angularVelocity;
  return s;
}

GroundTruthSample interpolateAt(const std::vector<GroundTruthSample>& samples, double t) {
  const auto [lo, alpha] = bracket(samples, t);
  if (alpha == 0.0) {
    GroundTruthSample s = samples[lo];
    s.t = t;
    return s;
  }
  const GroundTruthSample& a = samples[lo];
  const GroundTruthSample& b = samples[lo + 1];
  GroundTruthSample s;
  s.t = t;
  s.position = (1 - alpha) * a.position + alpha * b.position;
  // nlerp with hemisphere correction keeps the unit-norm invariant.
  Eigen::Vector4d qb = b.quaternion;
  if (a.quaternion.dot(qb) < 0) qb = -qb;
  s.quaternion = ((1 - alpha) * a.quaternion + alpha * qb).normalized();
  return s;
}

void unwrapInPlace(std::vector<double>& series, double period) {
  if (series.size() < 2 || period <= 0) return;
  double offset = 0.0;
  double prev = series[0];
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double raw = series[i];
    double delta = raw - prev;
    while (delta > period / 2) {
      offset -= period;
      delta -= period;
    }
    while (delta < -period / 2) {
      offset += period;
      delta += period;
    }
    prev = raw;
    series[i] = raw + offset;
  }
}

}  // namespace hrnvo
