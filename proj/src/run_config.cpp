#include "hrnvo/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hrnvo/errors.hpp"

namespace hrnvo {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> splitCsv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::fromFile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw NotFoundError("config file not found: " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fromString(ss.str());
}

KeyValueConfig KeyValueConfig::fromString(const std::string& text) {
  KeyValueConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineNo = 0;
  while (std::getline(ss, line)) {
    ++lineNo;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw FormatError("config line " + std::to_string(lineNo) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(lineNo) + ": expected key = value");
    cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::get(const std::string& section,
                                               const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->section == section && it->key == key) return it->value;
  return std::nullopt;
}

std::string KeyValueConfig::getString(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double KeyValueConfig::getDouble(const std::string& section, const std::string& key,
                                 double fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw FormatError("config key " + section + "." + key + ": not a number: " + *v);
  }
}

int KeyValueConfig::getInt(const std::string& section, const std::string& key,
                           int fallback) const {
  const double d = getDouble(section, key, fallback);
  return static_cast<int>(d);
}

std::uint64_t KeyValueConfig::getUint64(const std::string& section, const std::string& key,
                                        std::uint64_t fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    throw FormatError("config key " + section + "." + key + ": not an integer: " + *v);
  }
}

bool KeyValueConfig::getBool(const std::string& section, const std::string& key,
                             bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw FormatError("config key " + section + "." + key + ": not a boolean: " + *v);
}

void KeyValueConfig::set(const std::string& section, const std::string& key,
                         const std::string& value) {
  entries_.push_back({section, key, value});
}

std::string KeyValueConfig::toString() const {
  std::ostringstream out;
  std::string section = "";  // never matches a real section
  for (const auto& e : entries_) {
    if (e.section != section) {
      section = e.section;
      if (!section.empty()) out << "[" << section << "]\n";
    }
    out << e.key << " = " << e.value << "\n";
  }
  return out.str();
}

void RunConfig::validate() const {
  if (dataset.empty()) throw std::invalid_argument("run config: dataset path is required");
  if (sensor.width < 2 || sensor.height < 2)
    throw std::invalid_argument("run config: sensor dimensions must be >= 2");
  if (grid.width < 2 || grid.height < 2)
    throw std::invalid_argument("run config: grid dimensions must be >= 2");
  if (packageSize <= 0) throw std::invalid_argument("run config: package_size must be positive");
  if (binarizeThreshold < 0)
    throw std::invalid_argument("run config: binarize_threshold must be >= 0");
  if (polar.angleBins < 2 || polar.radiusBins < 2)
    throw std::invalid_argument("run config: polar bins must be >= 2");
  resonator.validate();
}

RunConfig parseRunConfig(const KeyValueConfig& cfg) {
  RunConfig rc;
  rc.dataset = cfg.getString("run", "dataset", "");
  rc.sensor.width = cfg.getInt("run", "sensor_width", 64);
  rc.sensor.height = cfg.getInt("run", "sensor_height", 48);
  rc.grid.width = cfg.getInt("run", "grid_width", rc.sensor.width);
  rc.grid.height = cfg.getInt("run", "grid_height", rc.sensor.height);
  rc.packageSize = cfg.getInt("run", "package_size", 2000);
  rc.binarizeThreshold = cfg.getInt("run", "binarize_threshold", 0);
  const std::string kind = cfg.getString("run", "codebook", "dft");
  if (kind == "dft")
    rc.kind = CodebookKind::Dft;
  else if (kind == "random")
    rc.kind = CodebookKind::Random;
  else
    throw std::invalid_argument("run config: codebook must be dft or random");
  rc.dimension = cfg.getInt("run", "dimension", 0);
  rc.polarDimension = cfg.getInt("run", "polar_dimension", 0);
  rc.polar.angleBins = cfg.getInt("run", "angle_bins", 360);
  rc.polar.radiusBins = cfg.getInt("run", "radius_bins", 32);
  rc.polar.maxRadius = cfg.getDouble("run", "max_radius", 0.0);
  rc.polar.logRadius = cfg.getBool("run", "log_radius", false);
  rc.seed = cfg.getUint64("run", "seed", 1);
  rc.outDir = cfg.getString("run", "out_dir", "out");
  rc.dumpProfiles = cfg.getBool("run", "dump_profiles", false);
  rc.codebookCache = cfg.getString("run", "codebook_cache", "");

  rc.resonator.gamma = cfg.getDouble("resonator", "gamma", 0.2);
  rc.resonator.sharpenK = cfg.getDouble("resonator", "sharpen_k", 8.0);
  rc.resonator.mapBlockIterations = cfg.getInt("resonator", "map_block_iterations", 100);
  rc.resonator.mu1 = cfg.getDouble("resonator", "mu1", 0.9);
  rc.resonator.mu2 = cfg.getDouble("resonator", "mu2", 0.02);
  rc.resonator.readoutWindow = cfg.getInt("resonator", "readout_window", 5);
  rc.resonator.fusionEnabled = cfg.getBool("resonator", "fusion", false);
  rc.imuPanScale = cfg.getDouble("resonator", "imu_pan_scale", 1.0);
  rc.imuTiltScale = cfg.getDouble("resonator", "imu_tilt_scale", 1.0);
  rc.imuRollSign = cfg.getDouble("resonator", "imu_roll_sign", 1.0);
  return rc;
}

KeyValueConfig runConfigToKeyValue(const RunConfig& rc) {
  KeyValueConfig cfg;
  auto put = [&](const char* section, const char* key, const std::string& value) {
    cfg.set(section, key, value);
  };
  put("run", "dataset", rc.dataset.string());
  put("run", "sensor_width", std::to_string(rc.sensor.width));
  put("run", "sensor_height", std::to_string(rc.sensor.height));
  put("run", "grid_width", std::to_string(rc.grid.width));
  put("run", "grid_height", std::to_string(rc.grid.height));
  put("run", "package_size", std::to_string(rc.packageSize));
  put("run", "binarize_threshold", std::to_string(rc.binarizeThreshold));
  put("run", "codebook", rc.kind == CodebookKind::Dft ? "dft" : "random");
  put("run", "dimension", std::to_string(rc.dimension));
  put("run", "polar_dimension", std::to_string(rc.polarDimension));
  put("run", "angle_bins", std::to_string(rc.polar.angleBins));
  put("run", "radius_bins", std::to_string(rc.polar.radiusBins));
  put("run", "max_radius", std::to_string(rc.polar.maxRadius));
  put("run", "log_radius", rc.polar.logRadius ? "true" : "false");
  put("run", "seed", std::to_string(rc.seed));
  put("run", "out_dir", rc.outDir.string());
  put("run", "dump_profiles", rc.dumpProfiles ? "true" : "false");
  put("run", "codebook_cache", rc.codebookCache.string());
  put("resonator", "gamma", std::to_string(rc.resonator.gamma));
  put("resonator", "sharpen_k", std::to_string(rc.resonator.sharpenK));
  put("resonator", "map_block_iterations", std::to_string(rc.resonator.mapBlockIterations));
  put("resonator", "mu1", std::to_string(rc.resonator.mu1));
  put("resonator", "mu2", std::to_string(rc.resonator.mu2));
  put("resonator", "readout_window", std::to_string(rc.resonator.readoutWindow));
  put("resonator", "fusion", rc.resonator.fusionEnabled ? "true" : "false");
  put("resonator", "imu_pan_scale", std::to_string(rc.imuPanScale));
  put("resonator", "imu_tilt_scale", std::to_string(rc.imuTiltScale));
  put("resonator", "imu_roll_sign", std::to_string(rc.imuRollSign));
  return cfg;
}

namespace {

ShapeKind parseShapeKind(const std::string& s) {
  if (s == "rect" || s == "rectangle") return ShapeKind::RectangleOutline;
  if (s == "triangle" || s == "tri") return ShapeKind::TriangleOutline;
  if (s == "circle") return ShapeKind::CircleOutline;
  throw std::invalid_argument("unknown shape kind: " + s);
}

AxisMotion parseAxisMotion(const std::string& s) {
  const auto parts = splitCsv(s);
  if (parts.empty()) throw std::invalid_argument("empty motion spec");
  AxisMotion m;
  if (parts[0] == "sinusoid") {
    if (parts.size() < 3) throw std::invalid_argument("sinusoid needs amplitude,period[,phase]");
    m.kind = MotionKind::Sinusoid;
    m.amplitude = std::stod(parts[1]);
    m.period = std::stod(parts[2]);
    m.phase = parts.size() > 3 ? std::stod(parts[3]) : 0.0;
  } else if (parts[0] == "linear") {
    if (parts.size() < 2) throw std::invalid_argument("linear needs rate");
    m.kind = MotionKind::Linear;
    m.rate = std::stod(parts[1]);
  } else if (parts[0] == "randomwalk") {
    if (parts.size() < 3) throw std::invalid_argument("randomwalk needs amplitude,knot_interval");
    m.kind = MotionKind::RandomWalk;
    m.amplitude = std::stod(parts[1]);
    m.knotInterval = std::stod(parts[2]);
  } else if (parts[0] == "none") {
    m.kind = MotionKind::Linear;
    m.rate = 0.0;
  } else {
    throw std::invalid_argument("unknown motion kind: " + parts[0]);
  }
  return m;
}

}  // namespace

SceneSpec parseSceneSpec(const KeyValueConfig& cfg) {
  SceneSpec scene;
  scene.canvasWidth = cfg.getInt("scene", "canvas_width", 192);
  scene.canvasHeight = cfg.getInt("scene", "canvas_height", 144);
  scene.shapeCount = cfg.getInt("scene", "shape_count", 6);
  scene.strokeWidth = cfg.getDouble("scene", "stroke_width", 1.6);
  scene.seed = cfg.getUint64("scene", "seed", 1);
  if (const auto kinds = cfg.get("scene", "kinds")) {
    scene.kinds.clear();
    for (const auto& k : splitCsv(*kinds)) scene.kinds.push_back(parseShapeKind(k));
    if (scene.kinds.empty()) throw std::invalid_argument("scene kinds must not be empty");
  }
  for (int i = 0;; ++i) {
    const auto spec = cfg.get("scene", "shape" + std::to_string(i));
    if (!spec) break;
    const auto parts = splitCsv(*spec);
    if (parts.size() != 5)
      throw std::invalid_argument("shape spec needs kind,cx,cy,size,angle: " + *spec);
    Shape s;
    s.kind = parseShapeKind(parts[0]);
    s.center = {std::stod(parts[1]), std::stod(parts[2])};
    s.size = std::stod(parts[3]);
    s.angleDeg = std::stod(parts[4]);
    scene.shapes.push_back(s);
  }
  return scene;
}

SynthParams parseSynthParams(const KeyValueConfig& scene, const KeyValueConfig& traj) {
  SynthParams params;
  params.scene = parseSceneSpec(scene);
  params.trajectory.durationSeconds = traj.getDouble("trajectory", "duration", 10.0);
  params.trajectory.sampleRateHz = traj.getDouble("trajectory", "sample_rate", 1000.0);
  params.trajectory.x = parseAxisMotion(traj.getString("trajectory", "x", "none"));
  params.trajectory.y = parseAxisMotion(traj.getString("trajectory", "y", "none"));
  params.trajectory.roll = parseAxisMotion(traj.getString("trajectory", "roll", "none"));
  params.cameraWidth = traj.getInt("camera", "width", 64);
  params.cameraHeight = traj.getInt("camera", "height", 48);
  params.eventNoisePerFrame = traj.getDouble("noise", "event_noise_per_frame", 0.0);
  params.imuNoiseSigma = traj.getDouble("noise", "imu_noise_sigma", 0.0);
  if (const auto bias = traj.get("noise", "imu_bias")) {
    const auto parts = splitCsv(*bias);
    if (parts.size() != 3) throw std::invalid_argument("imu_bias needs three components");
    for (int i = 0; i < 3; ++i) params.imuBias[i] = std::stod(parts[static_cast<size_t>(i)]);
  }
  params.seed = traj.getUint64("noise", "seed", 7);
  params.removeShapeAtTime = traj.getDouble("scene_change", "remove_shape_at_time", -1.0);
  params.removeShapeIndex = traj.getInt("scene_change", "remove_shape_index", -1);
  if (params.trajectory.durationSeconds <= 0 || params.trajectory.sampleRateHz <= 0)
    throw std::invalid_argument("trajectory duration and sample_rate must be positive");
  if (params.cameraWidth < 2 || params.cameraHeight < 2)
    throw std::invalid_argument("camera dimensions must be >= 2");
  return params;
}

}  // namespace hrnvo
