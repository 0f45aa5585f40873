#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrnvo/codebooks.hpp"
#include "hrnvo/resonator.hpp"
#include "hrnvo/synth.hpp"

namespace hrnvo {

// Flat "key = value" configuration with [section] headers. '#' and ';'
// start comments; insertion order is preserved so manifests echo cleanly.
class KeyValueConfig {
 public:
  static KeyValueConfig fromFile(const std::filesystem::path& file);
  static KeyValueConfig fromString(const std::string& text);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string getString(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  double getDouble(const std::string& section, const std::string& key, double fallback) const;
  int getInt(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t getUint64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
  bool getBool(const std::string& section, const std::string& key, bool fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  std::string toString() const;

 private:
  struct Entry {
    std::string section, key, value;
  };
  std::vector<Entry> entries_;
};

// Everything a tracking run needs; see parseRunConfig for file keys.
struct RunConfig {
  std::filesystem::path dataset;
  SensorDims sensor{64, 48};
  GridSpec grid{64, 48};
  int packageSize = 2000;
  int binarizeThreshold = 0;
  CodebookKind kind = CodebookKind::Dft;
  Eigen::Index dimension = 0;       // 0 = grid pixels
  Eigen::Index polarDimension = 0;  // 0 = polar bins
  PolarGridSpec polar;
  std::uint64_t seed = 1;
  std::filesystem::path outDir = "out";
  bool dumpProfiles = false;
  std::filesystem::path codebookCache;  // empty = no cache
  ResonatorConfig resonator;
  double imuPanScale = 1.0;   // px per (rad/s)
  double imuTiltScale = 1.0;
  double imuRollSign = 1.0;

  void validate() const;
};

RunConfig parseRunConfig(const KeyValueConfig& cfg);

// Echo of the effective configuration, for the run manifest.
KeyValueConfig runConfigToKeyValue(const RunConfig& cfg);

// Scene/trajectory spec files for the synthesizer.
SceneSpec parseSceneSpec(const KeyValueConfig& cfg);
SynthParams parseSynthParams(const KeyValueConfig& scene, const KeyValueConfig& traj);

}  // namespace hrnvo
