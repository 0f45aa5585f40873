#pragma once

#include <memory>
#include <optional>

#include "hrnvo/codebooks.hpp"
#include "hrnvo/event_io.hpp"
#include "hrnvo/frame_transform.hpp"
#include "hrnvo/phasor.hpp"

namespace hrnvo {

struct ResonatorConfig {
  double gamma = 0.2;          // leaky state update rate
  double sharpenK = 8.0;       // cleanup exponent, [1, 20]
  int mapBlockIterations = 100;  // map updates blocked before this iteration
  double mu1 = 0.9;            // map persistence weight
  double mu2 = 0.02;           // anchor weight
  int readoutWindow = 5;       // half-width around the profile peak
  bool fusionEnabled = false;

  void validate() const;
};

// Angular/pixel rates for the prediction step, already mapped into network
// units by the caller.
struct ImuRates {
  double rollDegPerSec = 0.0;
  double panPxPerSec = 0.0;
  double tiltPxPerSec = 0.0;
};

struct ReadoutResult {
  double out = 0.0;  // sub-index position in codebook index space
  CoefficientVector profile;
  bool degenerate = false;
};

// Population-vector readout: decode the state against the codebook, take
// the peak, then the similarity-weighted mean of the indices within
// +/-window of it (wrapping when periodic, clamping negatives to zero).
// Ties at the peak resolve to the lowest index. An all-nonpositive profile
// is degenerate and reads out as the peak index 0.
ReadoutResult readout(const PhasorVector& state, const Codebook& cb, int window, bool periodic);

struct Estimate {
  double hOut = 0.0;  // px, signed, in [-W/2, W/2) for periodic codebooks
  double vOut = 0.0;  // px, signed
  double rOut = 0.0;  // degrees in [0, 360)
  double tMid = 0.0;
  CoefficientVector hProfile, vProfile, rProfile;
  bool degenerateInput = false;
  bool degenerateReadout = false;
};

struct ResonatorState {
  PhasorVector hHat, vHat;  // Cartesian frame
  PhasorVector rHat;        // polar frame
  PhasorVector mapHat;      // Cartesian map frame; magnitudes carry evidence
  PhasorVector anchorMap;   // fixed after initialization
  long iteration = 0;
};

// Recursive three-factor inference over one event-frame stream. One
// instance is owned by one worker; step calls are strictly sequential.
class Resonator {
 public:
  Resonator(std::shared_ptr<const CodebookSet> codebooks,
            std::shared_ptr<const FrameTransform> transform, ResonatorConfig config);

  // Random unit-phasor factor states; map and anchor from the first frame.
  void init(const BinaryFrame& firstFrame, Rng& rng);
  bool initialized() const { return initialized_; }

  // One inference iteration. sPolar must be toPolar(sCart) for the same
  // frame. dt must be positive whenever imu rates are supplied.
  Estimate step(const PhasorVector& sCart, const PhasorVector& sPolar, double tMid,
                const std::optional<ImuRates>& imu = std::nullopt, double dt = 0.0);

  // Encodes the frame, converts it, and steps. The frame must match the
  // Cartesian grid.
  Estimate stepFrame(const BinaryFrame& frame, const std::optional<ImuRates>& imu = std::nullopt,
                     double dt = 0.0);

  // Express the current input in map coordinates using only the scalar
  // outputs: un-rotate in the polar frame, convert, un-translate.
  PhasorVector transformToMapFrame(const PhasorVector& sPolar, const Estimate& estimate) const;

  // Leaky anchored map update; the map is not phasor-normalized.
  void updateMap(const PhasorVector& mapEstimate);

  // Advance each factor state by its rate * dt via fractional binding.
  void predictWithImu(const ImuRates& rates, double dt);

  const ResonatorState& state() const { return state_; }
  const ResonatorConfig& config() const { return config_; }

 private:
  Estimate readoutEstimate(double tMid) const;

  std::shared_ptr<const CodebookSet> books_;
  std::shared_ptr<const FrameTransform> transform_;
  ResonatorConfig config_;
  ResonatorState state_;
  bool initialized_ = false;
};

}  // namespace hrnvo
