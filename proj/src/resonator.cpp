#include "hrnvo/resonator.hpp"

#include <cmath>
#include <stdexcept>

#include "hrnvo/errors.hpp"

namespace hrnvo {

void ResonatorConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
  if (!(sharpenK >= 1.0 && sharpenK <= 20.0))
    throw std::invalid_argument("sharpenK must be in [1, 20]");
  if (mapBlockIterations < 0) throw std::invalid_argument("mapBlockIterations must be >= 0");
  if (mu1 < 0.0 || mu2 < 0.0 || mu1 + mu2 >= 1.0)
    throw std::invalid_argument("map weights require mu1, mu2 >= 0 and mu1 + mu2 < 1");
  if (readoutWindow < 0) throw std::invalid_argument("readoutWindow must be >= 0");
}

ReadoutResult readout(const PhasorVector& state, const Codebook& cb, int window, bool periodic) {
  ReadoutResult res;
  res.profile = decodeAgainst(cb, state);
  const Eigen::Index m = res.profile.size();
  Eigen::Index peak = 0;
  res.profile.maxCoeff(&peak);  // first occurrence = lowest index on ties
  if (res.profile[peak] <= 0.0) {
    res.degenerate = true;
    res.out = 0.0;
    return res;
  }
  double weightSum = 0.0;
  double offsetSum = 0.0;
  for (int d = -window; d <= window; ++d) {
    Eigen::Index i = peak + d;
    if (periodic) {
      i = ((i % m) + m) % m;
    } else if (i < 0 || i >= m) {
      continue;
    }
    const double value = std::max(res.profile[i], 0.0);
    weightSum += value;
    offsetSum += d * value;
  }
  double out = static_cast<double>(peak) + offsetSum / weightSum;
  if (periodic) out = std::fmod(std::fmod(out, static_cast<double>(m)) + m, static_cast<double>(m));
  res.out = out;
  return res;
}

Resonator::Resonator(std::shared_ptr<const CodebookSet> codebooks,
                     std::shared_ptr<const FrameTransform> transform, ResonatorConfig config)
    : books_(std::move(codebooks)), transform_(std::move(transform)), config_(config) {
  config_.validate();
  if (!books_ || !transform_) throw std::invalid_argument("Resonator: null dependencies");
}

void Resonator::init(const BinaryFrame& firstFrame, Rng& rng) {
  if (firstFrame.bits.rows() != books_->cartGrid.height ||
      firstFrame.bits.cols() != books_->cartGrid.width)
    throw std::invalid_argument("init: frame does not match codebook grid");
  if (firstFrame.bits.sum() == 0.0) throw DegenerateInput("init: empty first frame");

  state_.hHat = randomSeed(books_->cartPixels->dim(), rng);
  state_.vHat = randomSeed(books_->cartPixels->dim(), rng);
  state_.rHat = randomSeed(books_->polarPixels->dim(), rng);
  state_.mapHat = normalizePhasor(books_->cartPixels->encode(firstFrame.bits));
  state_.anchorMap = state_.mapHat;
  state_.iteration = 0;
  initialized_ = true;
}

Estimate Resonator::readoutEstimate(double tMid) const {
  Estimate est;
  est.tMid = tMid;
  const bool cartPeriodic = books_->hShift.period > 0;
  const ReadoutResult h = readout(state_.hHat, books_->hShift, config_.readoutWindow, cartPeriodic);
  const ReadoutResult v = readout(state_.vHat, books_->vShift, config_.readoutWindow, cartPeriodic);
  const ReadoutResult r = readout(state_.rHat, books_->angle, config_.readoutWindow, true);
  est.hOut = books_->hShift.exponentStart() + h.out * books_->hShift.exponentStep();
  est.vOut = books_->vShift.exponentStart() + v.out * books_->vShift.exponentStep();
  est.rOut = std::fmod(r.out * books_->degreesPerAngleBin(), 360.0);
  if (est.rOut < 0) est.rOut += 360.0;
  est.hProfile = h.profile;
  est.vProfile = v.profile;
  est.rProfile = r.profile;
  est.degenerateReadout = h.degenerate || v.degenerate || r.degenerate;
  return est;
}

Estimate Resonator::step(const PhasorVector& sCart, const PhasorVector& sPolar, double tMid,
                         const std::optional<ImuRates>& imu, double dt) {
  if (!initialized_) throw std::logic_error("step before init");
  if (sCart.size() != books_->cartPixels->dim() || sPolar.size() != books_->polarPixels->dim())
    throw std::invalid_argument("step: input dimensions do not match codebooks");
  if (imu && !(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0 with imu rates");

  if (config_.fusionEnabled && imu) predictWithImu(*imu, dt);

  const bool degenerate = sCart.squaredNorm() == 0.0;
  if (!degenerate) {
    const double gamma = config_.gamma;
    const double k = config_.sharpenK;

    // Center the input: remove the current rotation hypothesis in the
    // polar frame, then move to the Cartesian frame.
    const PhasorVector pHat = transform_->toCartesian(unbind(sPolar, state_.rHat));

    // Horizontal factor cleanup from p ~ map (x) h (x) v.
    const PhasorVector hEvidence = unbind(unbind(pHat, state_.vHat), state_.mapHat);
    const PhasorVector hNew = normalizePhasor(
        encodeCoefficients(books_->hShift, sharpen(decodeAgainst(books_->hShift, hEvidence), k)));
    state_.hHat = normalizePhasor((1.0 - gamma) * state_.hHat + gamma * hNew);

    const PhasorVector vEvidence = unbind(unbind(pHat, state_.hHat), state_.mapHat);
    const PhasorVector vNew = normalizePhasor(
        encodeCoefficients(books_->vShift, sharpen(decodeAgainst(books_->vShift, vEvidence), k)));
    state_.vHat = normalizePhasor((1.0 - gamma) * state_.vHat + gamma * vNew);

    // Rotation factor: the translated map in the polar frame explains the
    // input up to a pure angle shift.
    const PhasorVector lHat = transform_->toPolar(hrnvo::bind(hrnvo::bind(state_.mapHat, state_.hHat), state_.vHat));
    const PhasorVector rEvidence = unbind(sPolar, lHat);
    const PhasorVector rNew = normalizePhasor(
        encodeCoefficients(books_->angle, sharpen(decodeAgainst(books_->angle, rEvidence), k)));
    state_.rHat = normalizePhasor((1.0 - gamma) * state_.rHat + gamma * rNew);
  }

  Estimate est = readoutEstimate(tMid);
  est.degenerateInput = degenerate;

  if (!degenerate && state_.iteration >= config_.mapBlockIterations)
    updateMap(transformToMapFrame(sPolar, est));
  ++state_.iteration;
  return est;
}

Estimate Resonator::stepFrame(const BinaryFrame& frame, const std::optional<ImuRates>& imu,
                              double dt) {
  if (frame.bits.rows() != books_->cartGrid.height || frame.bits.cols() != books_->cartGrid.width)
    throw std::invalid_argument("stepFrame: frame does not match codebook grid");
  const PhasorVector sCart = books_->cartPixels->encode(frame.bits);
  const PhasorVector sPolar = transform_->toPolar(sCart);
  return step(sCart, sPolar, frame.tMid, imu, dt);
}

PhasorVector Resonator::transformToMapFrame(const PhasorVector& sPolar,
                                            const Estimate& estimate) const {
  const double rotBins = estimate.rOut / books_->degreesPerAngleBin();
  const PhasorVector unrotated = hrnvo::bind(sPolar, fracPow(books_->angle.seed, -rotBins));
  const PhasorVector cart = transform_->toCartesian(unrotated);
  return hrnvo::bind(cart, hrnvo::bind(fracPow(books_->hAxis.seed, -estimate.hOut),
                         fracPow(books_->vAxis.seed, -estimate.vOut)));
}

void Resonator::updateMap(const PhasorVector& mapEstimate) {
  state_.mapHat = config_.mu1 * state_.mapHat + config_.mu2 * state_.anchorMap +
                  (1.0 - config_.mu1 - config_.mu2) * mapEstimate;
}

void Resonator::predictWithImu(const ImuRates& rates, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("predictWithImu: dt must be > 0");
  if (!std::isfinite(rates.rollDegPerSec) || !std::isfinite(rates.panPxPerSec) ||
      !std::isfinite(rates.tiltPxPerSec))
    throw std::invalid_argument("predictWithImu: non-finite rates");
  const double rollBins = rates.rollDegPerSec * dt / books_->degreesPerAngleBin();
  if (rollBins != 0.0) state_.rHat = hrnvo::bind(state_.rHat, fracPow(books_->angle.seed, rollBins));
  const double dh = rates.panPxPerSec * dt;
  if (dh != 0.0) state_.hHat = hrnvo::bind(state_.hHat, fracPow(books_->hAxis.seed, dh));
  const double dv = rates.tiltPxPerSec * dt;
  if (dv != 0.0) state_.vHat = hrnvo::bind(state_.vHat, fracPow(books_->vAxis.seed, dv));
}

}  // namespace hrnvo
