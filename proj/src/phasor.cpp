#include "hrnvo/phasor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hrnvo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PhasorVector randomSeed(Eigen::Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("randomSeed: n must be >= 1");
  PhasorVector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double phi = kTwoPi * rng.uniform();
    out[j] = Complex(std::cos(phi), std::sin(phi));
  }
  return out;
}

PhasorVector periodicSeed(Eigen::Index n, int period, Rng& rng) {
  if (n < 1) throw std::invalid_argument("periodicSeed: n must be >= 1");
  if (period < 2) throw std::invalid_argument("periodicSeed: period must be >= 2");
  PhasorVector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto k = rng.uniformInt(static_cast<std::uint64_t>(period));
    const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(period);
    out[j] = Complex(std::cos(phi), std::sin(phi));
  }
  return out;
}

PhasorVector fracPow(const PhasorVector& seed, double exponent) {
  if (!std::isfinite(exponent)) throw std::invalid_argument("fracPow: non-finite exponent");
  PhasorVector out(seed.size());
  for (Eigen::Index j = 0; j < seed.size(); ++j) {
    const double phi = std::arg(seed[j]) * exponent;
    out[j] = Complex(std::cos(phi), std::sin(phi));
  }
  return out;
}

PhasorVector bind(const PhasorVector& a, const PhasorVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bind: length mismatch");
  return a.cwiseProduct(b);
}

PhasorVector unbind(const PhasorVector& a, const PhasorVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("unbind: length mismatch");
  return a.cwiseProduct(b.conjugate());
}

PhasorVector bundle(std::span<const PhasorVector> vs, std::span<const double> weights) {
  if (vs.empty()) throw std::invalid_argument("bundle: empty sequence");
  if (!weights.empty() && weights.size() != vs.size())
    throw std::invalid_argument("bundle: weight count mismatch");
  const Eigen::Index n = vs.front().size();
  PhasorVector out = PhasorVector::Zero(n);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != n) throw std::invalid_argument("bundle: length mismatch");
    out += weights.empty() ? vs[i] : Complex(weights[i], 0.0) * vs[i];
  }
  return out;
}

double similarity(const PhasorVector& a, const PhasorVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("similarity: length mismatch");
  return a.cwiseProduct(b.conjugate()).sum().real() / static_cast<double>(a.size());
}

PhasorVector normalizePhasor(const PhasorVector& v) {
  PhasorVector out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double mag = std::abs(v[j]);
    out[j] = mag < kZeroMagnitudeEps ? Complex(0.0, 0.0) : v[j] / mag;
  }
  return out;
}

CoefficientVector sharpen(const CoefficientVector& c, double k) {
  if (!std::isfinite(k)) throw std::invalid_argument("sharpen: non-finite k");
  if (k < 1.0) throw std::invalid_argument("sharpen: k must be >= 1");
  CoefficientVector clamped = c.cwiseMax(0.0);
  const double peak = clamped.size() > 0 ? clamped.maxCoeff() : 0.0;
  if (peak <= 0.0) return CoefficientVector::Zero(c.size());
  // Scale by the peak before exponentiation; p is scale-invariant and this
  // keeps x^k in range for any k in [1, 20].
  CoefficientVector powed = (clamped / peak).array().pow(k);
  return powed / powed.norm();
}

}  // namespace hrnvo
