#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "hrnvo/rng.hpp"

namespace hrnvo {

using Complex = std::complex<double>;

// Complex vector whose entries have magnitude 1 (or exactly 0 for absent
// information). All FHRR algebra below operates on these.
using PhasorVector = Eigen::VectorXcd;

// Real similarity profile obtained by decoding a phasor vector against a
// codebook; one entry per codebook index.
using CoefficientVector = Eigen::VectorXd;

// Entries with magnitude below this are treated as absent and map to 0
// under normalizePhasor.
inline constexpr double kZeroMagnitudeEps = 1e-12;

// Random seed vector: phases i.i.d. uniform on [0, 2pi).
PhasorVector randomSeed(Eigen::Index n, Rng& rng);

// Seed whose phases are uniform draws from the lattice {2pi*k/period}:
// fracPow(seed, period) is the all-ones vector, so exponent arithmetic on
// this seed wraps with the given period.
PhasorVector periodicSeed(Eigen::Index n, int period, Rng& rng);

// Fractional power: entry j -> exp(i * exponent * phase_j). Exponent
// addition composes: fracPow(s, a+b) = bind(fracPow(s,a), fracPow(s,b)).
PhasorVector fracPow(const PhasorVector& seed, double exponent);

// Binding: element-wise complex (Hadamard) product.
PhasorVector bind(const PhasorVector& a, const PhasorVector& b);

// Unbinding: bind with the complex conjugate of b. Exact inverse of bind
// for unit-magnitude b.
PhasorVector unbind(const PhasorVector& a, const PhasorVector& b);

// Bundling: (weighted) element-wise complex sum. Result is generally not
// unit-magnitude.
PhasorVector bundle(std::span<const PhasorVector> vs, std::span<const double> weights = {});

// Re(<a, conj b>) / N. In [-1, 1] for unit-magnitude inputs; dividing by N
// makes codebook self-similarity 1 regardless of dimension.
double similarity(const PhasorVector& a, const PhasorVector& b);

// Projection to the unit circle; entries with magnitude < kZeroMagnitudeEps
// become exactly 0 rather than acquiring an arbitrary phase.
PhasorVector normalizePhasor(const PhasorVector& v);

// Cleanup nonlinearity p: clamp negatives to 0, raise element-wise to the
// k-th power, divide by the L2 norm of the powered vector. All-zero input
// (after clamping) stays all-zero.
CoefficientVector sharpen(const CoefficientVector& c, double k);

}  // namespace hrnvo
