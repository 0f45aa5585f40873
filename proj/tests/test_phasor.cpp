#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hrnvo/phasor.hpp"

using namespace hrnvo;

namespace {

PhasorVector allOnes(Eigen::Index n) { return PhasorVector::Constant(n, Complex(1.0, 0.0)); }

double maxEntryDistance(const PhasorVector& a, const PhasorVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("randomSeed produces unit-magnitude entries deterministically") {
  Rng rng(42);
  const PhasorVector a = randomSeed(4, rng);
  CHECK(a.size() == 4);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(std::abs(a[i]) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng2(42);
  const PhasorVector b = randomSeed(4, rng2);
  CHECK(maxEntryDistance(a, b) == 0.0);  // bit-identical under the same seed

  CHECK_THROWS_AS(randomSeed(0, rng), std::invalid_argument);
}

TEST_CASE("independent random seeds are nearly orthogonal") {
  Rng rng(7);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PhasorVector a = randomSeed(3072, rng);
    const PhasorVector b = randomSeed(3072, rng);
    if (std::abs(similarity(a, b)) < 0.05) ++ok;
  }
  CHECK(ok >= 99);
}

TEST_CASE("periodicSeed wraps with its period") {
  Rng rng(3);
  const PhasorVector seed = periodicSeed(8, 360, rng);
  CHECK(maxEntryDistance(fracPow(seed, 360), allOnes(8)) < 1e-10);
  // Half period applied twice is a full wrap.
  const PhasorVector half = fracPow(seed, 180);
  CHECK(maxEntryDistance(hrnvo::bind(half, half), allOnes(8)) < 1e-10);
  // Phases are multiples of 2*pi/360.
  for (Eigen::Index i = 0; i < seed.size(); ++i) {
    const double steps = std::arg(seed[i]) / (2.0 * std::numbers::pi / 360.0);
    CHECK(std::abs(steps - std::round(steps)) < 1e-12);
  }
  CHECK_THROWS_AS(periodicSeed(8, 1, rng), std::invalid_argument);
}

TEST_CASE("fracPow is the identity at exponent zero and adds exponents") {
  Rng rng(11);
  const PhasorVector h0 = randomSeed(256, rng);
  CHECK(maxEntryDistance(fracPow(h0, 0.0), allOnes(256)) == 0.0);

  const double a = 1.7, b = -3.2;
  const PhasorVector lhs = hrnvo::bind(fracPow(h0, a), fracPow(h0, b));
  const PhasorVector rhs = fracPow(h0, a + b);
  CHECK(maxEntryDistance(lhs, rhs) < 1e-10);

  CHECK_THROWS_AS(fracPow(h0, std::nan("")), std::invalid_argument);
}

TEST_CASE("bind has the all-ones identity and conjugate inverse") {
  Rng rng(5);
  const PhasorVector a = randomSeed(512, rng);
  const PhasorVector b = randomSeed(512, rng);

  CHECK(maxEntryDistance(hrnvo::bind(a, allOnes(512)), a) == 0.0);
  CHECK(maxEntryDistance(unbind(hrnvo::bind(a, b), b), a) < 1e-12);
  // Commutative and associative.
  CHECK(maxEntryDistance(hrnvo::bind(a, b), hrnvo::bind(b, a)) == 0.0);
  const PhasorVector c = randomSeed(512, rng);
  CHECK(maxEntryDistance(hrnvo::bind(hrnvo::bind(a, b), c), hrnvo::bind(a, hrnvo::bind(b, c))) < 1e-12);

  CHECK_THROWS_AS(hrnvo::bind(a, allOnes(8)), std::invalid_argument);
}

TEST_CASE("binding with a random vector decorrelates") {
  Rng rng(17);
  int ok = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PhasorVector a = randomSeed(3072, rng);
    const PhasorVector b = randomSeed(3072, rng);
    if (std::abs(similarity(hrnvo::bind(a, b), a)) < 0.05) ++ok;
  }
  CHECK(ok >= 99);
}

TEST_CASE("bundle superposes and keeps members recoverable") {
  Rng rng(19);
  const PhasorVector a = randomSeed(3072, rng);
  const PhasorVector b = randomSeed(3072, rng);

  const std::vector<PhasorVector> single{a};
  CHECK(maxEntryDistance(bundle(single), a) == 0.0);

  const std::vector<PhasorVector> pair{a, b};
  CHECK(similarity(bundle(pair), a) == doctest::Approx(1.0).epsilon(0.05));

  const std::vector<double> weights{2.0, 0.5};
  const PhasorVector weighted = bundle(std::span<const PhasorVector>(pair),
                                       std::span<const double>(weights));
  CHECK(maxEntryDistance(weighted, 2.0 * a + 0.5 * b) < 1e-12);

  const std::vector<PhasorVector> empty;
  CHECK_THROWS_AS(bundle(empty), std::invalid_argument);
}

TEST_CASE("similarity is symmetric, bounded, and normalized by N") {
  Rng rng(23);
  const PhasorVector a = randomSeed(1024, rng);
  const PhasorVector b = randomSeed(1024, rng);
  CHECK(similarity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(similarity(a, -a) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(similarity(a, b) == doctest::Approx(similarity(b, a)).epsilon(1e-12));
  CHECK(std::abs(similarity(a, b)) <= 1.0);
}

TEST_CASE("normalizePhasor projects to the unit circle and zeroes tiny entries") {
  PhasorVector v(3);
  v << Complex(2.0, 0.0), Complex(0.0, -3.0), Complex(1e-14, 1e-14);
  const PhasorVector n = normalizePhasor(v);
  CHECK(n[0] == Complex(1.0, 0.0));
  CHECK(std::abs(n[1] + Complex(0.0, 1.0)) < 1e-12);
  CHECK(n[2] == Complex(0.0, 0.0));
  // Idempotent.
  CHECK((normalizePhasor(n) - n).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sharpen clamps, normalizes, and keeps one-hot fixed points") {
  CoefficientVector oneHot(3);
  oneHot << 1.0, 0.0, 0.0;
  CHECK((sharpen(oneHot, 8.0) - oneHot).cwiseAbs().maxCoeff() < 1e-12);

  CoefficientVector tie(3);
  tie << 0.3, 0.3, 0.0;
  const CoefficientVector sharpTie = sharpen(tie, 5.0);
  CHECK(sharpTie[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sharpTie[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sharpTie[2] == 0.0);

  CoefficientVector withNeg(2);
  withNeg << -0.5, 1.0;
  const CoefficientVector clamped = sharpen(withNeg, 2.0);
  CHECK(clamped[0] == 0.0);
  CHECK(clamped[1] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(sharpen(CoefficientVector::Zero(4), 3.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(sharpen(oneHot, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(sharpen(oneHot, 0.5), std::invalid_argument);
}

TEST_CASE("sharpen output is unit norm and larger k sharpens the peak ratio") {
  Rng rng(29);
  CoefficientVector c(16);
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.uniform();
  double prevRatio = 0.0;
  for (double k : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const CoefficientVector s = sharpen(c, k);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> sorted(s.data(), s.data() + s.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double ratio = sorted[0] / sorted[1];
    CHECK(ratio >= prevRatio - 1e-12);
    prevRatio = ratio;
  }
}
