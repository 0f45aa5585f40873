#include <doctest.h>

#include <cmath>

#include "hrnvo/frame_transform.hpp"
#include "hrnvo/synth.hpp"

using namespace hrnvo;

namespace {

double cosineSimilarity(const PhasorVector& a, const PhasorVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.cwiseProduct(b.conjugate()).sum().real() / (na * nb);
}

CodebookSet smallSet() {
  PolarGridSpec polar;
  polar.angleBins = 36;
  polar.radiusBins = 6;
  polar.maxRadius = 6.0;
  return buildCodebookSet(GridSpec{16, 12}, polar, CodebookKind::Dft, 21);
}

}  // namespace

TEST_CASE("frame transform maps zero to zero and is linear") {
  const CodebookSet set = smallSet();
  const auto t = buildFrameTransform(set);

  const PhasorVector zero = PhasorVector::Zero(set.cartPixels->dim());
  CHECK(t->toPolar(zero).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t->toCartesian(PhasorVector::Zero(set.polarPixels->dim())).cwiseAbs().maxCoeff() == 0.0);

  Rng rng(2);
  const PhasorVector a = randomSeed(set.cartPixels->dim(), rng);
  const PhasorVector b = randomSeed(set.cartPixels->dim(), rng);
  const PhasorVector sum = t->toPolar(a + b);
  const PhasorVector parts = t->toPolar(a) + t->toPolar(b);
  CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("materialized matrices equal the pipeline path") {
  const CodebookSet set = smallSet();
  FrameTransform t(set.cartGrid, set.polarGrid, set.cartPixels, set.polarPixels);

  Rng rng(3);
  const PhasorVector v = randomSeed(set.cartPixels->dim(), rng);
  const PhasorVector w = randomSeed(set.polarPixels->dim(), rng);
  const PhasorVector pipelineP = t.toPolar(v);
  const PhasorVector pipelineC = t.toCartesian(w);

  t.materializeMatrices();
  REQUIRE(t.materialized());
  CHECK((t.toPolarMatrix() * v - pipelineP).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((t.toCartesianMatrix() * w - pipelineC).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("an off-center pixel lands in the right polar bin") {
  const CodebookSet set = smallSet();
  const auto t = buildFrameTransform(set);

  // Pixel to the right of center: angle bin 0; radius 5 px.
  Eigen::MatrixXd image = Eigen::MatrixXd::Zero(12, 16);
  image(6, 13) = 1.0;  // center is (8, 6); offset (5, 0)
  const PhasorVector polar = t->toPolar(set.cartPixels->encode(image));
  const Eigen::MatrixXd decoded = set.polarPixels->decode(polar);

  Eigen::Index peakAngle = 0, peakRadius = 0;
  decoded.maxCoeff(&peakAngle, &peakRadius);
  // Geometric oracle: radius 5 with bin centers (r+0.5) -> bin 4 or 5.
  CHECK(peakAngle == 0);
  CHECK(std::abs(static_cast<double>(peakRadius) - 4.5) <= 1.0);
}

TEST_CASE("rotation equivariance holds against the image-space oracle") {
  PolarGridSpec polar;
  polar.angleBins = 360;
  polar.radiusBins = 16;
  polar.maxRadius = 24.0;
  const CodebookSet set = buildCodebookSet(GridSpec{64, 48}, polar, CodebookKind::Dft, 31);
  const auto t = buildFrameTransform(set);

  // A centered pattern with angular structure, inside the polar footprint.
  SceneSpec scene;
  scene.canvasWidth = 64;
  scene.canvasHeight = 48;
  scene.shapes = {
      {ShapeKind::TriangleOutline, {32.0, 24.0}, 14.0, 10.0},
      {ShapeKind::RectangleOutline, {32.0, 24.0}, 8.0, 40.0},
  };
  const Eigen::MatrixXd image = renderScene(scene);

  const PhasorVector base = t->toPolar(set.cartPixels->encode(image));
  for (double deltaDeg : {10.0, 45.0, 90.0}) {
    const Eigen::MatrixXd rotated =
        (warpImage(image, 0.0, 0.0, deltaDeg).array() >= 0.5).cast<double>();
    const PhasorVector viaImage = t->toPolar(set.cartPixels->encode(rotated));
    const double bins = deltaDeg / set.degreesPerAngleBin();
    const PhasorVector viaBinding = hrnvo::bind(base, fracPow(set.angle.seed, bins));
    CHECK(cosineSimilarity(viaImage, viaBinding) > 0.8);
  }
}

TEST_CASE("round trip through the polar frame preserves in-footprint content") {
  PolarGridSpec polar;
  polar.angleBins = 360;
  polar.radiusBins = 24;
  polar.maxRadius = 24.0;
  const CodebookSet set = buildCodebookSet(GridSpec{64, 48}, polar, CodebookKind::Dft, 33);
  const auto t = buildFrameTransform(set);

  Rng rng(5);
  int pass = 0;
  for (int trial = 0; trial < 20; ++trial) {
    SceneSpec scene;
    scene.canvasWidth = 64;
    scene.canvasHeight = 48;
    scene.shapeCount = 3;
    scene.seed = 100 + static_cast<std::uint64_t>(trial);
    Eigen::MatrixXd image = renderScene(scene);
    // Keep content inside the inscribed circle the polar grid covers.
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 64; ++x)
        if (std::hypot(x - 32.0, y - 24.0) > polar.maxRadius - 1.5) image(y, x) = 0.0;
    if (image.sum() < 20) continue;
    const PhasorVector enc = set.cartPixels->encode(image);
    const PhasorVector back = t->toCartesian(t->toPolar(enc));
    if (cosineSimilarity(back, enc) > 0.9) ++pass;
  }
  CHECK(pass >= 18);
}

TEST_CASE("maxRadius beyond the half diagonal is rejected") {
  const CodebookSet set = smallSet();
  PolarGridSpec bad = set.polarGrid;
  bad.maxRadius = 100.0;
  CHECK_THROWS_AS(FrameTransform(set.cartGrid, bad, set.cartPixels, set.polarPixels),
                  std::invalid_argument);
}
