#include "hrnvo/frame_transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hrnvo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Tap {
  int index;
  double weight;
};

// Bilinear taps for a sample at (rf, cf) on a (rows x cols) grid flattened
// column-major. Row axis optionally wraps (the angle axis); anything
// falling outside a non-wrapping axis is dropped.
void bilinearTaps(double rf, double cf, int rows, int cols, bool wrapRows,
                  std::vector<Tap>& out) {
  const int r0 = static_cast<int>(std::floor(rf));
  const int c0 = static_cast<int>(std::floor(cf));
  const double ar = rf - r0;
  const double ac = cf - c0;
  const double w[4] = {(1 - ar) * (1 - ac), ar * (1 - ac), (1 - ar) * ac, ar * ac};
  const int rr[4] = {r0, r0 + 1, r0, r0 + 1};
  const int cc[4] = {c0, c0, c0 + 1, c0 + 1};
  for (int i = 0; i < 4; ++i) {
    if (w[i] <= 0.0) continue;
    int r = rr[i];
    const int c = cc[i];
    if (wrapRows) {
      r = ((r % rows) + rows) % rows;
    } else if (r < 0 || r >= rows) {
      continue;
    }
    if (c < 0 || c >= cols) continue;
    out.push_back({r + c * rows, w[i]});
  }
}

}  // namespace

FrameTransform::FrameTransform(const GridSpec& cartGrid, const PolarGridSpec& polarGrid,
                               std::shared_ptr<const PixelCodebook> cartPixels,
                               std::shared_ptr<const PixelCodebook> polarPixels)
    : cartGrid_(cartGrid),
      polarGrid_(polarGrid),
      cartPixels_(std::move(cartPixels)),
      polarPixels_(std::move(polarPixels)) {
  const double halfDiagonal = std::hypot(cartGrid.width, cartGrid.height) / 2.0;
  if (polarGrid_.maxRadius <= 0.0 || polarGrid_.maxRadius > halfDiagonal)
    throw std::invalid_argument("FrameTransform: maxRadius must be in (0, half diagonal]");
  if (!cartPixels_ || !polarPixels_) throw std::invalid_argument("FrameTransform: null codebooks");

  const int ab = polarGrid_.angleBins;
  const int rb = polarGrid_.radiusBins;
  const double cx = cartGrid_.width / 2.0;
  const double cy = cartGrid_.height / 2.0;
  const double angleStep = kTwoPi / ab;
  const double radiusStep = polarGrid_.maxRadius / rb;
  const double logMin = 1.0;  // innermost ring for log spacing, px
  const double logRatio = std::log(polarGrid_.maxRadius / logMin);

  auto radiusAt = [&](double binCenter) {
    if (polarGrid_.logRadius) return logMin * std::exp(logRatio * binCenter / rb);
    return radiusStep * binCenter;
  };
  auto binAt = [&](double radius) {
    if (polarGrid_.logRadius)
      return radius < logMin ? -0.5 : rb * std::log(radius / logMin) / logRatio - 0.5;
    return radius / radiusStep - 0.5;
  };

  std::vector<Eigen::Triplet<double>> cpTriplets;
  std::vector<Tap> taps;
  for (int r = 0; r < rb; ++r) {
    const double rho = radiusAt(r + 0.5);
    for (int a = 0; a < ab; ++a) {
      const double theta = a * angleStep;
      const double xs = cx + rho * std::cos(theta);
      const double ys = cy + rho * std::sin(theta);
      taps.clear();
      bilinearTaps(ys, xs, cartGrid_.height, cartGrid_.width, false, taps);
      const int row = a + r * ab;
      for (const Tap& t : taps) cpTriplets.emplace_back(row, t.index, t.weight);
    }
  }
  cartToPolar_.resize(static_cast<Eigen::Index>(ab) * rb, cartGrid_.pixels());
  cartToPolar_.setFromTriplets(cpTriplets.begin(), cpTriplets.end());

  std::vector<Eigen::Triplet<double>> pcTriplets;
  for (int x = 0; x < cartGrid_.width; ++x) {
    for (int y = 0; y < cartGrid_.height; ++y) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double rho = std::hypot(dx, dy);
      if (rho > polarGrid_.maxRadius) continue;
      double theta = std::atan2(dy, dx);
      if (theta < 0) theta += kTwoPi;
      const double af = theta / angleStep;
      double rf = binAt(rho);
      // Clamp the half-bin overhang at both radial ends.
      rf = std::min(std::max(rf, 0.0), static_cast<double>(rb - 1));
      taps.clear();
      bilinearTaps(af, rf, ab, rb, true, taps);
      const int row = y + x * cartGrid_.height;
      for (const Tap& t : taps) pcTriplets.emplace_back(row, t.index, t.weight);
    }
  }
  polarToCart_.resize(cartGrid_.pixels(), static_cast<Eigen::Index>(ab) * rb);
  polarToCart_.setFromTriplets(pcTriplets.begin(), pcTriplets.end());

  cartToPolarC_ = cartToPolar_.cast<Complex>();
  polarToCartC_ = polarToCart_.cast<Complex>();
}

Eigen::Vector2d FrameTransform::polarBinCenter(int angleBin, int radiusBin) const {
  const double theta = angleBin * kTwoPi / polarGrid_.angleBins;
  double rho;
  if (polarGrid_.logRadius) {
    const double logMin = 1.0;
    rho = logMin * std::exp(std::log(polarGrid_.maxRadius / logMin) * (radiusBin + 0.5) /
                            polarGrid_.radiusBins);
  } else {
    rho = (radiusBin + 0.5) * polarGrid_.maxRadius / polarGrid_.radiusBins;
  }
  return {cartGrid_.width / 2.0 + rho * std::cos(theta),
          cartGrid_.height / 2.0 + rho * std::sin(theta)};
}

PhasorVector FrameTransform::toPolar(const PhasorVector& v) const {
  if (materialized()) return *toPolarMatrix_ * v;
  const Eigen::MatrixXcd cartImage = cartPixels_->decodeComplex(v);
  const Eigen::VectorXcd flat = Eigen::Map<const Eigen::VectorXcd>(cartImage.data(), cartImage.size());
  const Eigen::VectorXcd polarFlat = cartToPolarC_ * flat;
  const Eigen::MatrixXcd polarImage =
      Eigen::Map<const Eigen::MatrixXcd>(polarFlat.data(), polarGrid_.angleBins, polarGrid_.radiusBins);
  return polarPixels_->encodeComplex(polarImage);
}

PhasorVector FrameTransform::toCartesian(const PhasorVector& v) const {
  if (materialized()) return *toCartesianMatrix_ * v;
  const Eigen::MatrixXcd polarImage = polarPixels_->decodeComplex(v);
  const Eigen::VectorXcd flat = Eigen::Map<const Eigen::VectorXcd>(polarImage.data(), polarImage.size());
  const Eigen::VectorXcd cartFlat = polarToCartC_ * flat;
  const Eigen::MatrixXcd cartImage =
      Eigen::Map<const Eigen::MatrixXcd>(cartFlat.data(), cartGrid_.height, cartGrid_.width);
  return cartPixels_->encodeComplex(cartImage);
}

PhasorVector FrameTransform::convert(const PhasorVector& v, FrameDirection direction) const {
  return direction == FrameDirection::ToPolar ? toPolar(v) : toCartesian(v);
}

void FrameTransform::materializeMatrices() {
  if (materialized()) return;
  const Eigen::MatrixXcd phiC = cartPixels_->materializeMatrix();
  const Eigen::MatrixXcd phiP = polarPixels_->materializeMatrix();
  const double nc = static_cast<double>(cartPixels_->dim());
  const double np = static_cast<double>(polarPixels_->dim());
  toPolarMatrix_ = phiP * (cartToPolar_.cast<Complex>() * phiC.adjoint()) / nc;
  toCartesianMatrix_ = phiC * (polarToCart_.cast<Complex>() * phiP.adjoint()) / np;
}

const Eigen::MatrixXcd& FrameTransform::toPolarMatrix() const {
  if (!materialized()) throw std::logic_error("FrameTransform: matrices not materialized");
  return *toPolarMatrix_;
}

const Eigen::MatrixXcd& FrameTransform::toCartesianMatrix() const {
  if (!materialized()) throw std::logic_error("FrameTransform: matrices not materialized");
  return *toCartesianMatrix_;
}

std::shared_ptr<FrameTransform> buildFrameTransform(const CodebookSet& set) {
  return std::make_shared<FrameTransform>(set.cartGrid, set.polarGrid, set.cartPixels,
                                          set.polarPixels);
}

}  // namespace hrnvo
