#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>

#include "hrnvo/codebooks.hpp"

namespace hrnvo {

enum class FrameDirection { ToPolar, ToCartesian };

// Linear map between the Cartesian-frame and polar-frame VSA vectors:
//   toPolar     = Phi_p * S_cp * Phi_c^dagger / N_c
//   toCartesian = Phi_c * S_pc * Phi_p^dagger / N_p
// where S_cp / S_pc hold bilinear resampling weights between the pixel
// grids about the image center. Applied as a decode -> resample -> encode
// pipeline by default; the dense matrices can be materialized for small
// grids and are bit-equal to the pipeline up to floating rounding.
class FrameTransform {
 public:
  FrameTransform(const GridSpec& cartGrid, const PolarGridSpec& polarGrid,
                 std::shared_ptr<const PixelCodebook> cartPixels,
                 std::shared_ptr<const PixelCodebook> polarPixels);

  const GridSpec& cartGrid() const { return cartGrid_; }
  const PolarGridSpec& polarGrid() const { return polarGrid_; }

  PhasorVector toPolar(const PhasorVector& v) const;
  PhasorVector toCartesian(const PhasorVector& v) const;
  PhasorVector convert(const PhasorVector& v, FrameDirection direction) const;

  // Image-space resamplers; rows follow the column-major pixel flattening.
  const Eigen::SparseMatrix<double>& cartToPolarWeights() const { return cartToPolar_; }
  const Eigen::SparseMatrix<double>& polarToCartWeights() const { return polarToCart_; }

  // Build the dense matrices via the explicit product above. Quadratic
  // memory in the grid sizes; intended for small grids and caching.
  void materializeMatrices();
  bool materialized() const { return toPolarMatrix_.has_value(); }
  const Eigen::MatrixXcd& toPolarMatrix() const;
  const Eigen::MatrixXcd& toCartesianMatrix() const;

  // Polar bin center in Cartesian pixel coordinates (testing hook).
  Eigen::Vector2d polarBinCenter(int angleBin, int radiusBin) const;

 private:
  GridSpec cartGrid_;
  PolarGridSpec polarGrid_;
  std::shared_ptr<const PixelCodebook> cartPixels_;
  std::shared_ptr<const PixelCodebook> polarPixels_;
  Eigen::SparseMatrix<double> cartToPolar_;  // (angleBins*radiusBins) x (W*H)
  Eigen::SparseMatrix<double> polarToCart_;  // (W*H) x (angleBins*radiusBins)
  Eigen::SparseMatrix<Complex> cartToPolarC_;
  Eigen::SparseMatrix<Complex> polarToCartC_;
  std::optional<Eigen::MatrixXcd> toPolarMatrix_;
  std::optional<Eigen::MatrixXcd> toCartesianMatrix_;
};

// Validates the polar grid against the Cartesian one (maxRadius must not
// exceed half the image diagonal) and assembles the transform.
std::shared_ptr<FrameTransform> buildFrameTransform(const CodebookSet& set);

}  // namespace hrnvo
