#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>

#include "hrnvo/fft.hpp"
#include "hrnvo/phasor.hpp"
#include "hrnvo/rng.hpp"

namespace hrnvo {

enum class CodebookKind { Dft, Random };

// Cartesian image grid, pixels.
struct GridSpec {
  int width = 0;
  int height = 0;
  int pixels() const { return width * height; }
};

// Polar bin grid. The angle axis is periodic with period angleBins; the
// radius axis spans (0, maxRadius] with linear spacing by default.
struct PolarGridSpec {
  int angleBins = 360;
  int radiusBins = 32;
  double maxRadius = 0.0;  // 0 = resolve to min(W,H)/2 against a Cartesian grid
  bool logRadius = false;
  int bins() const { return angleBins * radiusBins; }
};

// FPE codebook for one axis: column j = fracPow(seed, exponents[j]).
// For lattice seeds (dft axes and periodic angle seeds) every entry's phase
// is -2*pi*freq[j]/period, which enables FFT cleanup below.
struct Codebook {
  std::string axisName;
  PhasorVector seed;
  Eigen::VectorXd exponents;  // uniform integer grid
  Eigen::MatrixXcd matrix;    // n x size(), column j = fracPow(seed, exponents[j])
  CodebookKind kind = CodebookKind::Random;
  int period = 0;  // exponent-units period of the seed lattice; 0 = aperiodic

  // FFT cleanup support: per-entry frequency index on the period-P lattice.
  // Empty when the seed phases are not lattice-valued.
  Eigen::VectorXi freq;
  std::shared_ptr<const Fft1d> fft;

  Eigen::Index dim() const { return seed.size(); }
  Eigen::Index size() const { return exponents.size(); }
  double exponentStart() const { return exponents.size() ? exponents[0] : 0.0; }
  double exponentStep() const {
    return exponents.size() > 1 ? exponents[1] - exponents[0] : 1.0;
  }
};

// Column j = fracPow(seed, exponents[j]); validates lattice metadata.
Codebook makeCodebook(std::string axisName, const PhasorVector& seed,
                      const Eigen::VectorXd& exponents, CodebookKind kind, int period,
                      Eigen::VectorXi freq = {});

// Re(matrix^dagger x) / n: similarity of x with every codebook column.
CoefficientVector decodeAgainst(const Codebook& cb, const PhasorVector& x);

// matrix * c: superposition of codebook columns with the given weights.
PhasorVector encodeCoefficients(const Codebook& cb, const CoefficientVector& c);

// The pixel codebook Phi, stored implicitly through its two axis factors:
// the vector for pixel (row r, col c) is bind(rowAxis.col(r), colAxis.col(c)).
// encode computes Phi*I and decode Re(Phi^dagger v)/n without materializing
// the n x (rows*cols) matrix; for dft axes both go through a 2-D FFT.
class PixelCodebook {
 public:
  PixelCodebook(Codebook rowAxis, Codebook colAxis, bool dftLayout);

  Eigen::Index dim() const { return rowAxis_.dim(); }
  int rows() const { return static_cast<int>(rowAxis_.size()); }
  int cols() const { return static_cast<int>(colAxis_.size()); }
  const Codebook& rowAxis() const { return rowAxis_; }
  const Codebook& colAxis() const { return colAxis_; }
  bool usesFft() const { return fft_ != nullptr; }

  PhasorVector encode(const Eigen::MatrixXd& image) const;
  PhasorVector encodeComplex(const Eigen::MatrixXcd& image) const;
  Eigen::MatrixXd decode(const PhasorVector& v) const;
  Eigen::MatrixXcd decodeComplex(const PhasorVector& v) const;

  PhasorVector column(int row, int col) const;
  // Full Phi as a dense matrix, pixel-index-major (r + c*rows). Intended
  // for small grids and structural tests only.
  Eigen::MatrixXcd materializeMatrix() const;

 private:
  Codebook rowAxis_;
  Codebook colAxis_;
  std::shared_ptr<const Fft2d> fft_;  // set iff the canonical dft layout holds
};

// s = Phi * I. Image must be rows() x cols(); entries are event counts or
// binary occupancy.
PhasorVector encodeImage(const PixelCodebook& pixels, const Eigen::MatrixXd& image);

// Re(Phi^dagger v) / n per pixel. Exact inverse of encodeImage for dft
// codebooks.
Eigen::MatrixXd decodeImage(const PixelCodebook& pixels, const PhasorVector& v);

struct CartesianCodebooks {
  Codebook h;  // x axis, exponents 0..W-1
  Codebook v;  // y axis, exponents 0..H-1
  std::shared_ptr<const PixelCodebook> pixels;
};

struct PolarCodebooks {
  Codebook angle;   // periodic axis, exponents 0..angleBins-1
  Codebook radius;  // exponents 0..radiusBins-1
  std::shared_ptr<const PixelCodebook> bins;
};

// kind=dft requires n == width*height and produces the exact 2-D DFT
// matrix as the pixel codebook; kind=random draws both seeds from rng.
CartesianCodebooks buildCartesianCodebooks(const GridSpec& grid, Eigen::Index n,
                                           CodebookKind kind, Rng& rng);

// The angle seed is always lattice-valued with period angleBins so that
// rotation wraps; the radius seed is a plain FPE axis for kind=random.
PolarCodebooks buildPolarCodebooks(const PolarGridSpec& grid, Eigen::Index n,
                                   CodebookKind kind, Rng& rng);

// Derive a shift-cleanup codebook over a centered exponent grid
// (-floor(M/2) .. ceil(M/2)-1) from an axis codebook. For dft axes this is
// a column permutation of the original book.
Codebook makeCenteredShiftCodebook(const Codebook& axis);

// Everything the tracking pipeline needs, immutable after construction.
struct CodebookSet {
  GridSpec cartGrid;
  PolarGridSpec polarGrid;
  CodebookKind kind = CodebookKind::Dft;
  std::uint64_t rngSeed = 0;

  Codebook hAxis, vAxis;    // pixel-role axis books (exponents from 0)
  Codebook hShift, vShift;  // centered cleanup books for the resonator
  Codebook angle, radius;
  std::shared_ptr<const PixelCodebook> cartPixels;
  std::shared_ptr<const PixelCodebook> polarPixels;

  double degreesPerAngleBin() const { return 360.0 / polarGrid.angleBins; }
};

// nCart/nPolar of 0 default to the respective pixel counts (mandatory for
// kind=dft). Seed draws happen in a fixed order, so the set is a pure
// function of its arguments.
CodebookSet buildCodebookSet(const GridSpec& cartGrid, const PolarGridSpec& polarGrid,
                             CodebookKind kind, std::uint64_t rngSeed, Eigen::Index nCart = 0,
                             Eigen::Index nPolar = 0);

}  // namespace hrnvo
