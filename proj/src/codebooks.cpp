#include "hrnvo/codebooks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hrnvo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PhasorVector latticeSeed(const Eigen::VectorXi& freq, int period) {
  PhasorVector seed(freq.size());
  for (Eigen::Index j = 0; j < freq.size(); ++j) {
    const double phi = -kTwoPi * freq[j] / period;
    seed[j] = Complex(std::cos(phi), std::sin(phi));
  }
  return seed;
}

// Map an integer exponent onto [0, period).
inline int wrapExponent(long e, int period) {
  long m = e % period;
  if (m < 0) m += period;
  return static_cast<int>(m);
}

bool integerExponents(const Eigen::VectorXd& exponents) {
  for (Eigen::Index i = 0; i < exponents.size(); ++i)
    if (exponents[i] != std::floor(exponents[i])) return false;
  return true;
}

}  // namespace

Codebook makeCodebook(std::string axisName, const PhasorVector& seed,
                      const Eigen::VectorXd& exponents, CodebookKind kind, int period,
                      Eigen::VectorXi freq) {
  if (seed.size() < 1) throw std::invalid_argument("makeCodebook: empty seed");
  if (exponents.size() < 1) throw std::invalid_argument("makeCodebook: empty exponent grid");
  Codebook cb;
  cb.axisName = std::move(axisName);
  cb.seed = seed;
  cb.exponents = exponents;
  cb.kind = kind;
  cb.period = period;
  cb.matrix.resize(seed.size(), exponents.size());
  for (Eigen::Index j = 0; j < exponents.size(); ++j) cb.matrix.col(j) = fracPow(seed, exponents[j]);
  if (freq.size() > 0) {
    if (freq.size() != seed.size() || period <= 0)
      throw std::invalid_argument("makeCodebook: bad lattice metadata");
    cb.freq = std::move(freq);
    if (integerExponents(exponents)) cb.fft = std::make_shared<Fft1d>(period);
  }
  return cb;
}

CoefficientVector decodeAgainst(const Codebook& cb, const PhasorVector& x) {
  if (x.size() != cb.dim()) throw std::invalid_argument("decodeAgainst: dimension mismatch");
  const double n = static_cast<double>(cb.dim());
  if (cb.fft) {
    // Fold entries by lattice frequency, one inverse transform, then read
    // the profile at each exponent. Identical to Re(matrix^dagger x)/n.
    const int p = cb.period;
    Eigen::VectorXcd folded = Eigen::VectorXcd::Zero(p);
    for (Eigen::Index j = 0; j < x.size(); ++j) folded[cb.freq[j]] += x[j];
    Eigen::VectorXcd spectrum(p);
    cb.fft->backward(folded.data(), spectrum.data());
    CoefficientVector out(cb.size());
    for (Eigen::Index a = 0; a < cb.size(); ++a)
      out[a] = spectrum[wrapExponent(static_cast<long>(cb.exponents[a]), p)].real() / n;
    return out;
  }
  return (cb.matrix.adjoint() * x).real() / n;
}

PhasorVector encodeCoefficients(const Codebook& cb, const CoefficientVector& c) {
  if (c.size() != cb.size()) throw std::invalid_argument("encodeCoefficients: size mismatch");
  if (cb.fft) {
    const int p = cb.period;
    Eigen::VectorXcd packed = Eigen::VectorXcd::Zero(p);
    for (Eigen::Index a = 0; a < cb.size(); ++a)
      packed[wrapExponent(static_cast<long>(cb.exponents[a]), p)] += c[a];
    Eigen::VectorXcd spectrum(p);
    cb.fft->forward(packed.data(), spectrum.data());
    PhasorVector out(cb.dim());
    for (Eigen::Index j = 0; j < cb.dim(); ++j) out[j] = spectrum[cb.freq[j]];
    return out;
  }
  return cb.matrix * c;
}

PixelCodebook::PixelCodebook(Codebook rowAxis, Codebook colAxis, bool dftLayout)
    : rowAxis_(std::move(rowAxis)), colAxis_(std::move(colAxis)) {
  if (rowAxis_.dim() != colAxis_.dim())
    throw std::invalid_argument("PixelCodebook: axis dimensions differ");
  if (dftLayout) fft_ = std::make_shared<Fft2d>(rows(), cols());
}

PhasorVector PixelCodebook::encodeComplex(const Eigen::MatrixXcd& image) const {
  if (image.rows() != rows() || image.cols() != cols())
    throw std::invalid_argument("encode: image dimensions do not match grid");
  if (fft_) {
    PhasorVector out(dim());
    fft_->forward(image.data(), out.data());
    return out;
  }
  // s = sum_c (rowMatrix * image.col(c)) .* colMatrix.col(c)
  const Eigen::MatrixXcd t = rowAxis_.matrix * image;
  return (t.array() * colAxis_.matrix.array()).rowwise().sum();
}

PhasorVector PixelCodebook::encode(const Eigen::MatrixXd& image) const {
  return encodeComplex(image.cast<Complex>());
}

Eigen::MatrixXcd PixelCodebook::decodeComplex(const PhasorVector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("decode: dimension mismatch");
  const double n = static_cast<double>(dim());
  if (fft_) {
    Eigen::MatrixXcd image(rows(), cols());
    fft_->backward(v.data(), image.data());
    return image / n;
  }
  // Phi^dagger v = rowMatrix^dagger * diag(v) * conj(colMatrix)
  const Eigen::MatrixXcd scaled = v.asDiagonal() * colAxis_.matrix.conjugate();
  return (rowAxis_.matrix.adjoint() * scaled) / n;
}

Eigen::MatrixXd PixelCodebook::decode(const PhasorVector& v) const {
  return decodeComplex(v).real();
}

PhasorVector PixelCodebook::column(int row, int col) const {
  if (row < 0 || row >= rows() || col < 0 || col >= cols())
    throw std::invalid_argument("PixelCodebook::column: index out of range");
  return rowAxis_.matrix.col(row).cwiseProduct(colAxis_.matrix.col(col));
}

Eigen::MatrixXcd PixelCodebook::materializeMatrix() const {
  Eigen::MatrixXcd phi(dim(), static_cast<Eigen::Index>(rows()) * cols());
  for (int c = 0; c < cols(); ++c)
    for (int r = 0; r < rows(); ++r)
      phi.col(r + static_cast<Eigen::Index>(c) * rows()) = column(r, c);
  return phi;
}

PhasorVector encodeImage(const PixelCodebook& pixels, const Eigen::MatrixXd& image) {
  return pixels.encode(image);
}

Eigen::MatrixXd decodeImage(const PixelCodebook& pixels, const PhasorVector& v) {
  return pixels.decode(v);
}

CartesianCodebooks buildCartesianCodebooks(const GridSpec& grid, Eigen::Index n,
                                           CodebookKind kind, Rng& rng) {
  if (grid.width < 2 || grid.height < 2)
    throw std::invalid_argument("buildCartesianCodebooks: grid dimensions must be >= 2");
  const Eigen::VectorXd hExp = Eigen::VectorXd::LinSpaced(grid.width, 0, grid.width - 1);
  const Eigen::VectorXd vExp = Eigen::VectorXd::LinSpaced(grid.height, 0, grid.height - 1);

  CartesianCodebooks out;
  if (kind == CodebookKind::Dft) {
    if (n != grid.pixels())
      throw std::invalid_argument("buildCartesianCodebooks: dft requires n == width*height");
    Eigen::VectorXi hFreq(n), vFreq(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      vFreq[j] = static_cast<int>(j % grid.height);
      hFreq[j] = static_cast<int>(j / grid.height);
    }
    out.h = makeCodebook("h", latticeSeed(hFreq, grid.width), hExp, kind, grid.width, hFreq);
    out.v = makeCodebook("v", latticeSeed(vFreq, grid.height), vExp, kind, grid.height, vFreq);
    out.pixels = std::make_shared<PixelCodebook>(out.v, out.h, true);
  } else {
    if (n < 1) throw std::invalid_argument("buildCartesianCodebooks: n must be >= 1");
    out.h = makeCodebook("h", randomSeed(n, rng), hExp, kind, 0);
    out.v = makeCodebook("v", randomSeed(n, rng), vExp, kind, 0);
    out.pixels = std::make_shared<PixelCodebook>(out.v, out.h, false);
  }
  return out;
}

PolarCodebooks buildPolarCodebooks(const PolarGridSpec& grid, Eigen::Index n,
                                   CodebookKind kind, Rng& rng) {
  if (grid.angleBins < 2 || grid.radiusBins < 2)
    throw std::invalid_argument("buildPolarCodebooks: grid dimensions must be >= 2");
  const Eigen::VectorXd aExp = Eigen::VectorXd::LinSpaced(grid.angleBins, 0, grid.angleBins - 1);
  const Eigen::VectorXd rExp = Eigen::VectorXd::LinSpaced(grid.radiusBins, 0, grid.radiusBins - 1);

  PolarCodebooks out;
  if (kind == CodebookKind::Dft) {
    if (n != grid.bins())
      throw std::invalid_argument("buildPolarCodebooks: dft requires n == angleBins*radiusBins");
    Eigen::VectorXi aFreq(n), rFreq(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      aFreq[j] = static_cast<int>(j % grid.angleBins);
      rFreq[j] = static_cast<int>(j / grid.angleBins);
    }
    out.angle =
        makeCodebook("angle", latticeSeed(aFreq, grid.angleBins), aExp, kind, grid.angleBins, aFreq);
    out.radius =
        makeCodebook("radius", latticeSeed(rFreq, grid.radiusBins), rExp, kind, grid.radiusBins, rFreq);
    out.bins = std::make_shared<PixelCodebook>(out.angle, out.radius, true);
  } else {
    if (n < 1) throw std::invalid_argument("buildPolarCodebooks: n must be >= 1");
    // Angle phases stay on the 2*pi/angleBins lattice so rotation wraps.
    const PhasorVector angleSeed = periodicSeed(n, grid.angleBins, rng);
    Eigen::VectorXi aFreq(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double k = std::arg(angleSeed[j]) / kTwoPi * grid.angleBins;
      aFreq[j] = wrapExponent(-static_cast<long>(std::llround(k)), grid.angleBins);
    }
    out.angle = makeCodebook("angle", angleSeed, aExp, kind, grid.angleBins, aFreq);
    out.radius = makeCodebook("radius", randomSeed(n, rng), rExp, kind, 0);
    out.bins = std::make_shared<PixelCodebook>(out.angle, out.radius, false);
  }
  return out;
}

Codebook makeCenteredShiftCodebook(const Codebook& axis) {
  const Eigen::Index m = axis.size();
  const double start = -std::floor(static_cast<double>(m) / 2.0);
  const Eigen::VectorXd exponents = Eigen::VectorXd::LinSpaced(m, start, start + m - 1);
  return makeCodebook(axis.axisName + "_shift", axis.seed, exponents, axis.kind, axis.period,
                      axis.freq);
}

CodebookSet buildCodebookSet(const GridSpec& cartGrid, const PolarGridSpec& polarGrid,
                             CodebookKind kind, std::uint64_t rngSeed, Eigen::Index nCart,
                             Eigen::Index nPolar) {
  CodebookSet set;
  set.cartGrid = cartGrid;
  set.polarGrid = polarGrid;
  if (set.polarGrid.maxRadius <= 0.0)
    set.polarGrid.maxRadius = std::min(cartGrid.width, cartGrid.height) / 2.0;
  set.kind = kind;
  set.rngSeed = rngSeed;
  if (nCart == 0) nCart = cartGrid.pixels();
  if (nPolar == 0) nPolar = set.polarGrid.bins();

  Rng rng(rngSeed);
  auto cart = buildCartesianCodebooks(cartGrid, nCart, kind, rng);
  auto polar = buildPolarCodebooks(set.polarGrid, nPolar, kind, rng);
  set.hAxis = std::move(cart.h);
  set.vAxis = std::move(cart.v);
  set.cartPixels = std::move(cart.pixels);
  set.hShift = makeCenteredShiftCodebook(set.hAxis);
  set.vShift = makeCenteredShiftCodebook(set.vAxis);
  set.angle = std::move(polar.angle);
  set.radius = std::move(polar.radius);
  set.polarPixels = std::move(polar.bins);
  return set;
}

}  // namespace hrnvo
