#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hrnvo/cache_io.hpp"
#include "hrnvo/codebooks.hpp"

using namespace hrnvo;

namespace {

double maxAbs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("dft pixel codebook is orthogonal and has an all-ones origin column") {
  Rng rng(1);
  const GridSpec grid{4, 4};
  const auto books = buildCartesianCodebooks(grid, 16, CodebookKind::Dft, rng);
  const Eigen::MatrixXcd phi = books.pixels->materializeMatrix();
  const Eigen::MatrixXcd gram = phi.adjoint() * phi;
  CHECK(maxAbs(gram - 16.0 * Eigen::MatrixXcd::Identity(16, 16)) < 1e-9);
  // Pixel (0, 0) has zero exponents on both axes.
  CHECK(maxAbs(books.pixels->column(0, 0) - PhasorVector::Constant(16, Complex(1, 0))) < 1e-12);

  CHECK_THROWS_AS(buildCartesianCodebooks(grid, 17, CodebookKind::Dft, rng),
                  std::invalid_argument);
}

TEST_CASE("axis codebooks satisfy the stated column law") {
  Rng rng(2);
  const GridSpec grid{8, 6};
  for (CodebookKind kind : {CodebookKind::Dft, CodebookKind::Random}) {
    const auto books =
        buildCartesianCodebooks(grid, kind == CodebookKind::Dft ? 48 : 100, kind, rng);
    for (const Codebook* cb : {&books.h, &books.v}) {
      for (Eigen::Index j = 0; j < cb->size(); ++j)
        CHECK(maxAbs(cb->matrix.col(j) - fracPow(cb->seed, cb->exponents[j])) < 1e-12);
    }
  }
}

TEST_CASE("encodeImage matches the event-sum formulation") {
  Rng rng(3);
  const GridSpec grid{64, 48};
  const auto books = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Dft, rng);

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(48, 64);
  CHECK(encodeImage(*books.pixels, zero).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd single = zero;
  single(20, 11) = 1.0;  // (x, y) = (11, 20)
  const PhasorVector sSingle = encodeImage(*books.pixels, single);
  const PhasorVector expected =
      hrnvo::bind(fracPow(books.h.seed, 11.0), fracPow(books.v.seed, 20.0));
  CHECK((sSingle - expected).cwiseAbs().maxCoeff() < 1e-9);

  // Three-event package: the composite equals the bundle of bound pairs.
  const int events[3][2] = {{27, 24}, {39, 43}, {28, 38}};
  Eigen::MatrixXd three = zero;
  PhasorVector sum = PhasorVector::Zero(grid.pixels());
  for (const auto& e : events) {
    three(e[1], e[0]) = 1.0;
    sum += hrnvo::bind(fracPow(books.h.seed, e[0]), fracPow(books.v.seed, e[1]));
  }
  CHECK((encodeImage(*books.pixels, three) - sum).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("dft decode is the exact inverse of encode") {
  Rng rng(4);
  const GridSpec grid{16, 12};
  const auto books = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Dft, rng);
  Eigen::MatrixXd image = Eigen::MatrixXd::Zero(12, 16);
  image(3, 7) = 1.0;
  image(10, 2) = 1.0;
  image(0, 15) = 1.0;
  const Eigen::MatrixXd decoded = decodeImage(*books.pixels, encodeImage(*books.pixels, image));
  CHECK((decoded - image).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("random codebook thresholded decode recovers sparse images") {
  Rng rng(5);
  const GridSpec grid{32, 24};
  const auto books = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Random, rng);
  int totalPixels = 0, correctPixels = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd image = Eigen::MatrixXd::Zero(24, 32);
    const int setCount = grid.pixels() / 20;  // 5% density
    for (int i = 0; i < setCount; ++i)
      image(rng.uniformInt(24), rng.uniformInt(32)) = 1.0;
    const Eigen::MatrixXd decoded = decodeImage(*books.pixels, encodeImage(*books.pixels, image));
    const Eigen::MatrixXd recovered = (decoded.array() > 0.5).cast<double>();
    totalPixels += grid.pixels();
    correctPixels += static_cast<int>((recovered.array() == image.array()).count());
  }
  CHECK(static_cast<double>(correctPixels) / totalPixels >= 0.99);
}

TEST_CASE("integer shifts act by binding with fractional powers (Fourier shift theorem)") {
  Rng rng(6);
  const GridSpec grid{16, 12};
  const auto books = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Dft, rng);
  Eigen::MatrixXd image = Eigen::MatrixXd::Zero(12, 16);
  image(2, 3) = 1.0;
  image(8, 14) = 1.0;

  const int dx = 3, dy = 5;
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Zero(12, 16);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x)
      if (image(y, x) > 0) shifted((y + dy) % 12, (x + dx) % 16) = 1.0;

  const PhasorVector viaBinding =
      hrnvo::bind(encodeImage(*books.pixels, image),
                  hrnvo::bind(fracPow(books.h.seed, dx), fracPow(books.v.seed, dy)));
  const PhasorVector direct = encodeImage(*books.pixels, shifted);
  CHECK((viaBinding - direct).cwiseAbs().maxCoeff() < 1e-9);

  const Eigen::MatrixXd decoded = decodeImage(*books.pixels, viaBinding);
  CHECK((decoded - shifted).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fft cleanup path agrees with the matrix route") {
  Rng rng(7);
  const GridSpec grid{16, 12};
  const auto books = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Dft, rng);
  const Codebook centered = makeCenteredShiftCodebook(books.h);
  REQUIRE(centered.fft != nullptr);

  const PhasorVector x = randomSeed(grid.pixels(), rng);
  const CoefficientVector fast = decodeAgainst(centered, x);
  const CoefficientVector direct = (centered.matrix.adjoint() * x).real() / grid.pixels();
  CHECK((fast - direct).cwiseAbs().maxCoeff() < 1e-10);

  CoefficientVector c(centered.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.uniform() - 0.3;
  const PhasorVector encFast = encodeCoefficients(centered, c);
  const PhasorVector encDirect = centered.matrix * c;
  CHECK((encFast - encDirect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fft pixel path agrees with the generic matrix path") {
  Rng rng(8);
  const GridSpec grid{12, 10};
  const auto fftBooks = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Dft, rng);
  REQUIRE(fftBooks.pixels->usesFft());
  // Same axis codebooks, forced through the generic path.
  const PixelCodebook generic(fftBooks.pixels->rowAxis(), fftBooks.pixels->colAxis(), false);

  Eigen::MatrixXcd image(10, 12);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 12; ++x) image(y, x) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);

  const PhasorVector a = fftBooks.pixels->encodeComplex(image);
  const PhasorVector b = generic.encodeComplex(image);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);

  const Eigen::MatrixXcd da = fftBooks.pixels->decodeComplex(a);
  const Eigen::MatrixXcd db = generic.decodeComplex(a);
  CHECK(maxAbs(da - db) < 1e-12);
}

TEST_CASE("polar codebooks wrap on the angle axis") {
  Rng rng(9);
  PolarGridSpec polar;
  polar.angleBins = 360;
  polar.radiusBins = 8;
  polar.maxRadius = 12.0;
  for (CodebookKind kind : {CodebookKind::Dft, CodebookKind::Random}) {
    const Eigen::Index n = kind == CodebookKind::Dft ? polar.bins() : 2000;
    const auto books = buildPolarCodebooks(polar, n, kind, rng);
    const PhasorVector wrapped = fracPow(books.angle.seed, 360.0);
    CHECK((wrapped - PhasorVector::Constant(n, Complex(1, 0))).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((books.angle.matrix.col(0) - PhasorVector::Constant(n, Complex(1, 0)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(books.angle.period == 360);
  }
}

TEST_CASE("centered shift codebook is a column permutation for dft axes") {
  Rng rng(10);
  const GridSpec grid{16, 12};
  const auto books = buildCartesianCodebooks(grid, grid.pixels(), CodebookKind::Dft, rng);
  const Codebook centered = makeCenteredShiftCodebook(books.h);
  CHECK(centered.exponentStart() == -8.0);
  // Column at exponent -5 equals the 0-based column at 16-5.
  const Eigen::Index colNeg5 = 3;  // exponents -8..7 -> index of -5
  CHECK(maxAbs(centered.matrix.col(colNeg5) - books.h.matrix.col(11)) < 1e-10);
  // Orthogonality is preserved.
  const Eigen::MatrixXcd gram = centered.matrix.adjoint() * centered.matrix;
  CHECK(maxAbs(gram - static_cast<double>(grid.pixels()) *
                          Eigen::MatrixXcd::Identity(16, 16)) < 1e-9);
}

TEST_CASE("codebook construction is deterministic under a fixed seed") {
  const GridSpec grid{8, 6};
  PolarGridSpec polar;
  polar.angleBins = 12;
  polar.radiusBins = 4;
  polar.maxRadius = 3.0;
  const CodebookSet a = buildCodebookSet(grid, polar, CodebookKind::Random, 99, 64, 48);
  const CodebookSet b = buildCodebookSet(grid, polar, CodebookKind::Random, 99, 64, 48);
  CHECK((a.hAxis.seed - b.hAxis.seed).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.radius.seed - b.radius.seed).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("codebook cache round-trips and rejects mismatched configs") {
  const auto dir = std::filesystem::temp_directory_path() / "hrnvo_cache_test";
  std::filesystem::remove_all(dir);

  const GridSpec grid{8, 6};
  PolarGridSpec polar;
  polar.angleBins = 12;
  polar.radiusBins = 4;
  polar.maxRadius = 3.0;
  const CodebookSet set = buildCodebookSet(grid, polar, CodebookKind::Random, 5, 64, 48);
  saveCodebookSetCache(dir, set);

  CodebookSet loaded;
  REQUIRE(loadCodebookSetCache(dir, grid, polar, CodebookKind::Random, 5, loaded, 64, 48));
  CHECK((loaded.hAxis.seed - set.hAxis.seed).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.angle.matrix - set.angle.matrix).cwiseAbs().maxCoeff() == 0.0);

  CodebookSet other;
  CHECK_FALSE(loadCodebookSetCache(dir, grid, polar, CodebookKind::Random, 6, other, 64, 48));

  CacheHeader header;
  const Eigen::MatrixXcd seed = readMatrixCache(dir / "seed_h.hrnc", header);
  CHECK(header.cartWidth == 8);
  CHECK(header.rngSeed == 5);
  CHECK(seed.rows() == 64);
  std::filesystem::remove_all(dir);
}
