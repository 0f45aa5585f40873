#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>

#include "hrnvo/codebooks.hpp"

namespace hrnvo {

// On-disk header for cached codebook / frame-transform matrices. Layout:
// magic "HRNVO1" (6 bytes), then the fields below in order, little-endian,
// then rows*cols complex entries as interleaved f64 (re, im) column-major.
struct CacheHeader {
  std::uint32_t cartWidth = 0;
  std::uint32_t cartHeight = 0;
  std::uint32_t angleBins = 0;
  std::uint32_t radiusBins = 0;
  std::uint64_t dimension = 0;  // VSA vector length n
  std::uint8_t kind = 0;        // CodebookKind
  std::uint64_t rngSeed = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;

  bool sameConfig(const CacheHeader& other) const {
    return cartWidth == other.cartWidth && cartHeight == other.cartHeight &&
           angleBins == other.angleBins && radiusBins == other.radiusBins &&
           dimension == other.dimension && kind == other.kind && rngSeed == other.rngSeed;
  }
};

void writeMatrixCache(const std::filesystem::path& file, const CacheHeader& header,
                      const Eigen::MatrixXcd& matrix);

Eigen::MatrixXcd readMatrixCache(const std::filesystem::path& file, CacheHeader& header);

// Per-axis seed files under dir; enough to rebuild the full set exactly.
void saveCodebookSetCache(const std::filesystem::path& dir, const CodebookSet& set);

// Rebuilds the set from cached seeds after verifying the header matches
// the requested configuration (nCart/nPolar of 0 default to the pixel
// counts). Returns false when the cache is absent or belongs to a
// different configuration.
bool loadCodebookSetCache(const std::filesystem::path& dir, const GridSpec& cartGrid,
                          const PolarGridSpec& polarGrid, CodebookKind kind,
                          std::uint64_t rngSeed, CodebookSet& out, Eigen::Index nCart = 0,
                          Eigen::Index nPolar = 0);

}  // namespace hrnvo
