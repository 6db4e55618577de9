#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bipara/signal.hpp"

namespace bipara {

/// gaussian: i.i.d. N(0,1) cc coefficients. sparse: a few random rectangles
/// carry N(0,1) coefficients. tensor: b(x) c(y) with i.i.d. detail coefficients.
/// All three have vanishing mean blocks.
enum class Distribution { Gaussian, Sparse, Tensor };

std::string_view distribution_name(Distribution d);
Distribution parse_distribution(std::string_view tag);

/// Deterministic in (d, grid, seed).
Signal2D random_signal(Distribution d, Grid2D grid, std::uint64_t seed);
Signal1D random_signal_1d(Distribution d, Grid1D grid, std::uint64_t seed);

struct CorpusEntry {
  std::string file;
  std::string sha256;
  std::uint64_t seed = 0;
};

/// Writes `count` signal JSON files plus manifest.json into `dir`; item i uses
/// derive_seed(seed, i). Requires count >= 1.
std::vector<CorpusEntry> generate_corpus(Distribution d, int count, std::uint64_t seed, Grid2D grid,
                                         const std::string& dir);

std::string sha256_hex(std::string_view bytes);

}  // namespace bipara
