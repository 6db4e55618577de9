#pragma once

#include <optional>
#include <vector>

#include "bipara/cells.hpp"
#include "bipara/signal.hpp"

namespace bipara {

/// A finite collection of distinct dyadic rectangles on a grid, optionally labelled.
struct RectFamily {
  Grid2D grid;
  std::vector<DyadicRectangle> rects;
  std::optional<std::vector<int>> labels;

  RectFamily() = default;
  RectFamily(Grid2D grid_, std::vector<DyadicRectangle> rects_,
             std::optional<std::vector<int>> labels_ = std::nullopt);

  std::size_t size() const { return rects.size(); }
  bool empty() const { return rects.empty(); }
  CellMask union_mask() const;
};

/// Rectangles with pairwise disjoint witness pieces E_R (cell index lists)
/// of density at least eta.
struct SparseFamily {
  RectFamily base;
  std::vector<std::vector<std::size_t>> witness;
  double eta = 0.5;
  /// |union of kept| / |union of input|, reported by sparse_extract.
  double union_ratio = 1.0;

  /// Exact check by integer cell counting. Each E_R lies in R with
  /// |E_R| >= eta |R|; distinct witnesses share no cell.
  bool verify() const;
};

enum class CarlesonMode { Exact, Restricted };

struct CarlesonEstimate {
  double value = 0.0;
  CellMask omega;  // maximizing open set
  bool exhaustive = false;
};

/// max over open sets of sum_{R in fam, R in Omega} |R| / |Omega|.
/// Exact mode enumerates unions of subfamilies (m <= 16) or all unions of
/// cells (N1 + N2 <= 4). Restricted mode enumerates subfamily unions when
/// m <= 16 and otherwise runs greedy ratio ascent.
CarlesonEstimate carleson_constant(const RectFamily& fam, CarlesonMode mode);

/// Greedy 1/2-sparse extraction in decreasing-measure order (ties broken
/// by (lx, kx, ly, ky)); R is kept when at least half of it is uncovered.
SparseFamily sparse_extract(const RectFamily& fam);

/// ||sum_R chi_R||_p / |union R|^{1/p}.
double jn_profile(const SparseFamily& sf, double p);

/// Maximal dyadic rectangles R with |<g>_R| > lambda; their union is
/// {strong_maximal_2d(g) > lambda}.
RectFamily level_set_rectangles(const Signal2D& g, double lambda);

/// Throws unless Omega_{i+1} is a subset of Omega_i with at most half its measure.
void validate_contracting(const Grid2D& grid, const std::vector<CellMask>& omegas);

/// m(g)(z) = max over i with z in Omega_i of <|g|>_{Omega_i}; zero outside Omega_0.
Signal2D contracting_family_maximal(const Signal2D& g, const std::vector<CellMask>& omegas);

}  // namespace bipara
