#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "bipara/dyadic.hpp"
#include "bipara/signal.hpp"

namespace bipara {

// Haar convention: h_I = |I|^{-1/2} (chi_left(I) - chi_right(I)).

/// Coordinates of a 1D signal: the mean over [0,1) and <f, h_I> for every
/// interval with level < N, stored level-major.
struct HaarCoeffs1D {
  Grid1D grid;
  double mean = 0.0;
  std::vector<double> detail;

  HaarCoeffs1D() = default;
  HaarCoeffs1D(Grid1D grid_, double mean_, std::vector<double> detail_);
  /// All-zero coefficients.
  explicit HaarCoeffs1D(Grid1D grid_);

  double at(const DyadicInterval& i) const { return detail[node_index(i)]; }
  double& at(const DyadicInterval& i) { return detail[node_index(i)]; }
};

/// Tensor Haar coordinates split by cancellation pattern per axis:
///   cc[I,J] = <f, h_I (x) h_J>, cm[I] = <f, h_I (x) 1>, mc[J] = <f, 1 (x) h_J>, mm = <f>.
/// cc is stored as node_index(I) * (2^n2 - 1) + node_index(J).
struct HaarCoeffs2D {
  Grid2D grid;
  std::vector<double> cc;
  std::vector<double> cm;
  std::vector<double> mc;
  double mm = 0.0;

  HaarCoeffs2D() = default;
  explicit HaarCoeffs2D(Grid2D grid_);
  HaarCoeffs2D(Grid2D grid_, std::vector<double> cc_, std::vector<double> cm_,
               std::vector<double> mc_, double mm_);

  std::size_t cc_index(const DyadicInterval& i, const DyadicInterval& j) const {
    return node_index(i) * node_count(grid.n2) + node_index(j);
  }
  double at(const DyadicRectangle& r) const { return cc[cc_index(r.ix, r.iy)]; }
  double& at(const DyadicRectangle& r) { return cc[cc_index(r.ix, r.iy)]; }

  /// Copy keeping only the cc block.
  HaarCoeffs2D cancellative_part() const;
};

enum class Axis { X, Y };

/// One-variable coefficient slices of a 2D signal. For axis Y, slice J is
/// f_J(x) = <f(x, .), h_J> and `mean_slice` is x -> <f(x, .)>; axis X is the
/// mirror image (functions of y).
struct SliceCoeffs {
  Axis axis = Axis::Y;
  Grid2D grid;
  std::vector<Signal1D> slices;
  Signal1D mean_slice;

  const Signal1D& at(const DyadicInterval& i) const { return slices[node_index(i)]; }
};

HaarCoeffs1D haar_forward_1d(const Signal1D& f);
Signal1D haar_inverse_1d(const HaarCoeffs1D& c);
HaarCoeffs2D haar_forward_2d(const Signal2D& f);
Signal2D haar_inverse_2d(const HaarCoeffs2D& c);
SliceCoeffs slice_transform(const Signal2D& f, Axis axis);
/// Inverse of slice_transform.
Signal2D reassemble(const SliceCoeffs& s);

/// h_I on a 1D grid, h_I (x) h_J on a 2D grid.
Signal1D haar_function(Grid1D grid, const DyadicInterval& i);
Signal2D haar_function(Grid2D grid, const DyadicRectangle& r);
/// chi_I and chi_R.
Signal1D indicator(Grid1D grid, const DyadicInterval& i);
Signal2D indicator(Grid2D grid, const DyadicRectangle& r);

/// Separable building blocks on raw cell arrays of length 2^n.
namespace kernel {

/// Averages over every dyadic interval of level 0..n, level-major
/// (2^{n+1} - 1 entries; the last 2^n are the cells themselves).
std::vector<double> pyramid_averages(std::span<const double> cells, int n);
/// <f>_I for level < n.
std::vector<double> node_averages(std::span<const double> cells, int n);
/// <f, h_I> for level < n.
std::vector<double> node_details(std::span<const double> cells, int n);
/// sum_I c_I h_I evaluated on cells.
std::vector<double> synthesize_details(std::span<const double> coeffs, int n);
/// sum_I c_I chi_I / |I| evaluated on cells.
std::vector<double> synthesize_averages(std::span<const double> coeffs, int n);
/// [mean, details...] packed into 2^n entries, and its inverse.
std::vector<double> haar_analyze(std::span<const double> cells, int n);
std::vector<double> haar_synthesize(std::span<const double> packed, int n);

/// Per cell, sum of c_I over the intervals I (level < n) containing it.
std::vector<double> ancestor_sums(std::span<const double> coeffs, int n);
/// Per cell, max of |a_I| over a full pyramid (levels 0..n) of intervals containing it.
std::vector<double> ancestor_max(std::span<const double> pyramid, int n);
/// For nodes of level < n, the sum of c over the node and all its descendants.
std::vector<double> subtree_sums(std::span<const double> coeffs, int n);
/// Pyramid (levels 0..n) of minima over each interval.
std::vector<double> pyramid_min(std::span<const double> cells, int n);

/// Applies `fn` to each of `rows` contiguous rows of length `cols`.
template <class Fn>
std::vector<double> map_rows(std::span<const double> a, std::size_t rows, std::size_t cols, Fn&& fn) {
  std::vector<double> out;
  std::size_t out_cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row = fn(a.subspan(r * cols, cols));
    if (r == 0) {
      out_cols = row.size();
      out.resize(rows * out_cols);
    }
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * out_cols));
  }
  return out;
}

/// Applies `fn` to each column of a row-major rows x cols array.
template <class Fn>
std::vector<double> map_columns(std::span<const double> a, std::size_t rows, std::size_t cols, Fn&& fn) {
  std::vector<double> column(rows);
  std::vector<double> out;
  std::size_t out_rows = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = a[r * cols + c];
    std::vector<double> res = fn(std::span<const double>(column));
    if (c == 0) {
      out_rows = res.size();
      out.resize(out_rows * cols);
    }
    for (std::size_t r = 0; r < out_rows; ++r) out[r * cols + c] = res[r];
  }
  return out;
}

}  // namespace kernel

}  // namespace bipara
