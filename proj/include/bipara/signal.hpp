#pragma once

#include <span>
#include <variant>
#include <vector>

#include "bipara/dyadic.hpp"

namespace bipara {

/// Piecewise-constant function on the finest cells of [0,1).
class Signal1D {
 public:
  Signal1D() = default;
  Signal1D(Grid1D grid, std::vector<double> values);
  /// Zero signal.
  explicit Signal1D(Grid1D grid);

  const Grid1D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }
  std::size_t size() const { return values_.size(); }

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

/// Piecewise-constant function on the finest cells of [0,1)^2, stored
/// row-major with the x cell as the major index: values[x * 2^n2 + y].
class Signal2D {
 public:
  Signal2D() = default;
  Signal2D(Grid2D grid, std::vector<double> values);
  explicit Signal2D(Grid2D grid);

  const Grid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double at(std::size_t x, std::size_t y) const { return values_[x * grid_.cells_y() + y]; }
  std::size_t size() const { return values_.size(); }

  /// The function x -> f(x, y) for the finest y cell `y`.
  Signal1D row(std::size_t y) const;
  /// f~(x, y) = f(y, x) on the grid with the two resolutions swapped.
  Signal2D transposed() const;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

using AnySignal = std::variant<Signal1D, Signal2D>;

double average_over(const Signal1D& f, const DyadicInterval& region);
double average_over(const Signal2D& f, const DyadicRectangle& region);

/// L^2 pairing with exact cell measures.
double inner_product(const Signal1D& f, const Signal1D& g);
double inner_product(const Signal2D& f, const Signal2D& g);
double inner_product(const AnySignal& f, const AnySignal& g);

// Pointwise arithmetic used by the operator and identity checks.
Signal1D operator+(const Signal1D& a, const Signal1D& b);
Signal1D operator-(const Signal1D& a, const Signal1D& b);
Signal1D operator*(double s, const Signal1D& a);
Signal2D operator+(const Signal2D& a, const Signal2D& b);
Signal2D operator-(const Signal2D& a, const Signal2D& b);
Signal2D operator*(double s, const Signal2D& a);
Signal1D pointwise_product(const Signal1D& a, const Signal1D& b);
Signal2D pointwise_product(const Signal2D& a, const Signal2D& b);

double max_abs(std::span<const double> v);
double max_abs_difference(std::span<const double> a, std::span<const double> b);

}  // namespace bipara
