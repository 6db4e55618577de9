#pragma once

#include <cstdint>
#include <vector>

#include "bipara/dyadic.hpp"

namespace bipara {

/// A union of finest cells of a Grid2D; one flag per cell in Signal2D order.
using CellMask = std::vector<std::uint8_t>;

CellMask empty_mask(const Grid2D& grid);
CellMask full_mask(const Grid2D& grid);
CellMask rect_mask(const Grid2D& grid, const DyadicRectangle& r);
void add_rect(const Grid2D& grid, CellMask& mask, const DyadicRectangle& r);
std::size_t cell_count(const CellMask& mask);
double mask_measure(const Grid2D& grid, const CellMask& mask);
/// a is a subset of b.
bool is_subset(const CellMask& a, const CellMask& b);

/// O(1) cell counts inside dyadic rectangles via 2D prefix sums.
class CellCounter {
 public:
  CellCounter(const Grid2D& grid, const CellMask& mask);

  std::size_t count(const DyadicRectangle& r) const;
  /// Every cell of r belongs to the mask.
  bool covers(const DyadicRectangle& r) const;

 private:
  Grid2D grid_;
  std::vector<std::uint32_t> prefix_;  // (cells_x + 1) x (cells_y + 1)
};

}  // namespace bipara
