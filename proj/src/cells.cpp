#include "bipara/cells.hpp"

#include <algorithm>

namespace bipara {

CellMask empty_mask(const Grid2D& grid) { return CellMask(grid.cells(), 0); }
CellMask full_mask(const Grid2D& grid) { return CellMask(grid.cells(), 1); }

void add_rect(const Grid2D& grid, CellMask& mask, const DyadicRectangle& r) {
  if (!grid.contains(r)) throw Error("subgrid region", "region");
  const std::size_t ny = grid.cells_y();
  for (auto x = r.ix.first_cell(grid.n1); x < r.ix.last_cell(grid.n1); ++x) {
    for (auto y = r.iy.first_cell(grid.n2); y < r.iy.last_cell(grid.n2); ++y) mask[x * ny + y] = 1;
  }
}

CellMask rect_mask(const Grid2D& grid, const DyadicRectangle& r) {
  CellMask m = empty_mask(grid);
  add_rect(grid, m, r);
  return m;
}

std::size_t cell_count(const CellMask& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double mask_measure(const Grid2D& grid, const CellMask& mask) {
  return static_cast<double>(cell_count(mask)) * grid.cell_measure();
}

bool is_subset(const CellMask& a, const CellMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
  }
  return true;
}

CellCounter::CellCounter(const Grid2D& grid, const CellMask& mask) : grid_(grid) {
  const std::size_t nx = grid.cells_x(), ny = grid.cells_y();
  prefix_.assign((nx + 1) * (ny + 1), 0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      prefix_[(x + 1) * (ny + 1) + y + 1] = mask[x * ny + y] + prefix_[x * (ny + 1) + y + 1] +
                                            prefix_[(x + 1) * (ny + 1) + y] - prefix_[x * (ny + 1) + y];
    }
  }
}

std::size_t CellCounter::count(const DyadicRectangle& r) const {
  const std::size_t ny1 = grid_.cells_y() + 1;
  const auto x0 = static_cast<std::size_t>(r.ix.first_cell(grid_.n1));
  const auto x1 = static_cast<std::size_t>(r.ix.last_cell(grid_.n1));
  const auto y0 = static_cast<std::size_t>(r.iy.first_cell(grid_.n2));
  const auto y1 = static_cast<std::size_t>(r.iy.last_cell(grid_.n2));
  return prefix_[x1 * ny1 + y1] - prefix_[x0 * ny1 + y1] - prefix_[x1 * ny1 + y0] + prefix_[x0 * ny1 + y0];
}

bool CellCounter::covers(const DyadicRectangle& r) const {
  const auto expected = static_cast<std::size_t>((r.ix.last_cell(grid_.n1) - r.ix.first_cell(grid_.n1)) *
                                                 (r.iy.last_cell(grid_.n2) - r.iy.first_cell(grid_.n2)));
  return count(r) == expected;
}

}  // namespace bipara
