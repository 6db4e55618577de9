#include "bipara/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace bipara {

namespace {

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error("signal values must be finite", "values");
  }
}

template <class S>
S zip(const S& a, const S& b, auto op) {
  if (!(a.grid() == b.grid())) throw Error("grid mismatch");
  std::vector<double> out(a.size());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(av[i], bv[i]);
  return S(a.grid(), std::move(out));
}

template <class S>
S scale(double s, const S& a) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= s;
  return S(a.grid(), std::move(out));
}

}  // namespace

Signal1D::Signal1D(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cells()) throw Error("signal length must equal 2^N", "values");
  check_finite(values_);
}

Signal1D::Signal1D(Grid1D grid) : grid_(grid), values_(grid.cells(), 0.0) {}

Signal2D::Signal2D(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cells()) throw Error("signal length must equal 2^(N1+N2)", "values");
  check_finite(values_);
}

Signal2D::Signal2D(Grid2D grid) : grid_(grid), values_(grid.cells(), 0.0) {}

Signal1D Signal2D::row(std::size_t y) const {
  const std::size_t nx = grid_.cells_x();
  const std::size_t ny = grid_.cells_y();
  std::vector<double> out(nx);
  for (std::size_t x = 0; x < nx; ++x) out[x] = values_[x * ny + y];
  return Signal1D(grid_.x_axis(), std::move(out));
}

Signal2D Signal2D::transposed() const {
  const std::size_t nx = grid_.cells_x(), ny = grid_.cells_y();
  std::vector<double> out(values_.size());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) out[y * nx + x] = values_[x * ny + y];
  }
  return Signal2D(Grid2D(grid_.n2, grid_.n1), std::move(out));
}

double average_over(const Signal1D& f, const DyadicInterval& region) {
  const int n = f.grid().n;
  if (region.level > n) throw Error("subgrid region", "region");
  auto v = f.values();
  double sum = 0.0;
  for (auto c = region.first_cell(n); c < region.last_cell(n); ++c) sum += v[c];
  return sum / static_cast<double>(region.last_cell(n) - region.first_cell(n));
}

double average_over(const Signal2D& f, const DyadicRectangle& region) {
  const Grid2D& g = f.grid();
  if (!g.contains(region)) throw Error("subgrid region", "region");
  const auto x0 = region.ix.first_cell(g.n1), x1 = region.ix.last_cell(g.n1);
  const auto y0 = region.iy.first_cell(g.n2), y1 = region.iy.last_cell(g.n2);
  double sum = 0.0;
  for (auto x = x0; x < x1; ++x) {
    for (auto y = y0; y < y1; ++y) sum += f.at(x, y);
  }
  return sum / static_cast<double>((x1 - x0) * (y1 - y0));
}

double inner_product(const Signal1D& f, const Signal1D& g) {
  if (!(f.grid() == g.grid())) throw Error("grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().cell_measure();
}

double inner_product(const Signal2D& f, const Signal2D& g) {
  if (!(f.grid() == g.grid())) throw Error("grid mismatch");
  auto a = f.values();
  auto b = g.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * f.grid().cell_measure();
}

double inner_product(const AnySignal& f, const AnySignal& g) {
  return std::visit(
      [](const auto& a, const auto& b) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(a)>, std::decay_t<decltype(b)>>) {
          return inner_product(a, b);
        } else {
          throw Error("signal dimension mismatch");
        }
      },
      f, g);
}

Signal1D operator+(const Signal1D& a, const Signal1D& b) { return zip(a, b, std::plus<>{}); }
Signal1D operator-(const Signal1D& a, const Signal1D& b) { return zip(a, b, std::minus<>{}); }
Signal1D operator*(double s, const Signal1D& a) { return scale(s, a); }
Signal2D operator+(const Signal2D& a, const Signal2D& b) { return zip(a, b, std::plus<>{}); }
Signal2D operator-(const Signal2D& a, const Signal2D& b) { return zip(a, b, std::minus<>{}); }
Signal2D operator*(double s, const Signal2D& a) { return scale(s, a); }
Signal1D pointwise_product(const Signal1D& a, const Signal1D& b) {
  return zip(a, b, std::multiplies<>{});
}
Signal2D pointwise_product(const Signal2D& a, const Signal2D& b) {
  return zip(a, b, std::multiplies<>{});
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace bipara
