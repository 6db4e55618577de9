#include "bipara/paraproducts.hpp"

#include <cmath>

namespace bipara {

namespace {

std::vector<double> analyze(std::span<const double> cells, int n, int e) {
  return e == 0 ? kernel::node_averages(cells, n) : kernel::node_details(cells, n);
}

std::vector<double> synthesize(std::span<const double> c, int n, int e) {
  return e == 0 ? kernel::synthesize_averages(c, n) : kernel::synthesize_details(c, n);
}

std::vector<double> hadamard_product(std::vector<double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return a;
}

/// x -> integral of f(x, y) dy.
Signal1D integrate_y(const Signal2D& f) {
  const Grid2D& g = f.grid();
  std::vector<double> out(g.cells_x(), 0.0);
  for (std::size_t x = 0; x < g.cells_x(); ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < g.cells_y(); ++y) s += f.at(x, y);
    out[x] = s / static_cast<double>(g.cells_y());
  }
  return Signal1D(g.x_axis(), std::move(out));
}

Signal1D expansion_sum_1d(const Signal1D& f, const Signal1D& g) {
  Signal1D acc(f.grid());
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) acc = acc + para_one({a, b}, f, g);
  return acc;
}

void require_same_grid(const AnySignal& a, const AnySignal& b) {
  const bool same = std::visit(
      [](const auto& u, const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(u)>, std::decay_t<decltype(v)>>) {
          return u.grid() == v.grid();
        } else {
          return false;
        }
      },
      a, b);
  if (!same) throw Error("grid mismatch between operator symbol and input", "f");
}

}  // namespace

ParaSignature1::ParaSignature1(int f_, int g_) : f(f_), g(g_) {
  if ((f != 0 && f != 1) || (g != 0 && g != 1) || (f == 0 && g == 0)) {
    throw Error("paraproduct pattern must be one of 01, 10, 11", "pattern");
  }
}

std::vector<double> pattern_coefficients(const Signal1D& f, int e) { return analyze(f.values(), f.grid().n, e); }

std::vector<double> pattern_coefficients(const Signal2D& f, int ex, int ey) {
  const Grid2D& g = f.grid();
  auto along_y = kernel::map_rows(f.values(), g.cells_x(), g.cells_y(),
                                  [&](std::span<const double> r) { return analyze(r, g.n2, ey); });
  return kernel::map_columns(along_y, g.cells_x(), node_count(g.n2),
                             [&](std::span<const double> c) { return analyze(c, g.n1, ex); });
}

Signal1D pattern_synthesis(Grid1D grid, std::span<const double> c, int e) {
  return Signal1D(grid, synthesize(c, grid.n, e));
}

Signal2D pattern_synthesis(Grid2D grid, std::span<const double> c, int ex, int ey) {
  auto along_x = kernel::map_columns(c, node_count(grid.n1), node_count(grid.n2),
                                     [&](std::span<const double> col) { return synthesize(col, grid.n1, ex); });
  return Signal2D(grid, kernel::map_rows(along_x, grid.cells_x(), node_count(grid.n2),
                                         [&](std::span<const double> r) { return synthesize(r, grid.n2, ey); }));
}

Signal1D para_one(ParaSignature1 sig, const Signal1D& f, const Signal1D& g) {
  if (!(f.grid() == g.grid())) throw Error("grid mismatch", "g");
  auto c = hadamard_product(pattern_coefficients(f, sig.f), pattern_coefficients(g, sig.g));
  return pattern_synthesis(f.grid(), c, sig.out());
}

Signal2D para_two(ParaSignature2 sig, const Signal2D& f, const Signal2D& g) {
  if (!(f.grid() == g.grid())) throw Error("grid mismatch", "g");
  auto c = hadamard_product(pattern_coefficients(f, sig.x.f, sig.y.f), pattern_coefficients(g, sig.x.g, sig.y.g));
  return pattern_synthesis(f.grid(), c, sig.x.out(), sig.y.out());
}

Signal1D root_mean_correction_1d(const Signal1D& f, const Signal1D& g) {
  if (!(f.grid() == g.grid())) throw Error("grid mismatch", "g");
  const double c = average_over(f, {0, 0}) * average_over(g, {0, 0});
  return Signal1D(f.grid(), std::vector<double>(f.size(), c));
}

Signal2D root_mean_correction_2d(const Signal2D& f, const Signal2D& g) {
  if (!(f.grid() == g.grid())) throw Error("grid mismatch", "g");
  const Grid2D& grid = f.grid();
  const double root = average_over(f, {{0, 0}, {0, 0}}) * average_over(g, {{0, 0}, {0, 0}});
  const Signal1D in_x = expansion_sum_1d(integrate_y(f), integrate_y(g));
  const Signal1D in_y = expansion_sum_1d(integrate_y(f.transposed()), integrate_y(g.transposed()));
  std::vector<double> out(grid.cells());
  for (std::size_t x = 0; x < grid.cells_x(); ++x) {
    for (std::size_t y = 0; y < grid.cells_y(); ++y) out[x * grid.cells_y() + y] = root + in_x[x] + in_y[y];
  }
  return Signal2D(grid, std::move(out));
}

std::string_view operator_name(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::Pi1: return "pi1";
    case OperatorTag::Pi1Adjoint: return "pi1t";
    case OperatorTag::Pi2: return "pi2";
    case OperatorTag::Pi3: return "pi3";
    case OperatorTag::Pi4: return "pi4";
    case OperatorTag::PiG: return "pig";
    case OperatorTag::PiGPrime: return "pigp";
    case OperatorTag::PiGDoublePrime: return "pigpp";
  }
  return "?";
}

OperatorTag parse_operator(std::string_view name) {
  for (auto t : {OperatorTag::Pi1, OperatorTag::Pi1Adjoint, OperatorTag::Pi2, OperatorTag::Pi3, OperatorTag::Pi4,
                 OperatorTag::PiG, OperatorTag::PiGPrime, OperatorTag::PiGDoublePrime}) {
    if (operator_name(t) == name) return t;
  }
  throw Error("unknown operator '" + std::string(name) + "'", "op");
}

bool is_one_parameter(OperatorTag tag) {
  return tag == OperatorTag::PiG || tag == OperatorTag::PiGPrime || tag == OperatorTag::PiGDoublePrime;
}

ParaSignature1 signature_1d(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::PiG: return {0, 1};
    case OperatorTag::PiGPrime: return {1, 1};
    case OperatorTag::PiGDoublePrime: return {1, 0};
    default: throw Error("operator '" + std::string(operator_name(tag)) + "' acts on 2D signals", "op");
  }
}

ParaSignature2 signature_2d(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::Pi1: return {{0, 1}, {0, 1}};
    case OperatorTag::Pi1Adjoint: return {{1, 1}, {1, 1}};
    case OperatorTag::Pi2: return {{1, 0}, {1, 0}};
    case OperatorTag::Pi3: return {{0, 1}, {1, 0}};
    case OperatorTag::Pi4: return {{0, 1}, {1, 1}};
    default: throw Error("operator '" + std::string(operator_name(tag)) + "' acts on 1D signals", "op");
  }
}

NamedOperator::NamedOperator(OperatorTag tag, AnySignal symbol) : tag_(tag), symbol_(std::move(symbol)) {
  if (is_one_parameter(tag_)) {
    const auto* g = std::get_if<Signal1D>(&symbol_);
    if (!g) throw Error("operator '" + std::string(operator_name(tag_)) + "' needs a 1D symbol", "g");
    const ParaSignature1 s = signature_1d(tag_);
    forward_g_ = pattern_coefficients(*g, s.g);
    adjoint_g_ = pattern_coefficients(*g, s.adjoint().g);
  } else {
    const auto* g = std::get_if<Signal2D>(&symbol_);
    if (!g) throw Error("operator '" + std::string(operator_name(tag_)) + "' needs a 2D symbol", "g");
    const ParaSignature2 s = signature_2d(tag_);
    forward_g_ = pattern_coefficients(*g, s.x.g, s.y.g);
    adjoint_g_ = pattern_coefficients(*g, s.adjoint().x.g, s.adjoint().y.g);
  }
}

NamedOperator::NamedOperator(OperatorTag tag, const HaarCoeffs1D& symbol)
    : NamedOperator(tag, AnySignal(haar_inverse_1d(symbol))) {}

NamedOperator::NamedOperator(OperatorTag tag, const HaarCoeffs2D& symbol)
    : NamedOperator(tag, AnySignal(haar_inverse_2d(symbol))) {}

void NamedOperator::check_grid(const AnySignal& f) const { require_same_grid(symbol_, f); }

Signal1D NamedOperator::apply(const Signal1D& f) const {
  check_grid(f);
  const ParaSignature1 s = signature_1d(tag_);
  return pattern_synthesis(f.grid(), hadamard_product(pattern_coefficients(f, s.f), forward_g_), s.out());
}

Signal2D NamedOperator::apply(const Signal2D& f) const {
  check_grid(f);
  const ParaSignature2 s = signature_2d(tag_);
  return pattern_synthesis(f.grid(), hadamard_product(pattern_coefficients(f, s.x.f, s.y.f), forward_g_), s.x.out(),
                           s.y.out());
}

Signal1D NamedOperator::apply_adjoint(const Signal1D& f) const {
  check_grid(f);
  const ParaSignature1 s = signature_1d(tag_).adjoint();
  return pattern_synthesis(f.grid(), hadamard_product(pattern_coefficients(f, s.f), adjoint_g_), s.out());
}

Signal2D NamedOperator::apply_adjoint(const Signal2D& f) const {
  check_grid(f);
  const ParaSignature2 s = signature_2d(tag_).adjoint();
  return pattern_synthesis(f.grid(), hadamard_product(pattern_coefficients(f, s.x.f, s.y.f), adjoint_g_), s.x.out(),
                           s.y.out());
}

AnySignal NamedOperator::apply(const AnySignal& f) const {
  return std::visit([&](const auto& s) { return AnySignal(apply(s)); }, f);
}

AnySignal NamedOperator::apply_adjoint(const AnySignal& f) const {
  return std::visit([&](const auto& s) { return AnySignal(apply_adjoint(s)); }, f);
}

AnySignal apply_named(const NamedOperator& op, const AnySignal& f) { return op.apply(f); }

std::pair<double, double> adjoint_pair_check(const NamedOperator& op, const AnySignal& f, const AnySignal& f_prime) {
  const double lhs = inner_product(op.apply(f), f_prime);
  if (op.tag() == OperatorTag::Pi4) {
    const NamedOperator pi3(OperatorTag::Pi3, f_prime);
    return {lhs, inner_product(pi3.apply(f), op.symbol())};
  }
  return {lhs, inner_product(f, op.apply_adjoint(f_prime))};
}

double transpose_symmetry_check(const HaarCoeffs2D& g, const Signal2D& f) {
  const Grid2D& grid = g.grid;
  if (grid.n1 != grid.n2 || !(f.grid() == grid)) throw Error("symmetry precondition violated", "g");
  const std::size_t m = node_count(grid.n1);
  const double scale = std::max(1.0, max_abs(g.cc));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (std::abs(g.cc[a * m + b] - g.cc[b * m + a]) > 1e-12 * scale) {
        throw Error("symmetry precondition violated", "g");
      }
    }
  }
  const NamedOperator pi4(OperatorTag::Pi4, g);
  const Signal2D lhs = pi4.apply_adjoint(f.transposed()).transposed();
  return max_abs_difference(lhs.values(), pi4.apply(f).values());
}

}  // namespace bipara
