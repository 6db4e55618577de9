#include "bipara/opnorm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "bipara/random.hpp"
#include "bipara/sparse.hpp"

namespace bipara {

namespace {

std::span<const double> values_of(const AnySignal& f) {
  return std::visit([](const auto& s) { return s.values(); }, f);
}

AnySignal like(const AnySignal& proto, std::vector<double> values) {
  return std::visit([&](const auto& s) { return AnySignal(std::decay_t<decltype(s)>(s.grid(), std::move(values))); },
                    proto);
}

double l2(const AnySignal& f) { return std::sqrt(std::max(inner_product(f, f), 0.0)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0) {
    for (double& x : v) x /= n;
  }
}

/// Cancellative coordinates of the search space (1D details or 2D cc block).
struct CoefficientSpace {
  AnySignal proto;
  std::size_t dims = 0;

  explicit CoefficientSpace(const AnySignal& symbol) : proto(symbol) {
    dims = std::visit(
        [](const auto& s) -> std::size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Signal1D>) {
            return node_count(s.grid().n);
          } else {
            return node_count(s.grid().n1) * node_count(s.grid().n2);
          }
        },
        proto);
  }

  AnySignal synthesize(const std::vector<double>& c) const {
    return std::visit(
        [&](const auto& s) -> AnySignal {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Signal1D>) {
            return haar_inverse_1d(HaarCoeffs1D(s.grid(), 0.0, c));
          } else {
            HaarCoeffs2D h(s.grid());
            h.cc = c;
            return haar_inverse_2d(h);
          }
        },
        proto);
  }

  std::vector<double> analyze(const AnySignal& f) const {
    return std::visit(
        [](const auto& s) -> std::vector<double> {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Signal1D>) {
            return haar_forward_1d(s).detail;
          } else {
            return haar_forward_2d(s).cc;
          }
        },
        f);
  }
};

/// Evaluates the ratio on raw value arrays.
struct RatioEvaluator {
  const NamedOperator& op;
  NormKind in;
  NormKind out;
  AnySignal proto;

  double operator()(std::vector<double> f, std::vector<double> tf, double smoothing) const {
    const double d = norm(like(proto, std::move(f)), in, smoothing);
    if (!(d > 0.0)) return 0.0;
    return norm(like(proto, std::move(tf)), out, smoothing) / d;
  }
};

struct AscentResult {
  std::vector<double> coeffs;
  double exact = 0.0;
  int iterations = 0;
};

AscentResult ascend(const CoefficientSpace& space, const RatioEvaluator& ratio, std::vector<double> c, int iterations,
                    const std::vector<std::vector<double>>& basis, const std::vector<std::vector<double>>& basis_image) {
  const NamedOperator& op = ratio.op;
  auto images = [&](const std::vector<double>& coeffs) {
    AnySignal f = space.synthesize(coeffs);
    AnySignal tf = op.apply(f);
    auto fv = values_of(f);
    auto tv = values_of(tf);
    return std::pair{std::vector<double>(fv.begin(), fv.end()), std::vector<double>(tv.begin(), tv.end())};
  };
  auto smooth_value = [&](const std::vector<double>& coeffs) {
    auto [f, tf] = images(coeffs);
    return ratio(std::move(f), std::move(tf), kSearchSmoothing);
  };

  normalize(c);
  AscentResult best{c, 0.0, 0};
  {
    auto [f, tf] = images(c);
    best.exact = ratio(std::move(f), std::move(tf), 0.0);
  }
  double current = smooth_value(c);
  double alpha = 0.25;
  std::vector<double> grad(space.dims);
  for (int it = 0; it < iterations; ++it) {
    best.iterations = it + 1;
    auto [f, tf] = images(c);
    for (std::size_t i = 0; i < space.dims; ++i) {
      double shifted;
      if (!basis.empty()) {
        std::vector<double> fi = f, ti = tf;
        for (std::size_t k = 0; k < fi.size(); ++k) fi[k] += kSearchStep * basis[i][k];
        for (std::size_t k = 0; k < ti.size(); ++k) ti[k] += kSearchStep * basis_image[i][k];
        shifted = ratio(std::move(fi), std::move(ti), kSearchSmoothing);
      } else {
        std::vector<double> ci = c;
        ci[i] += kSearchStep;
        shifted = smooth_value(ci);
      }
      grad[i] = (shifted - current) / kSearchStep;
    }
    const double gnorm = std::sqrt(dot(grad, grad));
    if (!(gnorm > 0.0) || !std::isfinite(gnorm)) break;

    alpha = std::min(1.0, 2.0 * alpha);
    bool moved = false;
    while (alpha > 1e-9) {
      std::vector<double> trial = c;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += alpha * grad[i] / gnorm;
      normalize(trial);
      const double v = smooth_value(trial);
      if (v > current) {
        c = std::move(trial);
        current = v;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
  auto [f, tf] = images(c);
  const double exact = ratio(std::move(f), std::move(tf), 0.0);
  if (exact > best.exact) {
    best.exact = exact;
    best.coeffs = c;
  }
  return best;
}

/// Per-axis average of a slice over one interval of the other axis.
double slice_average(const Signal1D& slice, const DyadicInterval& j) { return average_over(slice, j); }

}  // namespace

std::string_view method_name(OpNormMethod m) {
  switch (m) {
    case OpNormMethod::PowerIteration: return "power_iteration";
    case OpNormMethod::DenseSpectral: return "dense_spectral";
    case OpNormMethod::RatioAscent: return "ratio_ascent";
    case OpNormMethod::StructuredThm1: return "structured_thm1";
    case OpNormMethod::StructuredThm2: return "structured_thm2";
    case OpNormMethod::MatrixViewBound: return "matrix_view_bound";
  }
  return "?";
}

std::string_view bound_type_name(BoundType b) {
  switch (b) {
    case BoundType::Lower: return "lower";
    case BoundType::Upper: return "upper";
    case BoundType::TwoSided: return "two_sided";
  }
  return "?";
}

double l2_ratio(const NamedOperator& op, const AnySignal& f) {
  const double d = l2(f);
  return d > 0.0 ? l2(op.apply(f)) / d : 0.0;
}

double norm_ratio(const NamedOperator& op, NormKind in, NormKind out, const AnySignal& f, double smoothing) {
  const double d = norm(f, in, smoothing);
  return d > 0.0 ? norm(op.apply(f), out, smoothing) / d : 0.0;
}

OpNormReport opnorm_l2(const NamedOperator& op, const PowerOptions& opts) {
  OpNormReport rep;
  rep.method = OpNormMethod::PowerIteration;
  rep.bound_type = BoundType::TwoSided;
  rep.diagnostics.seed = opts.seed;
  rep.diagnostics.restarts = 1;

  const std::size_t n = values_of(op.symbol()).size();
  std::mt19937_64 rng(opts.seed);
  std::vector<double> x = gaussian_vector(rng, n);
  normalize(x);
  AnySignal xs = like(op.symbol(), x);
  double lambda = 0.0, previous = 0.0;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const AnySignal z = op.apply_adjoint(op.apply(xs));
    lambda = inner_product(xs, z);
    const double zn = l2(z);
    if (!(zn > 0.0)) {
      lambda = 0.0;
      converged = true;
      break;
    }
    if (it > 0 && std::abs(lambda - previous) <= opts.tolerance * lambda) {
      converged = true;
      break;
    }
    previous = lambda;
    auto zv = values_of(z);
    std::vector<double> next(zv.begin(), zv.end());
    for (double& v : next) v /= zn;
    xs = like(op.symbol(), std::move(next));
  }
  rep.diagnostics.iterations = it + (converged ? 1 : 0);
  rep.diagnostics.converged = converged;
  rep.value = l2_ratio(op, xs);
  {
    const AnySignal z = op.apply_adjoint(op.apply(xs));
    const double l = rep.value * rep.value;
    std::vector<double> r(values_of(z).begin(), values_of(z).end());
    auto xv = values_of(xs);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= l * xv[i];
    const double rn = l2(like(xs, std::move(r)));
    rep.diagnostics.residual = l > 0.0 ? rn / (l * l2(xs)) : 0.0;
  }
  rep.witness = xs;
  if (!converged) {
    rep.bound_type = BoundType::Lower;
    rep.diagnostics.warning = "power iteration did not converge";
  }
  if (opts.dense_check && n <= kDenseCap) {
    const OpNormReport dense = opnorm_dense(op);
    rep.extras["dense_value"] = dense.value;
    rep.extras["dense_relative_gap"] = dense.value > 0.0 ? std::abs(dense.value - rep.value) / dense.value : 0.0;
  }
  return rep;
}

OpNormReport opnorm_dense(const NamedOperator& op) {
  const std::size_t n = values_of(op.symbol()).size();
  if (n > kDenseCap) throw Error("grid too large for the dense oracle", "resolution");
  // Columns are images of cell indicators; the cell basis scaling cancels for uniform cells.
  Eigen::MatrixXd m(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const AnySignal img = op.apply(like(op.symbol(), e));
    auto v = values_of(img);
    for (std::size_t r = 0; r < n; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r];
    e[c] = 0.0;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  OpNormReport rep;
  rep.method = OpNormMethod::DenseSpectral;
  rep.bound_type = BoundType::TwoSided;
  rep.value = svd.singularValues()(0);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = svd.matrixV()(static_cast<Eigen::Index>(i), 0);
  rep.witness = like(op.symbol(), std::move(w));
  return rep;
}

OpNormReport opnorm_search(const NamedOperator& op, NormKind in, NormKind out, const SearchBudget& budget) {
  if (budget.restarts < 1 || budget.iterations < 1) throw Error("budget needs at least one restart and iteration", "budget");
  in.validate();
  out.validate();
  const CoefficientSpace space(op.symbol());
  const RatioEvaluator ratio{op, in, out, op.symbol()};

  OpNormReport rep;
  rep.method = OpNormMethod::RatioAscent;
  rep.bound_type = BoundType::Lower;
  rep.diagnostics.seed = budget.seed;
  rep.diagnostics.restarts = budget.restarts;
  rep.witness = like(op.symbol(), std::vector<double>(values_of(op.symbol()).size(), 0.0));

  // Basis images make each finite-difference probe O(cells).
  const std::size_t cells = values_of(op.symbol()).size();
  std::vector<std::vector<double>> basis, basis_image;
  if (space.dims * cells <= (std::size_t{1} << 22)) {
    basis.reserve(space.dims);
    basis_image.reserve(space.dims);
    std::vector<double> e(space.dims, 0.0);
    for (std::size_t i = 0; i < space.dims; ++i) {
      e[i] = 1.0;
      const AnySignal b = space.synthesize(e);
      const AnySignal tb = op.apply(b);
      basis.emplace_back(values_of(b).begin(), values_of(b).end());
      basis_image.emplace_back(values_of(tb).begin(), values_of(tb).end());
      e[i] = 0.0;
    }
    const bool degenerate = std::all_of(basis_image.begin(), basis_image.end(), [](const auto& v) {
      return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    });
    if (degenerate) {
      rep.diagnostics.warning = "operator vanishes on the search space";
      return rep;
    }
  }

  double best = -1.0;
  std::vector<double> best_c;
  int total_iterations = 0;
  for (int r = 0; r < budget.restarts; ++r) {
    std::vector<double> start;
    if (r == 0 && budget.warm_start) {
      start = space.analyze(*budget.warm_start);
      if (std::all_of(start.begin(), start.end(), [](double v) { return v == 0.0; })) start.clear();
    }
    if (start.empty()) {
      std::mt19937_64 rng(derive_seed(budget.seed, static_cast<std::uint64_t>(r)));
      start = gaussian_vector(rng, space.dims);
    }
    const AscentResult res = ascend(space, ratio, std::move(start), budget.iterations, basis, basis_image);
    total_iterations += res.iterations;
    if (res.exact > best) {
      best = res.exact;
      best_c = res.coeffs;
    }
  }
  rep.diagnostics.iterations = total_iterations;
  if (best > 0.0) {
    rep.witness = space.synthesize(best_c);
    rep.value = norm_ratio(op, in, out, *rep.witness);
  }
  return rep;
}

Signal2D refine_once(const Signal2D& g) {
  const Grid2D& c = g.grid();
  const Grid2D f(c.n1 + 1, c.n2 + 1);
  std::vector<double> out(f.cells());
  for (std::size_t x = 0; x < f.cells_x(); ++x) {
    for (std::size_t y = 0; y < f.cells_y(); ++y) out[x * f.cells_y() + y] = g.at(x / 2, y / 2);
  }
  return Signal2D(f, std::move(out));
}

OpNormReport thm1_witness(const Signal2D& g, double p, double r) {
  if (!(p > 0.0) || !(r > 0.0) || std::isinf(p) || std::isinf(r)) throw Error("exponents must be positive and finite", "p");
  const Signal2D m = strong_maximal_2d(g);
  double m_min = std::numeric_limits<double>::infinity(), m_max = 0.0;
  for (double v : m.values()) {
    if (v > 0.0) m_min = std::min(m_min, v);
    m_max = std::max(m_max, v);
  }
  if (m_max == 0.0) throw Error("symbol has vanishing maximal function", "g");
  const double t = r / p;
  const double q = 1.0 / (1.0 / p + 1.0 / r);

  const int k_lo = static_cast<int>(std::ceil(std::log2(m_min))) - 1;
  const int k_hi = static_cast<int>(std::ceil(std::log2(m_max))) - 1;
  std::map<DyadicRectangle, int> label;
  std::vector<std::pair<int, SparseFamily>> levels;
  for (int k = k_lo; k <= k_hi; ++k) {
    const RectFamily fam = level_set_rectangles(g, std::ldexp(1.0, k));
    if (fam.empty()) continue;
    SparseFamily sf = sparse_extract(fam);
    for (const auto& rect : sf.base.rects) {
      auto [it, fresh] = label.emplace(rect, k);
      if (!fresh) it->second = std::max(it->second, k);
    }
    levels.emplace_back(k, std::move(sf));
  }

  const Signal2D fine_g = refine_once(g);
  const Grid2D fine = fine_g.grid();
  HaarCoeffs2D coeffs(fine);
  for (const auto& [rect, lambda] : label) coeffs.at(rect) = std::exp2(t * lambda) * std::sqrt(rect.measure());
  const Signal2D f = haar_inverse_2d(coeffs);
  const NamedOperator pi2(OperatorTag::Pi2, fine_g);
  const Signal2D big_f = pi2.apply(f);

  // S(F) > 2^{(1+t)k} on every cell of every kept rectangle of level k.
  const Signal2D s = square_2d(big_f);
  bool holds = true;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& [k, sf] : levels) {
    const double threshold = std::exp2((1.0 + t) * k);
    for (const auto& rect : sf.base.rects) {
      for (auto x = rect.ix.first_cell(fine.n1); x < rect.ix.last_cell(fine.n1); ++x) {
        for (auto y = rect.iy.first_cell(fine.n2); y < rect.iy.last_cell(fine.n2); ++y) {
          const double v = s.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
          holds = holds && v > threshold;
          margin = std::min(margin, v / threshold);
        }
      }
    }
  }

  OpNormReport rep;
  rep.method = OpNormMethod::StructuredThm1;
  rep.bound_type = BoundType::Lower;
  const double in = norm(f, NormKind::hp_square(p));
  const double out = norm(big_f, NormKind::hp_square(q));
  rep.value = in > 0.0 ? out / in : 0.0;
  rep.witness = f;
  rep.extras = {
      {"input_norm", in},
      {"output_norm", out},
      {"t", t},
      {"q", q},
      {"levels", static_cast<double>(levels.size())},
      {"rectangles", static_cast<double>(label.size())},
      {"g_hr_square", norm(g, NormKind::hp_square(r))},
      {"g_hr_maximal", lp_norm(m, r)},
      {"level_check", holds ? 1.0 : 0.0},
      {"level_check_margin", margin},
  };
  return rep;
}

OpNormReport thm2_row_witness(const Signal2D& g, double p, double r, const std::vector<DyadicInterval>& rows,
                              const SearchBudget& budget) {
  if (rows.empty()) throw Error("row set must be nonempty", "rows");
  if (!(p > 0.0) || !(r > 0.0) || std::isinf(p) || std::isinf(r)) throw Error("exponents must be positive and finite", "p");
  const Grid2D& grid = g.grid();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].level >= grid.n2) throw Error("row interval must be coarser than the grid", "rows");
    for (std::size_t j = 0; j < i; ++j) {
      if (rows[i].contains(rows[j]) || rows[j].contains(rows[i])) throw Error("row intervals must be disjoint", "rows");
    }
  }
  const double q = 1.0 / (1.0 / p + 1.0 / r);
  const SliceCoeffs sx = slice_transform(g, Axis::X);
  const Grid1D gx = grid.x_axis();
  const std::size_t m1 = node_count(grid.n1);

  std::vector<double> values(grid.cells(), 0.0);
  double slice_sum = 0.0;
  int iterations = 0;
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const DyadicInterval& j = rows[idx];
    std::vector<double> detail(m1);
    for (std::size_t a = 0; a < m1; ++a) detail[a] = slice_average(sx.slices[a], j);
    if (std::all_of(detail.begin(), detail.end(), [](double v) { return v == 0.0; })) continue;
    const Signal1D g_row = haar_inverse_1d(HaarCoeffs1D(gx, 0.0, detail));
    const double g_row_norm = norm(g_row, NormKind::hp_square(r));
    slice_sum += j.measure() * std::pow(g_row_norm, r);

    SearchBudget b = budget;
    b.seed = derive_seed(budget.seed, idx);
    b.warm_start.reset();
    const OpNormReport one = opnorm_search(NamedOperator(OperatorTag::PiG, g_row), NormKind::hp_square(p),
                                           NormKind::hp_square(q), b);
    iterations += one.diagnostics.iterations;
    const Signal1D& fj = std::get<Signal1D>(*one.witness);
    const double fj_norm = norm(fj, NormKind::hp_square(p));
    if (!(fj_norm > 0.0)) continue;
    // ||f_J||_p^p = ||g'||_r^r.
    const double scale = std::pow(std::pow(g_row_norm, r), 1.0 / p) / fj_norm;
    // |J|^{1/2} h_J(y) = +-1 on the two halves of J.
    const auto y0 = j.first_cell(grid.n2), y1 = j.last_cell(grid.n2), mid = (y0 + y1) / 2;
    for (std::size_t x = 0; x < grid.cells_x(); ++x) {
      for (auto y = y0; y < y1; ++y) {
        values[x * grid.cells_y() + static_cast<std::size_t>(y)] = (y < mid ? 1.0 : -1.0) * scale * fj[x];
      }
    }
  }

  OpNormReport rep;
  rep.method = OpNormMethod::StructuredThm2;
  rep.bound_type = BoundType::Lower;
  rep.diagnostics.seed = budget.seed;
  rep.diagnostics.iterations = iterations;
  rep.diagnostics.restarts = budget.restarts;
  const Signal2D f(grid, std::move(values));
  rep.witness = f;
  const NamedOperator pi3(OperatorTag::Pi3, g);
  const double in = norm(f, NormKind::hp_square(p));
  const double out = norm(pi3.apply(f), NormKind::hp_square(q));
  rep.value = in > 0.0 ? out / in : 0.0;
  rep.extras = {
      {"input_norm", in},
      {"input_norm_s2m1", lp_norm(mixed_operator(f, MixedKind::S2M1), p)},
      {"output_norm", out},
      {"slice_sum", slice_sum},
      {"q", q},
      {"rows", static_cast<double>(rows.size())},
  };
  return rep;
}

OpNormReport pi4_matrix_bound(const HaarCoeffs2D& g) {
  const Grid2D& grid = g.grid;
  const int n1 = grid.n1, n2 = grid.n2;
  const std::size_t m2 = node_count(n2);
  OpNormReport rep;
  rep.method = OpNormMethod::MatrixViewBound;
  rep.bound_type = BoundType::Upper;
  Eigen::MatrixXd mat(n1, n2);
  std::size_t best_x = 0, best_y = 0;
  for (std::size_t x = 0; x < grid.cells_x(); ++x) {
    for (std::size_t y = 0; y < grid.cells_y(); ++y) {
      for (int l = 0; l < n1; ++l) {
        const std::size_t a = node_index(l, static_cast<std::int64_t>(x >> (n1 - l)));
        for (int k = 0; k < n2; ++k) {
          const std::size_t b = node_index(k, static_cast<std::int64_t>(y >> (n2 - k)));
          mat(l, k) = g.cc[a * m2 + b] * std::exp2(0.5 * (l + k));
        }
      }
      const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(mat).singularValues()(0);
      if (s > rep.value) {
        rep.value = s;
        best_x = x;
        best_y = y;
      }
    }
  }
  rep.extras = {{"cell_x", static_cast<double>(best_x)}, {"cell_y", static_cast<double>(best_y)}};
  return rep;
}

StrongerNormReport stronger_norm_estimate(const HaarCoeffs2D& g, int iterations, double tolerance) {
  const Grid2D& grid = g.grid;
  const int n1 = grid.n1, n2 = grid.n2;
  const std::size_t m1 = node_count(n1), m2 = node_count(n2);
  const std::size_t nx = grid.cells_x(), ny = grid.cells_y();
  std::vector<double> absg(g.cc.size());
  for (std::size_t i = 0; i < absg.size(); ++i) absg[i] = std::abs(g.cc[i]);

  // u[J][x] >= 0 and v[I][y] >= 0 stand for |f_J(x)| and |f'_I(y)|.
  std::vector<double> u(m2 * nx, 1.0), v(m1 * ny, 1.0);
  auto unit = [](std::vector<double>& w, double cell) {
    const double n = std::sqrt(dot(w, w) * cell);
    if (n > 0.0) {
      for (double& x : w) x /= n;
    }
  };
  unit(u, grid.x_axis().cell_measure());
  unit(v, grid.y_axis().cell_measure());

  auto averages_u = [&] {  // A_u[I][J] = <u_J>_I
    std::vector<double> a(m1 * m2);
    for (std::size_t b = 0; b < m2; ++b) {
      const auto avg = kernel::node_averages(std::span<const double>(u).subspan(b * nx, nx), n1);
      for (std::size_t i = 0; i < m1; ++i) a[i * m2 + b] = avg[i];
    }
    return a;
  };
  auto averages_v = [&] {  // A_v[I][J] = <v_I>_J
    std::vector<double> a(m1 * m2);
    for (std::size_t i = 0; i < m1; ++i) {
      const auto avg = kernel::node_averages(std::span<const double>(v).subspan(i * ny, ny), n2);
      for (std::size_t b = 0; b < m2; ++b) a[i * m2 + b] = avg[b];
    }
    return a;
  };
  auto form = [&](const std::vector<double>& au, const std::vector<double>& av) {
    double s = 0.0;
    for (std::size_t i = 0; i < absg.size(); ++i) s += absg[i] * au[i] * av[i];
    return s;
  };

  double value = form(averages_u(), averages_v());
  int it = 0;
  bool converged = false;
  for (; it < iterations; ++it) {
    // Both gradients are nonnegative, so the iterates stay in the nonnegative cone.
    const auto av = averages_v();
    for (std::size_t b = 0; b < m2; ++b) {
      std::vector<double> c(m1);
      for (std::size_t i = 0; i < m1; ++i) c[i] = absg[i * m2 + b] * av[i * m2 + b];
      const auto col = kernel::synthesize_averages(c, n1);
      std::copy(col.begin(), col.end(), u.begin() + static_cast<std::ptrdiff_t>(b * nx));
    }
    unit(u, grid.x_axis().cell_measure());
    const auto au = averages_u();
    for (std::size_t i = 0; i < m1; ++i) {
      std::vector<double> c(m2);
      for (std::size_t b = 0; b < m2; ++b) c[b] = absg[i * m2 + b] * au[i * m2 + b];
      const auto row = kernel::synthesize_averages(c, n2);
      std::copy(row.begin(), row.end(), v.begin() + static_cast<std::ptrdiff_t>(i * ny));
    }
    unit(v, grid.y_axis().cell_measure());
    const double next = form(averages_u(), averages_v());
    const bool done = std::abs(next - value) <= tolerance * std::max(next, 1e-300);
    value = next;
    if (done) {
      converged = true;
      ++it;
      break;
    }
  }

  // f = sum_J u_J(x) h_J(y), f' = sum_I v_I(y) h_I(x); both have unit L^2 norm.
  std::vector<double> fv(grid.cells()), fpv(grid.cells());
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<double> c(m2);
    for (std::size_t b = 0; b < m2; ++b) c[b] = u[b * nx + x];
    const auto col = kernel::synthesize_details(c, n2);
    std::copy(col.begin(), col.end(), fv.begin() + static_cast<std::ptrdiff_t>(x * ny));
  }
  for (std::size_t y = 0; y < ny; ++y) {
    std::vector<double> c(m1);
    for (std::size_t i = 0; i < m1; ++i) c[i] = v[i * ny + y];
    const auto row = kernel::synthesize_details(c, n1);
    for (std::size_t x = 0; x < nx; ++x) fpv[x * ny + y] = row[x];
  }
  const Signal2D f(grid, std::move(fv)), fp(grid, std::move(fpv));
  HaarCoeffs2D abs_coeffs(grid);
  abs_coeffs.cc = absg;

  StrongerNormReport out;
  out.lower.method = OpNormMethod::RatioAscent;
  out.lower.bound_type = BoundType::Lower;
  out.lower.value = value;
  out.lower.witness = f;
  out.lower.diagnostics.iterations = it;
  out.lower.diagnostics.converged = converged;
  out.lower.extras = {
      {"witness_pairing", inner_product(NamedOperator(OperatorTag::Pi4, abs_coeffs).apply(f), fp)},
      {"input_norm", std::sqrt(inner_product(f, f))},
      {"dual_norm", std::sqrt(inner_product(fp, fp))},
  };
  out.upper = pi4_matrix_bound(abs_coeffs);
  return out;
}

std::vector<std::vector<int>> sylvester_hadamard(int n) {
  if (n < 1 || !std::has_single_bit(static_cast<unsigned>(n))) throw Error("Hadamard order must be a power of two", "n");
  std::vector<std::vector<int>> h{{1}};
  while (static_cast<int>(h.size()) < n) {
    const std::size_t s = h.size();
    std::vector<std::vector<int>> next(2 * s, std::vector<int>(2 * s));
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        next[i][j] = next[i][j + s] = next[i + s][j] = h[i][j];
        next[i + s][j + s] = -h[i][j];
      }
    }
    h = std::move(next);
  }
  return h;
}

namespace {

HaarCoeffs2D level_pattern_example(int n, int resolution, const std::vector<std::vector<int>>& signs) {
  if (n < 1) throw Error("example size must be positive", "n");
  if (resolution == 0) resolution = n;
  if (resolution < n) throw Error("resolution must be at least n", "resolution");
  const Grid2D grid(resolution, resolution);
  HaarCoeffs2D c(grid);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      if (signs[l][k] == 0) continue;
      const double mag = std::exp2(-0.5 * (l + k));
      for (std::int64_t a = 0; a < (std::int64_t{1} << l); ++a) {
        for (std::int64_t b = 0; b < (std::int64_t{1} << k); ++b) c.at({{l, a}, {k, b}}) = signs[l][k] * mag;
      }
    }
  }
  return c;
}

}  // namespace

HaarCoeffs2D build_hadamard_example(int n, int resolution) {
  return level_pattern_example(n, resolution, sylvester_hadamard(n));
}

HaarCoeffs2D build_identity_example(int n, int resolution) {
  if (n < 1) throw Error("example size must be positive", "n");
  std::vector<std::vector<int>> id(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  return level_pattern_example(n, resolution, id);
}

}  // namespace bipara
