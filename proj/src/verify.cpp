#include "bipara/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "bipara/atoms.hpp"
#include "bipara/corpus.hpp"
#include "bipara/functionals.hpp"
#include "bipara/opnorm.hpp"
#include "bipara/paraproducts.hpp"
#include "bipara/random.hpp"
#include "bipara/sparse.hpp"

namespace bipara {

bool VerifyResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.passed; });
}

namespace {

constexpr std::uint64_t kSuiteStream = 0x5eed;

/// Running max of a residual over instances.
class Tally {
 public:
  Tally(std::string suite, std::string check, double bound) : row_{std::move(suite), std::move(check), true, 0.0, bound, 0} {}
  void add(double residual) {
    ++row_.instances;
    if (!(residual <= row_.measured)) row_.measured = std::isnan(residual) ? INFINITY : residual;
  }
  /// A boolean property; a failure counts as residual 1 against bound 0.
  void require(bool ok) { add(ok ? 0.0 : 1.0); }
  CheckRow finish() {
    row_.passed = row_.measured <= row_.bound;
    return row_;
  }

 private:
  CheckRow row_;
};

/// Ratio samples checked against [lo, hi].
class Envelope {
 public:
  Envelope(std::string suite, std::string quantity, double lo, double hi)
      : suite_(std::move(suite)), quantity_(std::move(quantity)), lo_(lo), hi_(hi) {}
  void add(VerifyResult& out, std::uint64_t seed, const Grid2D& g, double v) {
    out.envelope.push_back({seed, g.n1, g.n2, quantity_, v});
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
    ++count_;
  }
  /// Measured is the worst violation factor of the envelope (<= 1 inside).
  CheckRow finish() const {
    const double worst = std::max(lo_ / min_, max_ / hi_);
    return {suite_, "envelope " + quantity_, worst <= 1.0, worst, 1.0, count_};
  }

 private:
  std::string suite_, quantity_;
  double lo_, hi_;
  double min_ = INFINITY, max_ = 0.0;
  int count_ = 0;
};

Signal2D random_cells(Grid2D g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return Signal2D(g, gaussian_vector(rng, g.cells()));
}

Signal1D random_cells_1d(Grid1D g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return Signal1D(g, gaussian_vector(rng, g.cells()));
}

double max_diff(std::span<const double> a, std::span<const double> b) { return max_abs_difference(a, b); }

/// lhs <= rhs per cell, slack relative to max(1, rhs).
double domination_excess(std::span<const double> lhs, std::span<const double> rhs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, (lhs[i] - rhs[i]) / std::max(1.0, rhs[i]));
  return worst;
}

std::vector<double> product(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void suite_calculus(const VerifyOptions& o, VerifyResult& out) {
  const int n = std::clamp(o.n, 1, 8);
  Tally rt1("calculus", "roundtrip 1d", 1e-10), rt2("calculus", "roundtrip 2d", 1e-10);
  Tally pv1("calculus", "parseval 1d", 1e-10), pv2("calculus", "parseval 2d", 1e-10);
  Tally sl("calculus", "slice consistency", 1e-12);
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    const Signal1D f1 = random_cells_1d(Grid1D(n), s);
    const HaarCoeffs1D c1 = haar_forward_1d(f1);
    rt1.add(max_diff(haar_inverse_1d(c1).values(), f1.values()));
    double e1 = c1.mean * c1.mean;
    for (double v : c1.detail) e1 += v * v;
    pv1.add(std::abs(e1 - inner_product(f1, f1)));

    const Signal2D f2 = random_cells(Grid2D(n, n), s);
    const HaarCoeffs2D c2 = haar_forward_2d(f2);
    rt2.add(max_diff(haar_inverse_2d(c2).values(), f2.values()));
    double e2 = c2.mm * c2.mm;
    for (const auto* block : {&c2.cc, &c2.cm, &c2.mc}) {
      for (double v : *block) e2 += v * v;
    }
    pv2.add(std::abs(e2 - inner_product(f2, f2)));

    const SliceCoeffs sy = slice_transform(f2, Axis::Y);
    const std::size_t m2 = node_count(n);
    double worst = 0.0;
    for (std::size_t j = 0; j < m2; ++j) {
      const HaarCoeffs1D row = haar_forward_1d(sy.slices[j]);
      for (std::size_t a = 0; a < row.detail.size(); ++a) worst = std::max(worst, std::abs(row.detail[a] - c2.cc[a * m2 + j]));
    }
    sl.add(worst);
  }
  for (Tally* t : {&rt1, &rt2, &pv1, &pv2, &sl}) out.checks.push_back(t->finish());
}

const std::vector<ParaSignature1>& one_d_signatures() {
  static const std::vector<ParaSignature1> s{{0, 1}, {1, 0}, {1, 1}};
  return s;
}

void suite_expansion(const VerifyOptions& o, VerifyResult& out) {
  Tally e1("expansion", "product expansion 1d", 1e-10), e2("expansion", "product expansion 2d", 1e-10);
  const int n1 = std::clamp(o.n, 1, 8), n2 = std::clamp(o.n, 1, 5);
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    const Signal1D f = random_cells_1d(Grid1D(n1), s), g = random_cells_1d(Grid1D(n1), derive_seed(s, 1));
    Signal1D sum = root_mean_correction_1d(f, g);
    for (const auto& sig : one_d_signatures()) sum = sum + para_one(sig, f, g);
    e1.add(max_diff(sum.values(), pointwise_product(f, g).values()));

    const Signal2D F = random_cells(Grid2D(n2, n2), s), G = random_cells(Grid2D(n2, n2), derive_seed(s, 2));
    Signal2D sum2 = root_mean_correction_2d(F, G);
    for (const auto& sx : one_d_signatures()) {
      for (const auto& sy : one_d_signatures()) sum2 = sum2 + para_two({sx, sy}, F, G);
    }
    e2.add(max_diff(sum2.values(), pointwise_product(F, G).values()));
  }
  out.checks.push_back(e1.finish());
  out.checks.push_back(e2.finish());
}

constexpr OperatorTag kAllOps[] = {OperatorTag::Pi1, OperatorTag::Pi1Adjoint, OperatorTag::Pi2,   OperatorTag::Pi3,
                                   OperatorTag::Pi4, OperatorTag::PiG,        OperatorTag::PiGPrime,
                                   OperatorTag::PiGDoublePrime};

AnySignal random_for(OperatorTag tag, int n, std::uint64_t seed) {
  if (is_one_parameter(tag)) return random_cells_1d(Grid1D(n), seed);
  return random_cells(Grid2D(n, n), seed);
}

void suite_duality(const VerifyOptions& o, VerifyResult& out) {
  const int n = std::clamp(o.n, 1, 4);
  for (OperatorTag tag : kAllOps) {
    Tally t("duality", std::string("adjoint pairing ") + std::string(operator_name(tag)), 1e-10);
    for (int i = 0; i < o.instances; ++i) {
      const std::uint64_t s = derive_seed(derive_seed(o.seed, i), static_cast<std::uint64_t>(tag));
      const NamedOperator op(tag, random_for(tag, n, s));
      const auto [a, b] = adjoint_pair_check(op, random_for(tag, n, s + 1), random_for(tag, n, s + 2));
      t.add(std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    out.checks.push_back(t.finish());
  }
}

void suite_pointwise(const VerifyOptions& o, VerifyResult& out) {
  const int n = std::clamp(o.n, 1, 6);
  Tally d2("pointwise", "S(pi2_g f) <= S(f) M(g)", 1e-12);
  Tally d3("pointwise", "S(pi3_g f) <= S2M1(f) M2S1(g)", 1e-12);
  Tally dm("pointwise", "M1S2(f) <= S2M1(f)", 1e-12);
  Tally dmt("pointwise", "M2S1(f) <= S1M2(f)", 1e-12);
  Tally dmax("pointwise", "|f| <= M(f)", 1e-12);
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    const Grid2D grid(n, n);
    const Signal2D f = random_cells(grid, s), g = random_cells(grid, derive_seed(s, 1));
    const Signal2D mg = strong_maximal_2d(g);
    d2.add(domination_excess(square_2d(NamedOperator(OperatorTag::Pi2, g).apply(f)).values(),
                             product(square_2d(f).values(), mg.values())));
    const Signal2D s2m1 = mixed_operator(f, MixedKind::S2M1);
    d3.add(domination_excess(square_2d(NamedOperator(OperatorTag::Pi3, g).apply(f)).values(),
                             product(s2m1.values(), mixed_operator(g, MixedKind::M2S1).values())));
    dm.add(domination_excess(mixed_operator(f, MixedKind::M1S2).values(), s2m1.values()));
    dmt.add(domination_excess(mixed_operator(f, MixedKind::M2S1).values(), mixed_operator(f, MixedKind::S1M2).values()));
    std::vector<double> absf(f.size());
    for (std::size_t c = 0; c < f.size(); ++c) absf[c] = std::abs(f.values()[c]);
    dmax.add(domination_excess(absf, strong_maximal_2d(f).values()));
  }
  for (Tally* t : {&d2, &d3, &dm, &dmt, &dmax}) out.checks.push_back(t->finish());
}

/// All rectangles with both levels < gens.
RectFamily first_generations(int gens) {
  std::vector<DyadicRectangle> rects;
  for (int l = 0; l < gens; ++l) {
    for (int k = 0; k < gens; ++k) {
      for (std::int64_t a = 0; a < (std::int64_t{1} << l); ++a) {
        for (std::int64_t b = 0; b < (std::int64_t{1} << k); ++b) rects.push_back({{l, a}, {k, b}});
      }
    }
  }
  return RectFamily(Grid2D(std::max(gens, 1), std::max(gens, 1)), std::move(rects));
}

void suite_sparse(const VerifyOptions& o, VerifyResult& out) {
  const int n = std::clamp(o.n, 1, 5);
  Tally ex("sparse", "extract density and disjointness", 0.0);
  Tally un("sparse", "level-set union equals {M > lambda}", 0.0);
  std::map<double, Envelope> jn;
  for (double p : {0.5, 1.0, 2.0}) jn.emplace(p, Envelope("sparse", "jn_profile p=" + std::to_string(p).substr(0, 3), 1.0, 16.0));
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    const Grid2D grid(n, n);
    const Signal2D g = random_signal(Distribution::Sparse, grid, s);
    const Signal2D m = strong_maximal_2d(g);
    for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
      const RectFamily fam = level_set_rectangles(g, lambda);
      const CellMask u = fam.union_mask();
      bool same = true;
      for (std::size_t c = 0; c < u.size(); ++c) same = same && ((u[c] != 0) == (m.values()[c] > lambda));
      un.require(same);
      if (fam.empty()) continue;
      const SparseFamily sf = sparse_extract(fam);
      ex.require(sf.verify());
      for (auto& [p, env] : jn) env.add(out, s, grid, jn_profile(sf, p));
    }
  }
  out.checks.push_back(ex.finish());
  out.checks.push_back(un.finish());
  for (int gens : {1, 2}) {
    const CarlesonEstimate c = carleson_constant(first_generations(gens), CarlesonMode::Exact);
    Tally t("sparse", "carleson first " + std::to_string(gens) + " generations = n^2", 1e-12);
    t.add(std::abs(c.value - gens * gens));
    out.checks.push_back(t.finish());
  }
  for (const auto& [p, env] : jn) out.checks.push_back(env.finish());
}

void suite_atoms(const VerifyOptions& o, VerifyResult& out) {
  const int n = std::clamp(o.n, 1, 4);
  const double s_exp = 2.0;
  Tally rec("atoms", "reconstruction", 1e-10), con("atoms", "contracting omegas", 0.0);
  Tally val("atoms", "atom norm bound", 0.0), loc("atoms", "local image support", 0.0);
  std::map<double, Envelope> env;
  for (double p : {0.5, 1.0, 2.0}) {
    env.emplace(p, Envelope("atoms", "atomic sum / Hp p=" + std::to_string(p).substr(0, 3), 1e-2, 1e2));
  }
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    const Grid2D grid(n, n);
    const Signal2D f = random_signal(Distribution::Gaussian, grid, s);
    for (auto& [p, e] : env) {
      const double s_use = std::max(s_exp, 2.0 * p);
      const AtomicDecomposition d = atomic_decompose(f, p, s_use);
      rec.add(max_diff(d.reconstruct().values(), f.values()));
      try {
        validate_contracting(grid, d.omegas);
        con.require(true);
      } catch (const Error&) {
        con.require(false);
      }
      for (const Atom& a : d.atoms) val.require(a.valid(1e-9));
      e.add(out, s, grid, d.quasi_norm_sum() / norm(f, NormKind::hp_square(p)));
      if (p == 1.0) {
        const NamedOperator op(OperatorTag::Pi3, random_signal(Distribution::Gaussian, grid, derive_seed(s, 9)));
        for (const Atom& a : d.atoms) loc.require(local_image_check(op, a, 1.5).support_contained);
      }
    }
  }
  for (Tally* t : {&rec, &con, &val, &loc}) out.checks.push_back(t->finish());
  for (const auto& [p, e] : env) out.checks.push_back(e.finish());
}

void suite_opnorm(const VerifyOptions& o, VerifyResult& out) {
  const int n = 3;
  for (OperatorTag tag : kAllOps) {
    Tally t("opnorm", std::string("power iteration vs dense ") + std::string(operator_name(tag)), 1e-6);
    Tally w("opnorm", std::string("witness reproduces value ") + std::string(operator_name(tag)), 1e-8);
    for (int i = 0; i < std::min(o.instances, 5); ++i) {
      const NamedOperator op(tag, random_for(tag, n, derive_seed(o.seed, i)));
      const OpNormReport pw = opnorm_l2(op, {.seed = derive_seed(o.seed, i + 100)});
      const OpNormReport dn = opnorm_dense(op);
      t.add(std::abs(pw.value - dn.value) / std::max(dn.value, 1e-300));
      w.add(std::abs(l2_ratio(op, *pw.witness) - pw.value) / std::max(pw.value, 1e-300));
    }
    out.checks.push_back(t.finish());
    out.checks.push_back(w.finish());
  }
  Tally r1("opnorm", "rank one pi1 on h_R = |R|^{-1/2}", 1e-8);
  const Grid2D grid(n, n);
  for (const DyadicRectangle r : {DyadicRectangle{{0, 0}, {0, 0}}, DyadicRectangle{{1, 1}, {2, 2}}}) {
    const NamedOperator op(OperatorTag::Pi1, haar_function(grid, r));
    r1.add(std::abs(opnorm_l2(op).value - 1.0 / std::sqrt(r.measure())) * std::sqrt(r.measure()));
  }
  out.checks.push_back(r1.finish());
}

void suite_gaps(const VerifyOptions& o, VerifyResult& out) {
  std::vector<int> sizes{2, 4};
  if (o.n >= 8) sizes.push_back(8);
  for (int size : sizes) {
    const std::string tag = " n=" + std::to_string(size);
    const HaarCoeffs2D h = build_hadamard_example(size);
    const HaarCoeffs2D id = build_identity_example(size);
    const Grid2D grid = h.grid;
    const double root = std::sqrt(static_cast<double>(size));
    Tally hm("gaps", "hadamard matrix bound = sqrt n" + tag, 1e-9);
    hm.add(std::abs(pi4_matrix_bound(h).value - root));
    Tally hb("gaps", "hadamard unit-square bmo = n" + tag, 1e-9);
    hb.add(std::abs(product_bmo_on(haar_inverse_2d(h), full_mask(grid)) - size));
    Tally hl("gaps", "hadamard l2 norm <= sqrt n" + tag, 1e-6);
    hl.add(std::max(0.0, opnorm_l2(NamedOperator(OperatorTag::Pi4, h), {.seed = o.seed}).value - root));
    Tally im("gaps", "identity matrix bound = 1" + tag, 1e-9);
    im.add(std::abs(pi4_matrix_bound(id).value - 1.0));
    Tally ib("gaps", "identity unit-square bmo = sqrt n" + tag, 1e-9);
    ib.add(std::abs(product_bmo_on(haar_inverse_2d(id), full_mask(grid)) - root));
    Tally is("gaps", "identity stronger norm estimate <= 2" + tag, 2.0);
    is.add(stronger_norm_estimate(id).lower.value);
    for (Tally* t : {&hm, &hb, &hl, &im, &ib, &is}) out.checks.push_back(t->finish());
  }
}

void suite_bmo(const VerifyOptions& o, VerifyResult& out) {
  Tally le("bmo", "heuristic <= exact", 1e-12), ge("bmo", "heuristic >= single rectangles", 1e-12);
  Tally sf("bmo", "exact sign-flip invariance", 1e-12);
  const Grid2D grid(2, 2);
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    const Signal2D f = random_cells(grid, s);
    const double exact = product_bmo_exact(f).value;
    const double heur = product_bmo_heuristic(f).value;
    le.add(heur - exact);
    double single = 0.0;
    const std::size_t m = node_count(2);
    for (std::size_t a = 0; a <= 2 * m; ++a) {
      for (std::size_t b = 0; b <= 2 * m; ++b) {
        const DyadicInterval ix = node_at(a), iy = node_at(b);
        if (ix.level > 2 || iy.level > 2) continue;
        single = std::max(single, product_bmo_on(f, rect_mask(grid, {ix, iy})));
      }
    }
    ge.add(single - heur);
    HaarCoeffs2D c = haar_forward_2d(f);
    std::mt19937_64 rng(derive_seed(s, 3));
    for (double& v : c.cc) v = (rng() & 1) ? -v : v;
    sf.add(std::abs(product_bmo_exact(haar_inverse_2d(c)).value - exact));
  }
  for (Tally* t : {&le, &ge, &sf}) out.checks.push_back(t->finish());
}

void suite_symmetry(const VerifyOptions& o, VerifyResult& out) {
  const int n = std::clamp(o.n, 1, 4);
  Tally t("symmetry", "pi4 adjoint transpose identity", 1e-10);
  const Grid2D grid(n, n);
  const std::size_t m = node_count(n);
  for (int i = 0; i < o.instances; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    std::mt19937_64 rng(s);
    HaarCoeffs2D g(grid);
    const auto v = gaussian_vector(rng, m * m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) g.cc[a * m + b] = g.cc[b * m + a] = v[a * m + b];
    }
    t.add(transpose_symmetry_check(g, random_cells(grid, derive_seed(s, 1))));
  }
  out.checks.push_back(t.finish());
}

using SuiteFn = void (*)(const VerifyOptions&, VerifyResult&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> s{
      {"calculus", suite_calculus}, {"expansion", suite_expansion}, {"duality", suite_duality},
      {"pointwise", suite_pointwise}, {"sparse", suite_sparse},     {"atoms", suite_atoms},
      {"opnorm", suite_opnorm},       {"gaps", suite_gaps},         {"bmo", suite_bmo},
      {"symmetry", suite_symmetry},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suites()) v.push_back(name);
    return v;
  }();
  return names;
}

VerifyResult run_verify(const VerifyOptions& opts) {
  if (opts.instances < 1) throw Error("instances must be at least 1", "instances");
  if (opts.n < 1 || opts.n > kMaxResolution) throw Error("n must lie in [1, 16]", "n");
  VerifyResult out;
  bool found = false;
  for (const auto& [name, fn] : suites()) {
    if (opts.suite != "all" && opts.suite != name) continue;
    found = true;
    VerifyOptions o = opts;
    o.seed = derive_seed(opts.seed, kSuiteStream);
    fn(o, out);
  }
  if (!found) throw Error("unknown suite '" + opts.suite + "'", "suite");
  return out;
}

}  // namespace bipara
