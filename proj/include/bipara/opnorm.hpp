#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bipara/functionals.hpp"
#include "bipara/paraproducts.hpp"

namespace bipara {

enum class OpNormMethod { PowerIteration, DenseSpectral, RatioAscent, StructuredThm1, StructuredThm2, MatrixViewBound };
enum class BoundType { Lower, Upper, TwoSided };

std::string_view method_name(OpNormMethod m);
std::string_view bound_type_name(BoundType b);

struct OpNormDiagnostics {
  int iterations = 0;
  int restarts = 0;
  double residual = 0.0;
  std::uint64_t seed = 0;
  bool converged = true;
  std::string warning;
};

/// Lower bounds carry a witness whose ratio reproduces `value`; upper bounds do not.
struct OpNormReport {
  double value = 0.0;
  std::optional<AnySignal> witness;
  OpNormMethod method = OpNormMethod::PowerIteration;
  BoundType bound_type = BoundType::Lower;
  OpNormDiagnostics diagnostics;
  /// Method-specific scalar outputs (norms of witness and image, slice sums, ...).
  std::map<std::string, double> extras;
};

/// ||T f||_2 / ||f||_2 with cell-measure L^2 norms; 0 for f = 0.
double l2_ratio(const NamedOperator& op, const AnySignal& f);
/// out(T f) / in(f); 0 when in(f) = 0.
double norm_ratio(const NamedOperator& op, NormKind in, NormKind out, const AnySignal& f, double smoothing = 0.0);

struct PowerOptions {
  double tolerance = 1e-10;  // relative change of the Rayleigh quotient
  int max_iterations = 10000;
  std::uint64_t seed = 1;
  /// Compare with the dense oracle when the grid is small enough.
  bool dense_check = false;
};

/// Largest singular value by power iteration on T*T.
OpNormReport opnorm_l2(const NamedOperator& op, const PowerOptions& opts = {});

/// Dense SVD of T in the orthonormal cell basis; requires at most kDenseCap unknowns.
inline constexpr std::size_t kDenseCap = 4096;
OpNormReport opnorm_dense(const NamedOperator& op);

struct SearchBudget {
  int restarts = 16;
  int iterations = 500;
  std::uint64_t seed = 1;
  /// Restart 0 starts from the cancellative part of this signal instead of a random point.
  std::optional<AnySignal> warm_start;
};

inline constexpr double kSearchSmoothing = 1e-12;
inline constexpr double kSearchStep = 1e-5;

/// Normalized ascent of out(T f)/in(f) over cancellative coefficients of f.
OpNormReport opnorm_search(const NamedOperator& op, NormKind in, NormKind out, const SearchBudget& budget = {});

/// The same function on a grid with one more generation per axis.
Signal2D refine_once(const Signal2D& g);

/// Sparse level-set test function for pi2 with exponents (p, r); 1/q = 1/p + 1/r.
/// The witness lives on refine_once(g)'s grid so finest-cell rectangles carry Haar functions.
OpNormReport thm1_witness(const Signal2D& g, double p, double r);

/// Row-assembled test function for pi3 from one-parameter witnesses on each row interval.
OpNormReport thm2_row_witness(const Signal2D& g, double p, double r, const std::vector<DyadicInterval>& rows,
                              const SearchBudget& budget = {});

/// max over cells of the spectral norm of [g_{IxJ} |IxJ|^{-1/2}] over I containing x, J containing y.
OpNormReport pi4_matrix_bound(const HaarCoeffs2D& g);

/// Lower estimate of sup sum <|f_J|>_I <|f'_I|>_J |g_{IxJ}| over unit L^2 inputs, and
/// its matrix-view upper bound computed from |g|.
struct StrongerNormReport {
  OpNormReport lower;
  OpNormReport upper;
};
StrongerNormReport stronger_norm_estimate(const HaarCoeffs2D& g, int iterations = 2000, double tolerance = 1e-12);

/// Sylvester construction; n must be a power of two.
std::vector<std::vector<int>> sylvester_hadamard(int n);

/// g_{IxJ} = H_{level(I), level(J)} |IxJ|^{1/2} for levels < n on an n x n grid.
HaarCoeffs2D build_hadamard_example(int n, int resolution = 0);
/// g_{IxJ} = |IxJ|^{1/2} when level(I) = level(J) < n.
HaarCoeffs2D build_identity_example(int n, int resolution = 0);

}  // namespace bipara
