#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "bipara/haar.hpp"
#include "bipara/signal.hpp"

namespace bipara {

/// Per-axis pattern: 0 pairs with the normalized indicator chi_I/|I|, 1 with
/// h_I. The output pattern is (f + g) mod 2; (0, 0) is rejected.
struct ParaSignature1 {
  int f = 0;
  int g = 1;

  ParaSignature1() = default;
  ParaSignature1(int f_, int g_);

  int out() const { return (f + g) % 2; }
  /// Pattern of the operator f' -> adjoint, with g frozen.
  ParaSignature1 adjoint() const { return {out(), g}; }
  auto operator<=>(const ParaSignature1&) const = default;
};

struct ParaSignature2 {
  ParaSignature1 x;
  ParaSignature1 y;

  ParaSignature2 adjoint() const { return {x.adjoint(), y.adjoint()}; }
  auto operator<=>(const ParaSignature2&) const = default;
};

/// <f, h^e_I> for every interval of level < N (e = 0: average, e = 1: Haar coefficient).
std::vector<double> pattern_coefficients(const Signal1D& f, int e);
/// <f, h^ex_I (x) h^ey_J> as a (2^N1 - 1) x (2^N2 - 1) array.
std::vector<double> pattern_coefficients(const Signal2D& f, int ex, int ey);
/// sum_I c_I h^e_I.
Signal1D pattern_synthesis(Grid1D grid, std::span<const double> c, int e);
Signal2D pattern_synthesis(Grid2D grid, std::span<const double> c, int ex, int ey);

Signal1D para_one(ParaSignature1 sig, const Signal1D& f, const Signal1D& g);
Signal2D para_two(ParaSignature2 sig, const Signal2D& f, const Signal2D& g);

/// f g - sum over the three 1D signatures: the constant <f><g>.
Signal1D root_mean_correction_1d(const Signal1D& f, const Signal1D& g);
/// f g - sum over the nine 2D signatures: the root-mean product plus the 1D
/// expansions of the marginals, each tensored with the constant 1.
Signal2D root_mean_correction_2d(const Signal2D& f, const Signal2D& g);

enum class OperatorTag { Pi1, Pi1Adjoint, Pi2, Pi3, Pi4, PiG, PiGPrime, PiGDoublePrime };

/// CLI spelling: pi1, pi1t, pi2, pi3, pi4, pig, pigp, pigpp.
std::string_view operator_name(OperatorTag tag);
OperatorTag parse_operator(std::string_view name);
bool is_one_parameter(OperatorTag tag);
ParaSignature1 signature_1d(OperatorTag tag);
ParaSignature2 signature_2d(OperatorTag tag);

/// A paraproduct with its symbol g frozen. The symbol's pattern
/// coefficients for the operator and its adjoint are computed once.
class NamedOperator {
 public:
  NamedOperator(OperatorTag tag, AnySignal symbol);
  NamedOperator(OperatorTag tag, const HaarCoeffs1D& symbol);
  NamedOperator(OperatorTag tag, const HaarCoeffs2D& symbol);

  OperatorTag tag() const { return tag_; }
  const AnySignal& symbol() const { return symbol_; }
  int dims() const { return is_one_parameter(tag_) ? 1 : 2; }

  Signal1D apply(const Signal1D& f) const;
  Signal2D apply(const Signal2D& f) const;
  AnySignal apply(const AnySignal& f) const;
  Signal1D apply_adjoint(const Signal1D& f) const;
  Signal2D apply_adjoint(const Signal2D& f) const;
  AnySignal apply_adjoint(const AnySignal& f) const;

 private:
  void check_grid(const AnySignal& f) const;

  OperatorTag tag_;
  AnySignal symbol_;
  std::vector<double> forward_g_;
  std::vector<double> adjoint_g_;
};

AnySignal apply_named(const NamedOperator& op, const AnySignal& f);

/// (<T f, f'>, <f, T* f'>); for Pi4 instead (<T f, f'>, <pi3 with symbol f' applied to f, g>).
std::pair<double, double> adjoint_pair_check(const NamedOperator& op, const AnySignal& f, const AnySignal& f_prime);

/// max |(Pi4 adjoint)(f~)(y, x) - (Pi4)(f)(x, y)| for cc-symmetric g on a square grid.
double transpose_symmetry_check(const HaarCoeffs2D& g, const Signal2D& f);

}  // namespace bipara
