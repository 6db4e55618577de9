#pragma once

#include <limits>
#include <string>
#include <string_view>

#include "bipara/cells.hpp"
#include "bipara/haar.hpp"
#include "bipara/signal.hpp"

namespace bipara {

/// Exact product BMO enumerates every union of cells; N1 + N2 is capped here.
inline constexpr int kProductBmoExactCap = 4;

/// Which norm or quasi-norm to evaluate, with its exponent where one applies
/// (p for Lp / Hp kinds, r for SliceHrLr).
struct NormKind {
  enum class Tag {
    Lp,
    HpSquare,
    HpMaximal,
    BmoLine,
    ProductBmoExact,
    ProductBmoHeuristic,
    SliceBmoSup,
    SliceHrLr,
  };

  Tag tag = Tag::HpSquare;
  double p = 2.0;

  static NormKind lp(double p) { return {Tag::Lp, p}; }
  static NormKind hp_square(double p) { return {Tag::HpSquare, p}; }
  static NormKind hp_maximal(double p) { return {Tag::HpMaximal, p}; }
  static NormKind bmo_line() { return {Tag::BmoLine, 0.0}; }
  static NormKind product_bmo_exact() { return {Tag::ProductBmoExact, 0.0}; }
  static NormKind product_bmo_heuristic() { return {Tag::ProductBmoHeuristic, 0.0}; }
  static NormKind slice_bmo_sup() { return {Tag::SliceBmoSup, 0.0}; }
  static NormKind slice_hr_lr(double r) { return {Tag::SliceHrLr, r}; }

  bool has_exponent() const;
  /// Kebab-case name used on the command line ("hp-square", ...).
  std::string name() const;
  static NormKind parse(std::string_view name, double exponent);
  /// Throws unless the exponent is admissible for the tag.
  void validate() const;
};

double lp_norm(const Signal1D& f, double p);
double lp_norm(const Signal2D& f, double p);
/// (sum |v|^p * cell_measure)^{1/p}, or max |v| for p = infinity.
double lp_norm(std::span<const double> values, double cell_measure, double p);

/// Dyadic maximal function, sup over all I (levels 0..N) containing the cell.
Signal1D maximal_1d(const Signal1D& f);
/// Strong maximal function over all dyadic rectangles containing the cell.
Signal2D strong_maximal_2d(const Signal2D& f);
/// (sum_I <f,h_I>^2 chi_I/|I|)^{1/2}.
Signal1D square_1d(const Signal1D& f);
/// (sum_R f_R^2 chi_R/|R|)^{1/2}; only the cc block enters.
Signal2D square_2d(const Signal2D& f);

/// sup_I (|I|^{-1} sum_{I' in I} <f,h_I'>^2)^{1/2}.
double bmo_line(const Signal1D& f);

/// (|Omega|^{-1} sum_{R in Omega} f_R^2)^{1/2} for one union of cells.
double product_bmo_on(const Signal2D& f, const CellMask& omega);

struct ProductBmoEstimate {
  double value = 0.0;
  CellMask omega;         // maximizing union of cells
  std::string candidate;  // which candidate family produced it
};

/// Brute force over all 2^(cells) unions; requires N1 + N2 <= kProductBmoExactCap.
ProductBmoEstimate product_bmo_exact(const Signal2D& f);
/// Max over a candidate family of unions: single rectangles, superlevel sets
/// of S(f) or M(f), sparse level-set families. Never exceeds the exact value.
ProductBmoEstimate product_bmo_heuristic(const Signal2D& f);

/// `smoothing` > 0 replaces sqrt(s) by sqrt(s + smoothing) inside square
/// functions; the ratio-ascent search uses it, reported values never do.
double norm(const Signal1D& f, NormKind kind, double smoothing = 0.0);
double norm(const Signal2D& f, NormKind kind, double smoothing = 0.0);
double norm(const AnySignal& f, NormKind kind, double smoothing = 0.0);

enum class MixedKind { S2M1, M1S2, S1M2, M2S1 };

std::string_view mixed_kind_name(MixedKind kind);

/// The four square-maximal / maximal-square operators, evaluated per cell.
Signal2D mixed_operator(const Signal2D& f, MixedKind kind);

namespace detail {
/// S(f)^2 per cell.
std::vector<double> square_sq_2d(const Signal2D& f);
std::vector<double> square_sq_1d(const Signal1D& f);
}  // namespace detail

}  // namespace bipara
