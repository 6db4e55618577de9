#pragma once

#include <json.hpp>
#include <string>
#include <variant>

#include "bipara/atoms.hpp"
#include "bipara/haar.hpp"
#include "bipara/opnorm.hpp"
#include "bipara/signal.hpp"
#include "bipara/sparse.hpp"

namespace bipara::io {

using json = nlohmann::json;
using AnyCoeffs = std::variant<HaarCoeffs1D, HaarCoeffs2D>;

/// Parses a file; a missing or malformed file raises Error with field = path.
json read_json_file(const std::string& path);
/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);
/// Compact single-line dump with a trailing newline.
std::string dump(const json& j);

json signal_to_json(const AnySignal& f);
AnySignal signal_from_json(const json& j);

/// Only nonzero entries are listed; the root mean goes to "mean" (1D) or "mm" (2D).
json coeffs_to_json(const HaarCoeffs1D& c);
json coeffs_to_json(const HaarCoeffs2D& c);
json coeffs_to_json(const AnyCoeffs& c);
AnyCoeffs coeffs_from_json(const json& j);

/// Accepts either interchange format; coefficient files are synthesized.
AnySignal symbol_from_json(const json& j);

/// Either a bare list of {lx, kx, ly, ky} or {"resolution": [N1, N2], "rects": [...]}.
/// A bare list gets the coarsest grid holding every rectangle unless `fallback` is given.
RectFamily family_from_json(const json& j, std::optional<Grid2D> fallback = std::nullopt);
json family_to_json(const RectFamily& fam);
json sparse_to_json(const SparseFamily& sf);

/// Cells of a mask as [[x, y], ...].
json mask_to_json(const Grid2D& grid, const CellMask& mask);

json report_to_json(const OpNormReport& r);
json decomposition_to_json(const AtomicDecomposition& d);

}  // namespace bipara::io
