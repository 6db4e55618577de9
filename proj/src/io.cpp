#include "bipara/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bipara::io {

namespace {

std::string at_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

const json& require(const json& j, const std::string& key, const std::string& parent = {}) {
  if (!j.is_object()) throw Error("expected a JSON object", parent.empty() ? "<root>" : parent);
  auto it = j.find(key);
  if (it == j.end()) throw Error("missing field", at_path(parent, key));
  return *it;
}

std::int64_t as_int(const json& j, const std::string& field) {
  if (j.is_number_integer() || j.is_number_unsigned()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  throw Error("expected an integer", field);
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw Error("expected a number", field);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error("expected a finite number", field);
  return v;
}

int as_dims(const json& j) {
  const auto d = as_int(require(j, "dims"), "dims");
  if (d != 1 && d != 2) throw Error("dims must be 1 or 2", "dims");
  return static_cast<int>(d);
}

std::vector<int> as_resolution(const json& j, int dims) {
  const json& r = require(j, "resolution");
  std::vector<int> out;
  if (r.is_array()) {
    for (std::size_t i = 0; i < r.size(); ++i) out.push_back(static_cast<int>(as_int(r[i], "resolution")));
  } else {
    out.push_back(static_cast<int>(as_int(r, "resolution")));
    if (dims == 2) out.push_back(out.front());
  }
  if (static_cast<int>(out.size()) != dims) throw Error("resolution needs one entry per dimension", "resolution");
  for (int n : out) {
    if (n < 1 || n > kMaxResolution) throw Error("resolution must lie in [1, 16]", "resolution");
  }
  return out;
}

DyadicInterval interval_at(const json& e, const std::string& lkey, const std::string& kkey, const std::string& path) {
  const auto l = as_int(require(e, lkey, path), at_path(path, lkey));
  const auto k = as_int(require(e, kkey, path), at_path(path, kkey));
  if (l < 0 || l > 62 || k < 0 || k >= (std::int64_t{1} << l)) throw Error("dyadic index out of range", at_path(path, kkey));
  return {static_cast<int>(l), k};
}

json rect_json(const DyadicRectangle& r) {
  return {{"lx", r.ix.level}, {"kx", r.ix.index}, {"ly", r.iy.level}, {"ky", r.iy.index}};
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file " + path, path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what(), path);
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file " + path, path);
  out << text;
}

std::string dump(const json& j) { return j.dump() + "\n"; }

json signal_to_json(const AnySignal& f) {
  return std::visit(
      [](const auto& s) -> json {
        const auto v = s.values();
        json values = json::array();
        for (double x : v) values.push_back(x);
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Signal1D>) {
          return {{"dims", 1}, {"resolution", {s.grid().n}}, {"values", values}};
        } else {
          return {{"dims", 2}, {"resolution", {s.grid().n1, s.grid().n2}}, {"values", values}};
        }
      },
      f);
}

AnySignal signal_from_json(const json& j) {
  const int dims = as_dims(j);
  const auto res = as_resolution(j, dims);
  const json& vals = require(j, "values");
  if (!vals.is_array()) throw Error("expected an array", "values");
  std::vector<double> v;
  v.reserve(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v.push_back(as_number(vals[i], "values[" + std::to_string(i) + "]"));
  if (dims == 1) {
    const Grid1D g(res[0]);
    if (v.size() != g.cells()) throw Error("values must have 2^N entries", "values");
    return Signal1D(g, std::move(v));
  }
  const Grid2D g(res[0], res[1]);
  if (v.size() != g.cells()) throw Error("values must have 2^(N1+N2) entries", "values");
  return Signal2D(g, std::move(v));
}

json coeffs_to_json(const HaarCoeffs1D& c) {
  json entries = json::array();
  for (std::size_t i = 0; i < c.detail.size(); ++i) {
    if (c.detail[i] == 0.0) continue;
    const DyadicInterval d = node_at(i);
    entries.push_back({{"lx", d.level}, {"kx", d.index}, {"value", c.detail[i]}});
  }
  return {{"dims", 1}, {"resolution", {c.grid.n}}, {"mean", c.mean}, {"entries", entries}};
}

json coeffs_to_json(const HaarCoeffs2D& c) {
  json entries = json::array();
  const std::size_t m2 = node_count(c.grid.n2);
  for (std::size_t i = 0; i < c.cc.size(); ++i) {
    if (c.cc[i] == 0.0) continue;
    json e = rect_json({node_at(i / m2), node_at(i % m2)});
    e["block"] = "cc";
    e["value"] = c.cc[i];
    entries.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < c.cm.size(); ++i) {
    if (c.cm[i] == 0.0) continue;
    const DyadicInterval d = node_at(i);
    entries.push_back({{"lx", d.level}, {"kx", d.index}, {"block", "cm"}, {"value", c.cm[i]}});
  }
  for (std::size_t i = 0; i < c.mc.size(); ++i) {
    if (c.mc[i] == 0.0) continue;
    const DyadicInterval d = node_at(i);
    entries.push_back({{"ly", d.level}, {"ky", d.index}, {"block", "mc"}, {"value", c.mc[i]}});
  }
  return {{"dims", 2}, {"resolution", {c.grid.n1, c.grid.n2}}, {"mm", c.mm}, {"entries", entries}};
}

json coeffs_to_json(const AnyCoeffs& c) {
  return std::visit([](const auto& x) { return coeffs_to_json(x); }, c);
}

AnyCoeffs coeffs_from_json(const json& j) {
  const int dims = as_dims(j);
  const auto res = as_resolution(j, dims);
  const json empty = json::array();
  const json& entries = j.contains("entries") ? j.at("entries") : empty;
  if (!entries.is_array()) throw Error("expected an array", "entries");

  auto root_mean = [&](const char* primary, const char* alternate) {
    if (j.contains(primary)) return as_number(j.at(primary), primary);
    if (j.contains(alternate)) return as_number(j.at(alternate), alternate);
    return 0.0;
  };

  if (dims == 1) {
    HaarCoeffs1D c{Grid1D(res[0])};
    c.mean = root_mean("mean", "mm");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string path = "entries[" + std::to_string(i) + "]";
      const json& e = entries[i];
      const double v = as_number(require(e, "value", path), path + ".value");
      if (e.contains("block") && e.at("block") != "c" && e.at("block") != "cc") {
        throw Error("1D coefficients only have the detail block", path + ".block");
      }
      const DyadicInterval d = interval_at(e, "lx", "kx", path);
      if (d.level >= res[0]) throw Error("interval finer than the grid", path + ".lx");
      c.at(d) += v;
    }
    return c;
  }

  HaarCoeffs2D c{Grid2D(res[0], res[1])};
  c.mm = root_mean("mm", "mean");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = "entries[" + std::to_string(i) + "]";
    const json& e = entries[i];
    const double v = as_number(require(e, "value", path), path + ".value");
    std::string block = "cc";
    if (e.contains("block")) {
      if (!e.at("block").is_string()) throw Error("block must be a string", path + ".block");
      block = e.at("block").get<std::string>();
    }
    if (block == "cc") {
      const DyadicInterval ix = interval_at(e, "lx", "kx", path);
      const DyadicInterval iy = interval_at(e, "ly", "ky", path);
      if (ix.level >= res[0]) throw Error("interval finer than the grid", path + ".lx");
      if (iy.level >= res[1]) throw Error("interval finer than the grid", path + ".ly");
      c.at({ix, iy}) += v;
    } else if (block == "cm") {
      const DyadicInterval ix = interval_at(e, "lx", "kx", path);
      if (ix.level >= res[0]) throw Error("interval finer than the grid", path + ".lx");
      c.cm[node_index(ix)] += v;
    } else if (block == "mc") {
      const DyadicInterval iy = interval_at(e, "ly", "ky", path);
      if (iy.level >= res[1]) throw Error("interval finer than the grid", path + ".ly");
      c.mc[node_index(iy)] += v;
    } else if (block == "mm") {
      c.mm += v;
    } else {
      throw Error("block must be one of cc, cm, mc, mm", path + ".block");
    }
  }
  return c;
}

AnySignal symbol_from_json(const json& j) {
  if (j.is_object() && j.contains("values")) return signal_from_json(j);
  const AnyCoeffs c = coeffs_from_json(j);
  if (const auto* c1 = std::get_if<HaarCoeffs1D>(&c)) return haar_inverse_1d(*c1);
  return haar_inverse_2d(std::get<HaarCoeffs2D>(c));
}

RectFamily family_from_json(const json& j, std::optional<Grid2D> fallback) {
  const json* list = &j;
  std::optional<Grid2D> grid = fallback;
  if (j.is_object()) {
    list = &require(j, "rects");
    if (j.contains("resolution")) {
      const auto res = as_resolution(j, 2);
      grid = Grid2D(res[0], res[1]);
    }
  }
  if (!list->is_array()) throw Error("expected an array of rectangles", "rects");
  std::vector<DyadicRectangle> rects;
  std::vector<int> labels;
  bool labelled = false;
  int lx = 1, ly = 1;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = "rects[" + std::to_string(i) + "]";
    const json& e = (*list)[i];
    DyadicRectangle r{interval_at(e, "lx", "kx", path), interval_at(e, "ly", "ky", path)};
    lx = std::max(lx, r.ix.level);
    ly = std::max(ly, r.iy.level);
    if (e.contains("label")) {
      labelled = true;
      labels.push_back(static_cast<int>(as_int(e.at("label"), path + ".label")));
    } else {
      labels.push_back(0);
    }
    rects.push_back(r);
  }
  if (!grid) grid = Grid2D(std::min(lx, kMaxResolution), std::min(ly, kMaxResolution));
  std::optional<std::vector<int>> lab;
  if (labelled) lab = std::move(labels);
  return RectFamily(*grid, std::move(rects), std::move(lab));
}

json family_to_json(const RectFamily& fam) {
  json rects = json::array();
  for (std::size_t i = 0; i < fam.rects.size(); ++i) {
    json e = rect_json(fam.rects[i]);
    if (fam.labels) e["label"] = (*fam.labels)[i];
    rects.push_back(std::move(e));
  }
  return {{"resolution", {fam.grid.n1, fam.grid.n2}}, {"rects", rects}};
}

json sparse_to_json(const SparseFamily& sf) {
  json j = family_to_json(sf.base);
  json wit = json::array();
  const std::size_t ny = sf.base.grid.cells_y();
  for (const auto& cells : sf.witness) {
    json w = json::array();
    for (std::size_t c : cells) w.push_back({c / ny, c % ny});
    wit.push_back(std::move(w));
  }
  j["witness"] = wit;
  j["eta"] = sf.eta;
  j["union_ratio"] = sf.union_ratio;
  j["verified"] = sf.verify();
  return j;
}

json mask_to_json(const Grid2D& grid, const CellMask& mask) {
  json out = json::array();
  const std::size_t ny = grid.cells_y();
  for (std::size_t c = 0; c < mask.size(); ++c) {
    if (mask[c]) out.push_back({c / ny, c % ny});
  }
  return out;
}

json report_to_json(const OpNormReport& r) {
  json j = {
      {"value", r.value},
      {"method", std::string(method_name(r.method))},
      {"bound_type", std::string(bound_type_name(r.bound_type))},
      {"diagnostics",
       {{"iterations", r.diagnostics.iterations},
        {"restarts", r.diagnostics.restarts},
        {"residual", r.diagnostics.residual},
        {"seed", r.diagnostics.seed},
        {"converged", r.diagnostics.converged}}},
  };
  if (!r.diagnostics.warning.empty()) j["diagnostics"]["warning"] = r.diagnostics.warning;
  j["witness"] = r.witness ? signal_to_json(*r.witness) : json(nullptr);
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  j["extras"] = extras;
  return j;
}

json decomposition_to_json(const AtomicDecomposition& d) {
  json atoms = json::array();
  for (std::size_t i = 0; i < d.atoms.size(); ++i) {
    atoms.push_back({{"omega", mask_to_json(d.grid, d.omegas[i])},
                     {"scalar", d.scalars[i]},
                     {"coefficients", coeffs_to_json(d.atoms[i].coeffs)}});
  }
  return {{"resolution", {d.grid.n1, d.grid.n2}},
          {"p", d.p},
          {"s", d.s},
          {"quasi_norm_sum", d.quasi_norm_sum()},
          {"atoms", atoms}};
}

}  // namespace bipara::io
