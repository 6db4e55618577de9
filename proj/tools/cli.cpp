#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "bipara/atoms.hpp"
#include "bipara/corpus.hpp"
#include "bipara/functionals.hpp"
#include "bipara/io.hpp"
#include "bipara/opnorm.hpp"
#include "bipara/paraproducts.hpp"
#include "bipara/sparse.hpp"
#include "bipara/verify.hpp"

#ifndef BIPARA_VERSION
#define BIPARA_VERSION "0.0.0"
#endif

namespace bipara::cli {

namespace {

using io::json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::string out = "-";
  std::string format = "json";
  bool reproducible = false;
};

struct Config {
  Common common;
  // transform / apply / norm / decompose
  std::string in;
  bool inverse = false;
  std::string op;
  std::string g;
  std::string f;
  std::string kind = "hp-square";
  double p = 2.0;
  double r = 2.0;
  double s = 2.0;
  // opnorm
  std::string method = "l2";
  std::string in_norm = "hp-square:2";
  std::string out_norm = "hp-square:2";
  int restarts = 16;
  int iters = 500;
  std::uint64_t seed = 1;
  bool dense_check = false;
  int row_level = 0;
  std::string rows;
  // sparse
  std::string family;
  bool extract = false;
  std::string carleson;
  std::vector<double> jn;
  std::vector<int> resolution;
  // construct / generate
  std::string example;
  int n = 4;
  int count = 1;
  std::string dist = "gaussian";
  std::string out_dir = "corpus";
  // verify / report
  std::string suite = "all";
  int instances = 20;
  std::string corpus;
  std::vector<double> exponents{0.5, 1.0, 2.0, 4.0};
};

/// kind or kind:exponent.
NormKind parse_norm_spec(const std::string& spec, const std::string& field) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  double exponent = 2.0;
  if (colon != std::string::npos) {
    const std::string tail = spec.substr(colon + 1);
    if (tail == "inf") {
      exponent = std::numeric_limits<double>::infinity();
    } else {
      try {
        std::size_t used = 0;
        exponent = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(tail);
      } catch (const std::exception&) {
        throw Error("malformed exponent in '" + spec + "'", field);
      }
    }
  }
  try {
    return NormKind::parse(name, exponent);
  } catch (const Error& e) {
    throw Error(e.what(), field);
  }
}

/// "ab" or "ab,cd" with digits in {0, 1}.
std::vector<ParaSignature1> parse_pattern(const std::string& text) {
  std::vector<ParaSignature1> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.size() != 2 || (part[0] != '0' && part[0] != '1') || (part[1] != '0' && part[1] != '1')) {
      throw Error("pattern must be eps:ab or eps:ab,cd with digits 0/1", "op");
    }
    try {
      out.emplace_back(part[0] - '0', part[1] - '0');
    } catch (const Error& e) {
      throw Error(e.what(), "op");
    }
  }
  if (out.empty() || out.size() > 2) throw Error("pattern must have one or two axes", "op");
  return out;
}

std::vector<DyadicInterval> parse_rows(const std::string& text) {
  std::vector<DyadicInterval> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw Error("rows must be level:index pairs", "rows");
    try {
      out.emplace_back(std::stoi(part.substr(0, colon)), std::stoll(part.substr(colon + 1)));
    } catch (const Error&) {
      throw Error("row interval out of range", "rows");
    } catch (const std::exception&) {
      throw Error("rows must be level:index pairs", "rows");
    }
  }
  return out;
}

json config_echo(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    std::string value;
    for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    if (value.empty()) value = opt->get_default_str();
    cfg[name.substr(name.find_first_not_of('-'))] = value;
  }
  return cfg;
}

class Output {
 public:
  Output(const Config& cfg, const CLI::App* sub, Clock::time_point start, std::uint64_t seed)
      : cfg_(cfg), sub_(sub), start_(start), seed_(seed) {}

  json meta() const {
    const double wall = cfg_.common.reproducible
                            ? 0.0
                            : std::chrono::duration<double>(Clock::now() - start_).count();
    return {{"version", BIPARA_VERSION},
            {"command", sub_->get_name()},
            {"config", config_echo(sub_)},
            {"seed", seed_},
            {"wall_clock_seconds", wall}};
  }

  /// Reports carry the meta block; interchange files are written bare.
  void report(json body) const {
    require_json();
    body["meta"] = meta();
    io::write_text(cfg_.common.out, io::dump(body));
  }
  void data(const json& body) const {
    require_json();
    io::write_text(cfg_.common.out, io::dump(body));
  }
  void csv(const std::vector<EnvelopeRow>& rows) const {
    std::ostringstream o;
    o.precision(17);
    o << "seed,n1,n2,quantity,value\n";
    for (const auto& r : rows) o << r.seed << ',' << r.n1 << ',' << r.n2 << ',' << r.quantity << ',' << r.value << '\n';
    io::write_text(cfg_.common.out, o.str());
  }
  bool wants_csv() const { return cfg_.common.format == "csv"; }

 private:
  void require_json() const {
    if (cfg_.common.format != "json") throw Error("this command only writes JSON", "format");
  }
  const Config& cfg_;
  const CLI::App* sub_;
  Clock::time_point start_;
  std::uint64_t seed_;
};

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("-o,--out", cfg.common.out, "Output path, '-' for stdout");
  sub->add_option("--format", cfg.common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--reproducible", cfg.common.reproducible, "Zero the wall-clock field for byte-identical output");
}

Signal2D require_2d(const AnySignal& s, const std::string& field) {
  if (const auto* p = std::get_if<Signal2D>(&s)) return *p;
  throw Error("expected a two-dimensional signal", field);
}

int cmd_transform(const Config& cfg, const Output& out) {
  const json j = io::read_json_file(cfg.in);
  if (cfg.inverse) {
    out.data(io::signal_to_json(io::symbol_from_json(j)));
    return kExitOk;
  }
  const AnySignal f = io::signal_from_json(j);
  if (const auto* f1 = std::get_if<Signal1D>(&f)) {
    out.data(io::coeffs_to_json(haar_forward_1d(*f1)));
  } else {
    out.data(io::coeffs_to_json(haar_forward_2d(std::get<Signal2D>(f))));
  }
  return kExitOk;
}

int cmd_apply(const Config& cfg, const Output& out) {
  const AnySignal g = io::symbol_from_json(io::read_json_file(cfg.g));
  const AnySignal f = io::signal_from_json(io::read_json_file(cfg.f));
  if (g.index() != f.index()) throw Error("f and g must have the same dimension", "f");
  if (cfg.op.rfind("eps:", 0) == 0) {
    const auto pat = parse_pattern(cfg.op.substr(4));
    if (pat.size() == 1) {
      if (!std::holds_alternative<Signal1D>(f)) throw Error("one-axis pattern needs 1D signals", "op");
      out.data(io::signal_to_json(para_one(pat[0], std::get<Signal1D>(f), std::get<Signal1D>(g))));
    } else {
      if (!std::holds_alternative<Signal2D>(f)) throw Error("two-axis pattern needs 2D signals", "op");
      out.data(io::signal_to_json(para_two({pat[0], pat[1]}, std::get<Signal2D>(f), std::get<Signal2D>(g))));
    }
    return kExitOk;
  }
  const NamedOperator op(parse_operator(cfg.op), g);
  out.data(io::signal_to_json(op.apply(f)));
  return kExitOk;
}

int cmd_norm(const Config& cfg, const Output& out) {
  const AnySignal f = io::signal_from_json(io::read_json_file(cfg.in));
  static const std::pair<const char*, MixedKind> mixed[] = {
      {"s2m1", MixedKind::S2M1}, {"m1s2", MixedKind::M1S2}, {"s1m2", MixedKind::S1M2}, {"m2s1", MixedKind::M2S1}};
  for (const auto& [name, mk] : mixed) {
    if (cfg.kind == name) {
      if (!(cfg.p > 0.0)) throw Error("exponent must be positive", "p");
      const double v = lp_norm(mixed_operator(require_2d(f, "in"), mk), cfg.p);
      out.report({{"kind", cfg.kind}, {"p", cfg.p}, {"value", v}});
      return kExitOk;
    }
  }
  NormKind kind;
  try {
    kind = NormKind::parse(cfg.kind, cfg.kind == "slice-hr-lr" ? cfg.r : cfg.p);
  } catch (const Error& e) {
    throw Error(e.what(), e.field() == "kind" ? "kind" : (cfg.kind == "slice-hr-lr" ? "r" : "p"));
  }
  json body = {{"kind", kind.name()}};
  if (kind.has_exponent()) body[kind.tag == NormKind::Tag::SliceHrLr ? "r" : "p"] = kind.p;
  if (kind.tag == NormKind::Tag::ProductBmoExact || kind.tag == NormKind::Tag::ProductBmoHeuristic) {
    const Signal2D f2 = require_2d(f, "in");
    const ProductBmoEstimate e =
        kind.tag == NormKind::Tag::ProductBmoExact ? product_bmo_exact(f2) : product_bmo_heuristic(f2);
    body["value"] = e.value;
    body["omega"] = io::mask_to_json(f2.grid(), e.omega);
    body["candidate"] = e.candidate;
  } else {
    body["value"] = norm(f, kind);
  }
  out.report(body);
  return kExitOk;
}

int cmd_opnorm(const Config& cfg, const Output& out) {
  const AnySignal g = io::symbol_from_json(io::read_json_file(cfg.g));
  const OperatorTag tag = parse_operator(cfg.op);
  const SearchBudget budget{cfg.restarts, cfg.iters, cfg.seed, std::nullopt};
  if (cfg.restarts < 1) throw Error("restarts must be at least 1", "restarts");
  if (cfg.iters < 1) throw Error("iterations must be at least 1", "iters");

  auto needs = [&](OperatorTag want) {
    if (tag != want) throw Error("method " + cfg.method + " requires --op " + std::string(operator_name(want)), "op");
  };
  json body;
  if (cfg.method == "l2") {
    body = io::report_to_json(opnorm_l2(NamedOperator(tag, g), {.seed = cfg.seed, .dense_check = cfg.dense_check}));
  } else if (cfg.method == "dense") {
    body = io::report_to_json(opnorm_dense(NamedOperator(tag, g)));
  } else if (cfg.method == "search") {
    body = io::report_to_json(opnorm_search(NamedOperator(tag, g), parse_norm_spec(cfg.in_norm, "in-norm"),
                                            parse_norm_spec(cfg.out_norm, "out-norm"), budget));
  } else if (cfg.method == "thm1") {
    needs(OperatorTag::Pi2);
    body = io::report_to_json(thm1_witness(require_2d(g, "g"), cfg.p, cfg.r));
  } else if (cfg.method == "thm2") {
    needs(OperatorTag::Pi3);
    const Signal2D g2 = require_2d(g, "g");
    std::vector<DyadicInterval> rows;
    if (!cfg.rows.empty()) {
      rows = parse_rows(cfg.rows);
    } else {
      if (cfg.row_level < 0 || cfg.row_level >= g2.grid().n2) throw Error("row level must lie in [0, N2)", "row-level");
      for (std::int64_t k = 0; k < (std::int64_t{1} << cfg.row_level); ++k) rows.emplace_back(cfg.row_level, k);
    }
    body = io::report_to_json(thm2_row_witness(g2, cfg.p, cfg.r, rows, budget));
  } else if (cfg.method == "matrix-view") {
    needs(OperatorTag::Pi4);
    body = io::report_to_json(pi4_matrix_bound(haar_forward_2d(require_2d(g, "g"))));
  } else {
    needs(OperatorTag::Pi4);
    const StrongerNormReport s = stronger_norm_estimate(haar_forward_2d(require_2d(g, "g")));
    body = io::report_to_json(s.lower);
    body["upper"] = io::report_to_json(s.upper);
  }
  body["op"] = std::string(operator_name(tag));
  out.report(body);
  return kExitOk;
}

int cmd_sparse(const Config& cfg, const Output& out) {
  std::optional<Grid2D> grid;
  if (!cfg.resolution.empty()) {
    if (cfg.resolution.size() != 2) throw Error("resolution needs two entries", "resolution");
    grid = Grid2D(cfg.resolution[0], cfg.resolution[1]);
  }
  const RectFamily fam = io::family_from_json(io::read_json_file(cfg.family), grid);
  if (!cfg.extract && cfg.carleson.empty() && cfg.jn.empty()) {
    throw Error("choose at least one of --extract, --carleson, --jn", "extract");
  }
  json body = json::object();
  body["family_size"] = fam.size();
  if (cfg.extract || !cfg.jn.empty()) {
    const SparseFamily sf = sparse_extract(fam);
    if (cfg.extract) body["extract"] = io::sparse_to_json(sf);
    json jn = json::array();
    for (double p : cfg.jn) {
      if (!(p > 0.0)) throw Error("exponent must be positive", "jn");
      jn.push_back({{"p", p}, {"value", jn_profile(sf, p)}});
    }
    if (!cfg.jn.empty()) body["jn_profile"] = jn;
  }
  if (!cfg.carleson.empty()) {
    const CarlesonEstimate c =
        carleson_constant(fam, cfg.carleson == "exact" ? CarlesonMode::Exact : CarlesonMode::Restricted);
    body["carleson"] = {{"mode", cfg.carleson},
                        {"value", c.value},
                        {"exhaustive", c.exhaustive},
                        {"omega", io::mask_to_json(fam.grid, c.omega)}};
  }
  out.report(body);
  return kExitOk;
}

int cmd_decompose(const Config& cfg, const Output& out) {
  const Signal2D f = require_2d(io::signal_from_json(io::read_json_file(cfg.in)), "in");
  const AtomicDecomposition d = atomic_decompose(f, cfg.p, cfg.s);
  json body = io::decomposition_to_json(d);
  body["reconstruction_error"] = max_abs_difference(d.reconstruct().values(), f.values());
  body["hp_square"] = norm(f, NormKind::hp_square(cfg.p));
  out.report(body);
  return kExitOk;
}

int cmd_construct(const Config& cfg, const Output& out) {
  const int res = cfg.resolution.empty() ? 0 : cfg.resolution.front();
  const HaarCoeffs2D c = cfg.example == "hadamard" ? build_hadamard_example(cfg.n, res) : build_identity_example(cfg.n, res);
  out.data(io::coeffs_to_json(c));
  return kExitOk;
}

int cmd_generate(const Config& cfg, const Output& out) {
  const Distribution d = parse_distribution(cfg.dist);
  if (cfg.count < 1) throw Error("count must be at least 1", "count");
  Grid2D grid(cfg.n, cfg.n);
  if (!cfg.resolution.empty()) {
    if (cfg.resolution.size() != 2) throw Error("resolution needs two entries", "resolution");
    grid = Grid2D(cfg.resolution[0], cfg.resolution[1]);
  }
  const auto entries = generate_corpus(d, cfg.count, cfg.seed, grid, cfg.out_dir);
  json files = json::array();
  for (const auto& e : entries) files.push_back({{"file", e.file}, {"sha256", e.sha256}, {"seed", e.seed}});
  out.report({{"directory", cfg.out_dir}, {"manifest", "manifest.json"}, {"files", files}});
  return kExitOk;
}

int cmd_verify(const Config& cfg, const Output& out) {
  const VerifyResult r = run_verify({cfg.suite, cfg.seed, cfg.n, cfg.instances});
  for (const auto& c : r.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.check << " (measured " << c.measured
              << ", bound " << c.bound << ", instances " << c.instances << ")\n";
  }
  if (out.wants_csv()) {
    out.csv(r.envelope);
  } else {
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"suite", c.suite},
                        {"check", c.check},
                        {"passed", c.passed},
                        {"measured", c.measured},
                        {"bound", c.bound},
                        {"instances", c.instances}});
    }
    json env = json::array();
    for (const auto& e : r.envelope) {
      env.push_back({{"seed", e.seed}, {"n1", e.n1}, {"n2", e.n2}, {"quantity", e.quantity}, {"value", e.value}});
    }
    out.report({{"passed", r.passed()}, {"checks", checks}, {"envelope", env}});
  }
  return r.passed() ? kExitOk : kExitVerifyFailed;
}

/// Envelope quantities of one corpus signal against its square-function Hp norm.
std::vector<EnvelopeRow> envelope_rows(const Signal2D& f, std::uint64_t seed, const std::vector<double>& exponents) {
  std::vector<EnvelopeRow> rows;
  const Grid2D& g = f.grid();
  auto push = [&](std::string q, double v) { rows.push_back({seed, g.n1, g.n2, std::move(q), v}); };
  const Signal2D m = strong_maximal_2d(f);
  const Signal2D sq = square_2d(f);
  for (double p : exponents) {
    std::ostringstream tag;
    tag << "p=" << p;
    const double hs = lp_norm(sq, p);
    push("hp_square " + tag.str(), hs);
    push("hp_maximal/hp_square " + tag.str(), lp_norm(m, p) / hs);
    for (MixedKind k : {MixedKind::S2M1, MixedKind::M1S2, MixedKind::S1M2, MixedKind::M2S1}) {
      push(std::string(mixed_kind_name(k)) + "/hp_square " + tag.str(), lp_norm(mixed_operator(f, k), p) / hs);
    }
  }
  push("product_bmo_heuristic", product_bmo_heuristic(f).value);
  push("slice_bmo_sup", norm(f, NormKind::slice_bmo_sup()));
  return rows;
}

int cmd_report(const Config& cfg, const Output& out) {
  const std::filesystem::path dir(cfg.corpus);
  const json manifest = io::read_json_file((dir / "manifest.json").string());
  if (!manifest.contains("files") || !manifest.at("files").is_array()) throw Error("manifest lacks a file list", "files");
  for (double p : cfg.exponents) {
    if (!(p > 0.0)) throw Error("exponents must be positive", "p");
  }
  const json& files = manifest.at("files");
  std::vector<std::vector<EnvelopeRow>> per_file(files.size());
  // Items run in parallel; rows are concatenated in manifest order.
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < files.size(); start += workers) {
    std::vector<std::future<std::vector<EnvelopeRow>>> jobs;
    for (std::size_t i = start; i < std::min(files.size(), start + workers); ++i) {
      const std::string path = (dir / files[i].at("file").get<std::string>()).string();
      const std::uint64_t seed = files[i].value("seed", std::uint64_t{0});
      const Signal2D f = require_2d(io::signal_from_json(io::read_json_file(path)), path);
      jobs.push_back(std::async(std::launch::async, [f, seed, &cfg] { return envelope_rows(f, seed, cfg.exponents); }));
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) per_file[start + k] = jobs[k].get();
  }
  std::vector<EnvelopeRow> rows;
  for (auto& v : per_file) rows.insert(rows.end(), v.begin(), v.end());
  if (out.wants_csv()) {
    out.csv(rows);
    return kExitOk;
  }
  std::map<std::string, std::pair<double, double>> range;
  json jrows = json::array();
  for (const auto& r : rows) {
    auto [it, fresh] = range.emplace(r.quantity, std::pair{r.value, r.value});
    if (!fresh) it->second = {std::min(it->second.first, r.value), std::max(it->second.second, r.value)};
    jrows.push_back({{"seed", r.seed}, {"n1", r.n1}, {"n2", r.n2}, {"quantity", r.quantity}, {"value", r.value}});
  }
  json summary = json::object();
  for (const auto& [q, mm] : range) summary[q] = {{"min", mm.first}, {"max", mm.second}};
  out.report({{"rows", jrows}, {"summary", summary}});
  return kExitOk;
}

void print_error(const std::string& message, const std::string& field) {
  std::cerr << json{{"error", message}, {"field", field}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
  const auto start = Clock::now();
  Config cfg;
  CLI::App app{"Dyadic bi-parameter paraproduct toolkit", "bipara"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto* transform = app.add_subcommand("transform", "Haar transform of a signal (or inverse of coefficients)");
  transform->add_option("--in", cfg.in, "Signal or coefficient JSON")->required();
  transform->add_flag("--inverse", cfg.inverse, "Synthesize a signal from coefficients");

  auto* apply = app.add_subcommand("apply", "Apply a paraproduct to a signal");
  apply->add_option("--op", cfg.op, "pi1|pi1t|pi2|pi3|pi4|pig|pigp|pigpp|eps:ab[,cd]")->required();
  apply->add_option("--g", cfg.g, "Symbol (coefficient or signal JSON)")->required();
  apply->add_option("--f", cfg.f, "Input signal JSON")->required();

  auto* normc = app.add_subcommand("norm", "Evaluate a norm or quasi-norm");
  normc->add_option("--in", cfg.in, "Signal JSON")->required();
  normc->add_option("--kind", cfg.kind, "Norm kind, or s2m1|m1s2|s1m2|m2s1 for mixed operators");
  normc->add_option("--p", cfg.p, "Exponent");
  normc->add_option("--r", cfg.r, "Exponent for slice-hr-lr");

  auto* opn = app.add_subcommand("opnorm", "Estimate an operator norm");
  opn->add_option("--op", cfg.op, "Operator name")->required();
  opn->add_option("--g", cfg.g, "Symbol (coefficient or signal JSON)")->required();
  opn->add_option("--method", cfg.method, "l2|dense|search|thm1|thm2|matrix-view|stronger")
      ->check(CLI::IsMember({"l2", "dense", "search", "thm1", "thm2", "matrix-view", "stronger"}));
  opn->add_option("--in-norm", cfg.in_norm, "Input norm kind[:exponent]");
  opn->add_option("--out-norm", cfg.out_norm, "Output norm kind[:exponent]");
  opn->add_option("--restarts", cfg.restarts, "Search restarts");
  opn->add_option("--iters", cfg.iters, "Search iterations per restart");
  opn->add_option("--seed", cfg.seed, "Random seed");
  opn->add_option("--p", cfg.p, "Input exponent for thm1/thm2");
  opn->add_option("--r", cfg.r, "Symbol exponent for thm1/thm2");
  opn->add_option("--row-level", cfg.row_level, "thm2: use every interval of this level as a row");
  opn->add_option("--rows", cfg.rows, "thm2: explicit rows as level:index,...");
  opn->add_flag("--dense-check", cfg.dense_check, "l2: compare with the dense oracle");

  auto* sparse = app.add_subcommand("sparse", "Sparse families: extraction, Carleson constant, John-Nirenberg profile");
  sparse->add_option("--family", cfg.family, "Family JSON")->required();
  sparse->add_flag("--extract", cfg.extract, "Greedy 1/2-sparse extraction");
  sparse->add_option("--carleson", cfg.carleson, "exact|restricted")->check(CLI::IsMember({"exact", "restricted"}));
  sparse->add_option("--jn", cfg.jn, "Exponents for the John-Nirenberg profile");
  sparse->add_option("--resolution", cfg.resolution, "Grid N1 N2 for bare rectangle lists")->expected(2);

  auto* decompose = app.add_subcommand("decompose", "Atomic decomposition");
  decompose->add_option("--in", cfg.in, "Signal JSON")->required();
  decompose->add_option("--p", cfg.p, "Hardy exponent");
  decompose->add_option("--s", cfg.s, "Atom exponent, s > max(1, p)");

  auto* construct = app.add_subcommand("construct", "Hadamard or identity example coefficients");
  construct->add_option("--example", cfg.example, "hadamard|identity")
      ->required()
      ->check(CLI::IsMember({"hadamard", "identity"}));
  construct->add_option("--n", cfg.n, "Example size");
  construct->add_option("--resolution", cfg.resolution, "Grid resolution per axis (default n)")->expected(1);

  auto* generate = app.add_subcommand("generate", "Seeded random corpus with manifest");
  generate->add_option("--dist", cfg.dist, "gaussian|sparse|tensor");
  generate->add_option("--count", cfg.count, "Number of signals");
  generate->add_option("--seed", cfg.seed, "Random seed");
  generate->add_option("--n", cfg.n, "Resolution per axis");
  generate->add_option("--resolution", cfg.resolution, "Resolution N1 N2")->expected(2);
  generate->add_option("--out-dir", cfg.out_dir, "Directory for signals and manifest.json");

  auto* verify = app.add_subcommand("verify", "Run property suites; exit 1 on failure");
  verify->add_option("--suite", cfg.suite, "all or one suite name");
  verify->add_option("--seed", cfg.seed, "Random seed");
  verify->add_option("--n", cfg.n, "Resolution per axis");
  verify->add_option("--instances", cfg.instances, "Random instances per check");

  auto* report = app.add_subcommand("report", "Envelope table over a generated corpus");
  report->add_option("--corpus", cfg.corpus, "Directory with manifest.json")->required();
  report->add_option("--p", cfg.exponents, "Exponents");

  for (auto* sub : {transform, apply, normc, opn, sparse, decompose, construct, generate, verify, report}) {
    add_common(sub, cfg);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string field = "arguments";
    const std::string msg = e.what();
    const auto dash = msg.find("--");
    if (dash != std::string::npos) field = msg.substr(dash, msg.find_first_of(" :", dash) - dash);
    print_error(msg, field);
    return kExitInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::uint64_t seed = cfg.seed;
  const Output out(cfg, sub, start, seed);
  const std::string name = sub->get_name();
  try {
    if (name == "transform") return cmd_transform(cfg, out);
    if (name == "apply") return cmd_apply(cfg, out);
    if (name == "norm") return cmd_norm(cfg, out);
    if (name == "opnorm") return cmd_opnorm(cfg, out);
    if (name == "sparse") return cmd_sparse(cfg, out);
    if (name == "decompose") return cmd_decompose(cfg, out);
    if (name == "construct") return cmd_construct(cfg, out);
    if (name == "generate") return cmd_generate(cfg, out);
    if (name == "verify") return cmd_verify(cfg, out);
    return cmd_report(cfg, out);
  } catch (const Error& e) {
    print_error(e.what(), e.field());
    return kExitInputError;
  } catch (const io::json::exception& e) {
    print_error(e.what(), "json");
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(e.what(), e.path1().string());
    return kExitInputError;
  }
}

}  // namespace bipara::cli
