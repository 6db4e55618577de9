#include "bipara/corpus.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <iomanip>
#include <sstream>

#include "bipara/haar.hpp"
#include "bipara/io.hpp"
#include "bipara/random.hpp"

namespace bipara {

std::string_view distribution_name(Distribution d) {
  switch (d) {
    case Distribution::Gaussian: return "gaussian";
    case Distribution::Sparse: return "sparse";
    case Distribution::Tensor: return "tensor";
  }
  return "?";
}

Distribution parse_distribution(std::string_view tag) {
  if (tag == "gaussian") return Distribution::Gaussian;
  if (tag == "sparse") return Distribution::Sparse;
  if (tag == "tensor") return Distribution::Tensor;
  throw Error("unknown distribution tag '" + std::string(tag) + "'", "dist");
}

namespace {

/// About one coefficient in eight survives, at least one.
std::vector<double> sparse_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n, 0.0);
  const std::size_t keep = std::max<std::size_t>(1, n / 8);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (std::size_t i = 0; i < keep; ++i) v[pick(rng)] = dist(rng);
  return v;
}

}  // namespace

Signal2D random_signal(Distribution d, Grid2D grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HaarCoeffs2D c(grid);
  switch (d) {
    case Distribution::Gaussian: c.cc = gaussian_vector(rng, c.cc.size()); break;
    case Distribution::Sparse: c.cc = sparse_vector(rng, c.cc.size()); break;
    case Distribution::Tensor: {
      const auto b = gaussian_vector(rng, node_count(grid.n1));
      const auto e = gaussian_vector(rng, node_count(grid.n2));
      for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < e.size(); ++j) c.cc[i * e.size() + j] = b[i] * e[j];
      }
      break;
    }
  }
  return haar_inverse_2d(c);
}

Signal1D random_signal_1d(Distribution d, Grid1D grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = node_count(grid.n);
  return haar_inverse_1d(HaarCoeffs1D(grid, 0.0, d == Distribution::Sparse ? sparse_vector(rng, n) : gaussian_vector(rng, n)));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

std::vector<CorpusEntry> generate_corpus(Distribution d, int count, std::uint64_t seed, Grid2D grid,
                                         const std::string& dir) {
  if (count < 1) throw Error("count must be at least 1", "count");
  std::filesystem::create_directories(dir);
  std::vector<CorpusEntry> out;
  io::json files = io::json::array();
  const int width = static_cast<int>(std::to_string(count - 1).size());
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const std::string text = io::dump(io::signal_to_json(random_signal(d, grid, s)));
    std::ostringstream name;
    name << distribution_name(d) << "_" << std::setw(width) << std::setfill('0') << i << ".json";
    io::write_text((std::filesystem::path(dir) / name.str()).string(), text);
    out.push_back({name.str(), sha256_hex(text), s});
    files.push_back({{"file", name.str()}, {"sha256", out.back().sha256}, {"seed", s}});
  }
  const io::json manifest = {{"distribution", std::string(distribution_name(d))},
                             {"count", count},
                             {"seed", seed},
                             {"resolution", {grid.n1, grid.n2}},
                             {"files", files}};
  io::write_text((std::filesystem::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  return out;
}

}  // namespace bipara
