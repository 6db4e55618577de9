#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bipara {

/// One property aggregated over a suite's instances: passes when measured <= bound.
struct CheckRow {
  std::string suite;
  std::string check;
  bool passed = true;
  double measured = 0.0;
  double bound = 0.0;
  int instances = 0;
};

/// One sample of a norm-equivalence ratio; columns of the CSV envelope schema.
struct EnvelopeRow {
  std::uint64_t seed = 0;
  int n1 = 0;
  int n2 = 0;
  std::string quantity;
  double value = 0.0;
};

struct VerifyResult {
  std::vector<CheckRow> checks;
  std::vector<EnvelopeRow> envelope;

  bool passed() const;
};

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t seed = 7;
  int n = 5;
  int instances = 20;
};

/// calculus, expansion, duality, pointwise, sparse, atoms, opnorm, gaps, bmo, symmetry.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Unknown names raise Error.
VerifyResult run_verify(const VerifyOptions& opts);

}  // namespace bipara
