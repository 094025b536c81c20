// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_VERIFY_HPP
#define YSL_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ysl/params.hpp"
#include "ysl/tensor.hpp"

namespace ysl::verify {

/// Outcome of one property suite. `worst_margin` is the smallest slack
/// observed across all checks (>= 0 means every inequality held);
/// failures carry the full offending input for replay.
struct SuiteReport {
  std::string suite;
  uint64_t seed = 0;
  int64_t samples = 0;
  bool pass = true;
  double worst_margin = 0.0;
  nlohmann::json params;  // the parameter grid the suite swept
  nlohmann::json details;
  std::vector<nlohmann::json> failures;

  nlohmann::json to_json() const;
};

struct SuiteOptions {
  uint64_t seed = 7;
  /// Per-grid-point sample count; suites pick sensible defaults when 0.
  int64_t samples = 0;
  /// Mutation control for the coercivity suite: scales the constant c1.
  double c1_scale = 1.0;
};

SuiteReport suite_coercivity(const SuiteOptions& opt);
SuiteReport suite_subgradient(const SuiteOptions& opt);
SuiteReport suite_monotonicity(const SuiteOptions& opt);
SuiteReport suite_korn(const SuiteOptions& opt);
SuiteReport suite_regularization(const SuiteOptions& opt);

/// Runs one suite by name ("coercivity", "subgradient", "monotonicity",
/// "korn", "regularization").
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

const std::vector<std::string>& suite_names();

/// Serialize a matrix (and params) into a replayable failure record.
nlohmann::json matrix_json(const MatD& m);
nlohmann::json params_json(const FluidParams& p);

}  // namespace ysl::verify

#endif
