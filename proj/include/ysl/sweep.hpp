// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_SWEEP_HPP
#define YSL_SWEEP_HPP

#include <string>

#include <json.hpp>

#include "ysl/channel.hpp"
#include "ysl/spectral.hpp"

namespace ysl {

/// Execute a channel run and persist profile.csv, ledger.csv and
/// manifest.json under out_dir. Returns a one-line summary record.
nlohmann::json run_channel_to_dir(const nlohmann::json& config_json, const std::string& out_dir);

/// Execute a galerkin run and persist timeseries.csv and manifest.json.
nlohmann::json run_galerkin_to_dir(const nlohmann::json& config_json, const std::string& out_dir);

/// Grid sweep: {"command": "run-channel"|"run-galerkin", "base": {...},
/// "vary": {"<json pointer>": [values...]}}. Runs the cartesian product
/// with `jobs` workers (capped by YSL_THREADS) into out_dir/run_NNN/,
/// appending each manifest to out_dir/index.json via atomic rename.
/// Returns the number of runs.
int sweep_run(const nlohmann::json& grid, int jobs, const std::string& out_dir);

}  // namespace ysl

#endif
