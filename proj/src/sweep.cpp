// SPDX-License-Identifier: Apache-2.0

#include "ysl/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>
#include <vector>

#include "ysl/config.hpp"
#include "ysl/csvio.hpp"

namespace ysl {

using nlohmann::json;
namespace fs = std::filesystem;

json run_channel_to_dir(const json& config_json, const std::string& out_dir) {
  ChannelConfig config = parse_channel_config(config_json);
  fs::create_directories(out_dir);
  ChannelResult res = run_to_steady(config);

  {
    CsvWriter csv(out_dir + "/profile.csv", {"y", "u", "S12", "plug_flag"});
    for (size_t i = 0; i < res.u.size(); ++i) {
      double s_mid = 0.5 * (res.s12[i] + res.s12[i + 1]);
      csv.row({res.y[i], res.u[i], s_mid, static_cast<double>(res.plug_flag[i])});
    }
  }
  {
    CsvWriter csv(out_dir + "/ledger.csv",
                  {"t", "kinetic", "dissipation", "boundary_work", "forcing_work", "residual"});
    for (const LedgerRow& r : res.ledger)
      csv.row({r.t, r.kinetic, r.dissipation, r.boundary_work, r.forcing_work, r.residual});
  }

  json resolved = channel_config_to_json(config);
  resolved["reg_n"] = res.reg_n;  // record the value actually used
  resolved["dt"] = res.dt;
  json manifest = make_manifest("run-channel", resolved, 0);
  json intervals = json::array();
  for (const PlugInterval& iv : res.plug_intervals)
    intervals.push_back(json{{"lo", iv.lo}, {"hi", iv.hi}});
  manifest["result"] = json{{"steps", res.steps},
                            {"t_final", res.t_final},
                            {"steady", res.steady},
                            {"plug_intervals", intervals},
                            {"max_step_residual", res.max_step_residual},
                            {"wall_velocity_left", res.wall_velocity_left},
                            {"wall_velocity_right", res.wall_velocity_right}};
  atomic_write(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

json run_galerkin_to_dir(const json& config_json, const std::string& out_dir) {
  SpectralConfig config = parse_galerkin_config(config_json);
  fs::create_directories(out_dir);
  SpectralResult res = integrate(config);

  {
    CsvWriter csv(out_dir + "/timeseries.csv",
                  {"t", "energy", "grad_p_norm", "stress_dual_norm", "energy_residual",
                   "div_residual"});
    for (const SpectralRecord& r : res.records)
      csv.row({r.t, r.energy, r.grad_p_norm, r.stress_dual_norm, r.energy_residual,
               r.div_residual});
  }

  json resolved = galerkin_config_to_json(config);
  resolved["dt"] = res.dt;
  if (config.grid == 0) resolved["grid"] = config.auto_grid();
  json manifest = make_manifest("run-galerkin", resolved, config.seed);
  manifest["result"] = json{{"steps", res.steps},
                            {"energy0", res.energy0},
                            {"final_energy", res.final_energy},
                            {"sup_energy", res.sup_energy},
                            {"max_energy_residual", res.max_energy_residual},
                            {"max_div_residual", res.max_div_residual},
                            {"c0_rate", res.c0_rate},
                            {"apriori_ok", res.apriori_ok},
                            {"apriori_margin_min", res.apriori_margin_min},
                            {"coercivity_ok", res.coercivity_ok}};
  atomic_write(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

namespace {

void set_by_pointer(json& j, const std::string& pointer, const json& value) {
  // accepts "/a/b" JSON pointers and "a.b" dotted paths
  std::string ptr = pointer;
  if (!ptr.empty() && ptr[0] != '/') {
    ptr = "/" + ptr;
    for (char& c : ptr)
      if (c == '.') c = '/';
  }
  j[json::json_pointer(ptr)] = value;
}

int thread_cap() {
  if (const char* env = std::getenv("YSL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::thread::hardware_concurrency());
}

}  // namespace

int sweep_run(const json& grid, int jobs, const std::string& out_dir) {
  if (!grid.is_object()) throw ConfigError("/", "sweep grid must be an object");
  std::string command = grid.value("command", std::string{});
  if (command != "run-channel" && command != "run-galerkin")
    throw ConfigError("/command", "must be run-channel or run-galerkin");
  if (!grid.contains("base")) throw ConfigError("/base", "missing required field");
  json base = grid["base"];

  // cartesian product of the vary axes
  std::vector<std::pair<std::string, json>> axes;
  if (grid.contains("vary")) {
    if (!grid["vary"].is_object()) throw ConfigError("/vary", "must be an object");
    for (auto it = grid["vary"].begin(); it != grid["vary"].end(); ++it) {
      if (!it.value().is_array() || it.value().empty())
        throw ConfigError("/vary/" + it.key(), "must be a non-empty array");
      axes.emplace_back(it.key(), it.value());
    }
  }
  std::vector<json> configs;
  std::vector<json> assignments;
  size_t total = 1;
  for (auto& [_, vals] : axes) total *= vals.size();
  for (size_t idx = 0; idx < total; ++idx) {
    json cfg = base;
    json assign = json::object();
    size_t rem = idx;
    for (auto& [path, vals] : axes) {
      const json& v = vals[rem % vals.size()];
      rem /= vals.size();
      set_by_pointer(cfg, path, v);
      assign[path] = v;
    }
    configs.push_back(cfg);
    assignments.push_back(assign);
  }

  // config errors surface synchronously, before any run starts
  for (size_t i = 0; i < configs.size(); ++i) {
    if (command == "run-channel")
      parse_channel_config(configs[i]);
    else
      parse_galerkin_config(configs[i]);
  }

  fs::create_directories(out_dir);
  int workers = std::min<int>({jobs > 0 ? jobs : 1, thread_cap(), static_cast<int>(total)});
  workers = std::max(workers, 1);

  std::mutex index_mutex;
  json index = json::array();
  std::atomic<size_t> next{0};
  std::vector<std::string> errors;

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      char sub[32];
      std::snprintf(sub, sizeof(sub), "run_%03zu", i);
      std::string dir = out_dir + "/" + sub;
      try {
        json manifest = command == "run-channel" ? run_channel_to_dir(configs[i], dir)
                                                 : run_galerkin_to_dir(configs[i], dir);
        std::lock_guard<std::mutex> lock(index_mutex);
        index.push_back(json{{"run", sub},
                             {"assignment", assignments[i]},
                             {"content_hash", manifest["content_hash"]}});
        atomic_write(out_dir + "/index.json", index.dump(2) + "\n");
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(index_mutex);
        errors.push_back(std::string(sub) + ": " + e.what());
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!errors.empty()) throw DivergedError("sweep worker failed: " + errors.front());
  return static_cast<int>(total);
}

}  // namespace ysl
