// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "ysl/config.hpp"
#include "ysl/csvio.hpp"
#include "ysl/subdiff.hpp"
#include "ysl/sweep.hpp"
#include "ysl/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// exit codes: 0 ok, 1 suite failure, 2 config error, 3 numerical divergence
constexpr int kExitOk = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitDiverged = 3;

int cmd_eval_stress(const std::string& config_path, const std::string& input_path,
                    const std::string& out_path) {
  json cfg = ysl::load_json_file(config_path);
  if (!cfg.contains("params")) throw ysl::ConfigError("/params", "missing required field");
  ysl::FluidParams params = ysl::parse_params(cfg["params"], "/params");
  int dim = static_cast<int>(ysl::optional_integer(cfg, "", "dim", 3));
  if (dim != 2 && dim != 3) throw ysl::ConfigError("/dim", "must be 2 or 3");
  int64_t reg_n = ysl::optional_integer(cfg, "", "reg_n", 1000000);
  if (reg_n < 1) throw ysl::ConfigError("/reg_n", "must be >= 1");

  auto rows = ysl::read_csv(input_path);
  const int nm = dim * dim;
  const int nw = dim == 2 ? 1 : 3;

  std::vector<std::string> cols = {"row", "plug_flag", "plug_bound"};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) cols.push_back("s" + std::to_string(i + 1) + std::to_string(j + 1));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      cols.push_back("sn" + std::to_string(i + 1) + std::to_string(j + 1));
  cols.push_back("s_norm");
  cols.push_back("sn_norm");

  ysl::CsvWriter csv(out_path, cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (static_cast<int>(row.size()) != nm && static_cast<int>(row.size()) != nm + nw)
      throw ysl::ConfigError("/input/row" + std::to_string(r),
                             "expected " + std::to_string(nm) + " or " +
                                 std::to_string(nm + nw) + " columns");
    ysl::MatD x(dim);
    for (int k = 0; k < nm; ++k) x.e[static_cast<size_t>(k)] = row[static_cast<size_t>(k)];
    ysl::MatD omega = ysl::MatD::zero(dim);
    if (static_cast<int>(row.size()) == nm + nw)
      omega = dim == 2 ? ysl::antisym2(row[static_cast<size_t>(nm)])
                       : ysl::antisym3(row[static_cast<size_t>(nm)],
                                       row[static_cast<size_t>(nm) + 1],
                                       row[static_cast<size_t>(nm) + 2]);

    ysl::StressResult sr = ysl::stress_exact(x, omega, params);
    ysl::MatD sn = ysl::stress_regularized(x, omega, params, reg_n);
    std::vector<double> out;
    out.push_back(static_cast<double>(r));
    out.push_back(sr.is_flow() ? 0.0 : 1.0);
    out.push_back(sr.is_flow() ? 0.0 : sr.bound);
    for (int k = 0; k < nm; ++k) out.push_back(sr.stress.e[static_cast<size_t>(k)]);
    for (int k = 0; k < nm; ++k) out.push_back(sn.e[static_cast<size_t>(k)]);
    out.push_back(sr.is_flow() ? ysl::norm(sr.stress) : 0.0);
    out.push_back(ysl::norm(sn));
    csv.row(out);
  }
  std::cout << "wrote " << rows.size() << " stress rows to " << out_path << "\n";
  return kExitOk;
}

int cmd_check_plug(const std::string& config_path, const std::string& out_path) {
  json cfg = ysl::load_json_file(config_path);
  if (!cfg.contains("params")) throw ysl::ConfigError("/params", "missing required field");
  ysl::FluidParams params = ysl::parse_params(cfg["params"], "/params");
  int dim = static_cast<int>(ysl::optional_integer(cfg, "", "dim", 3));
  if (dim != 2 && dim != 3) throw ysl::ConfigError("/dim", "must be 2 or 3");

  json out;
  out["tau_hat"] = params.tau_hat();
  if (params.potentials_admissible()) {
    out["r_q"] = ysl::r_q(params);
    out["r_star"] = ysl::r_star(params);
  }
  json results = json::array();
  if (cfg.contains("queries")) {
    if (!cfg["queries"].is_array()) throw ysl::ConfigError("/queries", "must be an array");
    int qi = 0;
    for (const json& q : cfg["queries"]) {
      std::string base = "/queries/" + std::to_string(qi++);
      if (!q.contains("x_star") || !q["x_star"].is_array() ||
          q["x_star"].size() != static_cast<size_t>(dim * dim))
        throw ysl::ConfigError(base + "/x_star",
                               "must be an array of " + std::to_string(dim * dim) + " numbers");
      ysl::MatD xs(dim);
      for (int k = 0; k < dim * dim; ++k)
        xs.e[static_cast<size_t>(k)] = q["x_star"][static_cast<size_t>(k)].get<double>();
      std::optional<ysl::MatD> plug_point;
      if (q.contains("plug_point")) {
        ysl::MatD pp(dim);
        for (int k = 0; k < dim * dim; ++k)
          pp.e[static_cast<size_t>(k)] = q["plug_point"][static_cast<size_t>(k)].get<double>();
        plug_point = pp;
      }
      ysl::MatD omega = ysl::MatD::zero(dim);
      bool member = ysl::in_subdifferential_at_plug(xs, omega, params, plug_point);
      json rec{{"member", member}};
      if (!member && params.nu > 0.0) {
        auto w = ysl::violation_witness(xs, params);
        if (w)
          rec["witness"] = json{{"y", ysl::verify::matrix_json(w->y)},
                                {"lhs", w->lhs},
                                {"rhs", w->rhs}};
      }
      results.push_back(rec);
    }
  }
  out["queries"] = results;
  std::string text = out.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    ysl::atomic_write(out_path, text);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, uint64_t seed, int64_t samples,
               const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> to_run;
  if (suite == "all")
    to_run = ysl::verify::suite_names();
  else
    to_run.push_back(suite);

  ysl::verify::SuiteOptions opt;
  opt.seed = seed;
  opt.samples = samples;

  bool all_pass = true;
  for (const std::string& name : to_run) {
    ysl::verify::SuiteReport rep = ysl::verify::run_suite(name, opt);
    all_pass = all_pass && rep.pass;
    std::string path = out_dir + "/report_" + name + ".json";
    ysl::atomic_write(path, rep.to_json().dump(2) + "\n");
    std::cout << "suite " << name << ": " << (rep.pass ? "PASS" : "FAIL")
              << " worst_margin=" << ysl::fmt17(rep.worst_margin) << " samples=" << rep.samples
              << " seed=" << rep.seed << "\n";
  }
  return all_pass ? kExitOk : kExitSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ysl: viscoplastic constitutive laws, plug geometry and desk-scale solvers"};
  app.require_subcommand(1);

  std::string config_path, input_path, grid_path;
  std::string eval_out = "stress.csv", plug_out, run_out, ver_out = "reports",
              swp_out = "sweep";
  std::string suite = "all";
  uint64_t seed = 7;
  int64_t samples = 0;
  int jobs = 1;

  auto* eval = app.add_subcommand("eval-stress", "stress table for a CSV of gradient matrices");
  eval->add_option("--config", config_path, "params config JSON")->required();
  eval->add_option("--input", input_path, "CSV of matrices (row-major entries)")->required();
  eval->add_option("--out", eval_out, "output CSV");

  auto* plug = app.add_subcommand("check-plug", "subdifferential membership / witness queries");
  plug->add_option("--config", config_path, "queries config JSON")->required();
  plug->add_option("--out", plug_out, "output JSON (stdout when omitted)");

  auto* chan = app.add_subcommand("run-channel", "1d plane-shear transient run");
  chan->add_option("--config", config_path, "channel config JSON")->required();
  chan->add_option("--out", run_out, "output directory")->required();

  auto* gal = app.add_subcommand("run-galerkin", "2d periodic pseudo-spectral run");
  gal->add_option("--config", config_path, "galerkin config JSON")->required();
  gal->add_option("--out", run_out, "output directory")->required();

  auto* ver = app.add_subcommand("verify", "property-verification suites");
  ver->add_option("--suite", suite, "all|coercivity|subgradient|monotonicity|korn|regularization");
  ver->add_option("--seed", seed, "RNG seed");
  ver->add_option("--samples", samples, "per-grid sample override (0 = suite default)");
  ver->add_option("--out", ver_out, "report directory");

  auto* swp = app.add_subcommand("sweep", "cartesian parameter sweep");
  swp->add_option("--grid", grid_path, "sweep grid JSON")->required();
  swp->add_option("--jobs", jobs, "parallel workers");
  swp->add_option("--out", swp_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) return cmd_eval_stress(config_path, input_path, eval_out);
    if (plug->parsed()) return cmd_check_plug(config_path, plug_out);
    if (chan->parsed()) {
      json manifest = ysl::run_channel_to_dir(ysl::load_json_file(config_path), run_out);
      std::cout << "run-channel: steps=" << manifest["result"]["steps"]
                << " steady=" << manifest["result"]["steady"] << " out=" << run_out << "\n";
      return kExitOk;
    }
    if (gal->parsed()) {
      json manifest = ysl::run_galerkin_to_dir(ysl::load_json_file(config_path), run_out);
      std::cout << "run-galerkin: steps=" << manifest["result"]["steps"]
                << " sup_energy=" << manifest["result"]["sup_energy"] << " out=" << run_out
                << "\n";
      return kExitOk;
    }
    if (ver->parsed()) {
      if (suite != "all") {
        const auto& names = ysl::verify::suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end())
          throw ysl::ConfigError("/suite", "unknown suite '" + suite + "'");
      }
      return cmd_verify(suite, seed, samples, ver_out);
    }
    if (swp->parsed()) {
      int n = ysl::sweep_run(ysl::load_json_file(grid_path), jobs, swp_out);
      std::cout << "sweep: " << n << " runs under " << swp_out << "\n";
      return kExitOk;
    }
  } catch (const ysl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const ysl::DivergedError& e) {
    std::cerr << "numerical divergence: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const ysl::PotentialUnavailable& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
