// SPDX-License-Identifier: Apache-2.0

#include "ysl/config.hpp"

#include <fstream>

namespace ysl {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }
}

namespace {

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

}  // namespace

double require_number(const json& j, const std::string& base, const std::string& key) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(base + "/" + key, "missing required field");
  if (!v->is_number()) throw ConfigError(base + "/" + key, "must be a number");
  return v->get<double>();
}

double optional_number(const json& j, const std::string& base, const std::string& key,
                       double fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(base + "/" + key, "must be a number");
  return v->get<double>();
}

int64_t optional_integer(const json& j, const std::string& base, const std::string& key,
                         int64_t fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(base + "/" + key, "must be an integer");
  return v->get<int64_t>();
}

std::string optional_string(const json& j, const std::string& base, const std::string& key,
                            const std::string& fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(base + "/" + key, "must be a string");
  return v->get<std::string>();
}

FluidParams parse_params(const json& j, const std::string& base) {
  if (!j.is_object()) throw ConfigError(base, "must be an object");
  FluidParams p;
  p.mu1 = require_number(j, base, "mu1");
  p.mu2 = optional_number(j, base, "mu2", 0.0);
  p.nu = optional_number(j, base, "nu", 0.0);
  p.tau_star = optional_number(j, base, "tau_star", 0.0);
  p.p = optional_number(j, base, "p", 2.0);
  p.q = optional_number(j, base, "q", 2.0);
  p.a1 = optional_number(j, base, "a1", 0.0);
  p.a2 = optional_number(j, base, "a2", 0.0);
  if (!(p.mu1 > 0.0)) throw ConfigError(base + "/mu1", "must be > 0");
  if (!(p.mu2 >= 0.0)) throw ConfigError(base + "/mu2", "must be >= 0");
  if (!(p.nu >= 0.0)) throw ConfigError(base + "/nu", "must be >= 0");
  if (!(p.tau_star >= 0.0)) throw ConfigError(base + "/tau_star", "must be >= 0");
  if (!(p.p >= 2.0)) throw ConfigError(base + "/p", "must be >= 2");
  if (!(p.q >= 2.0)) throw ConfigError(base + "/q", "must be >= 2");
  if (!(p.a1 >= 0.0)) throw ConfigError(base + "/a1", "must be >= 0");
  if (!(p.a2 >= 0.0)) throw ConfigError(base + "/a2", "must be >= 0");
  return p;
}

ChannelConfig parse_channel_config(const json& j) {
  if (!j.is_object()) throw ConfigError("/", "channel config must be an object");
  const json* pj = find(j, "params");
  if (!pj) throw ConfigError("/params", "missing required field");
  ChannelConfig c;
  c.params = parse_params(*pj, "/params");
  c.half_width = optional_number(j, "", "half_width", 1.0);
  c.cells = static_cast<int>(optional_integer(j, "", "cells", 400));
  c.dt = optional_number(j, "", "dt", 0.0);
  c.t_end = optional_number(j, "", "t_end", 10.0);
  c.body_force = optional_number(j, "", "body_force", 1.0);
  c.alpha = optional_number(j, "", "alpha", 1e8);
  c.reg_n = optional_integer(j, "", "reg_n", 0);
  c.omega_expr = optional_string(j, "", "omega", "0");
  c.friction_expr = optional_string(j, "", "friction", "");
  c.steady_tol = optional_number(j, "", "steady_tol", 1e-6);
  c.plug_tol_scale = optional_number(j, "", "plug_tol_scale", 2.6);
  c.ledger_stride = static_cast<int>(optional_integer(j, "", "ledger_stride", 0));
  c.cfl_safety = optional_number(j, "", "cfl_safety", 0.9);
  if (!(c.half_width > 0.0)) throw ConfigError("/half_width", "must be > 0");
  if (c.cells < 4) throw ConfigError("/cells", "must be >= 4");
  if (!(c.t_end > 0.0)) throw ConfigError("/t_end", "must be > 0");
  if (!(c.alpha >= 0.0)) throw ConfigError("/alpha", "must be >= 0");
  if (c.reg_n < 0) throw ConfigError("/reg_n", "must be >= 0 (0 selects the coupling rule)");
  if (!(c.steady_tol > 0.0)) throw ConfigError("/steady_tol", "must be > 0");
  return c;
}

SpectralConfig parse_galerkin_config(const json& j) {
  if (!j.is_object()) throw ConfigError("/", "galerkin config must be an object");
  const json* pj = find(j, "params");
  if (!pj) throw ConfigError("/params", "missing required field");
  SpectralConfig c;
  c.params = parse_params(*pj, "/params");
  c.modes = static_cast<int>(optional_integer(j, "", "modes", 16));
  c.grid = static_cast<int>(optional_integer(j, "", "grid", 0));
  c.dt = optional_number(j, "", "dt", 0.0);
  c.t_end = optional_number(j, "", "t_end", 1.0);
  c.reg_n = optional_integer(j, "", "reg_n", 1000);
  c.record_stride = static_cast<int>(optional_integer(j, "", "record_stride", 1));
  c.cfl_safety = optional_number(j, "", "cfl_safety", 0.7);
  c.seed = static_cast<uint64_t>(optional_integer(j, "", "seed", 0));
  if (c.modes < 2) throw ConfigError("/modes", "must be >= 2");
  if (!(c.t_end > 0.0)) throw ConfigError("/t_end", "must be > 0");
  if (c.reg_n < 1) throw ConfigError("/reg_n", "must be >= 1");
  if (c.record_stride < 1) throw ConfigError("/record_stride", "must be >= 1");

  if (const json* oj = find(j, "omega")) {
    if (oj->is_number()) {
      c.omega.type = OmegaSpec::Type::Constant;
      c.omega.value = oj->get<double>();
    } else if (oj->is_object()) {
      std::string type = optional_string(*oj, "/omega", "type", "zero");
      if (type == "zero") {
        c.omega.type = OmegaSpec::Type::Zero;
      } else if (type == "constant") {
        c.omega.type = OmegaSpec::Type::Constant;
        c.omega.value = require_number(*oj, "/omega", "value");
      } else if (type == "expr") {
        c.omega.type = OmegaSpec::Type::Expression;
        c.omega.expr = optional_string(*oj, "/omega", "expr", "");
        if (c.omega.expr.empty()) throw ConfigError("/omega/expr", "missing required field");
      } else if (type == "file") {
        c.omega.type = OmegaSpec::Type::File;
        c.omega.path = optional_string(*oj, "/omega", "path", "");
        if (c.omega.path.empty()) throw ConfigError("/omega/path", "missing required field");
      } else {
        throw ConfigError("/omega/type", "must be zero, constant, expr or file");
      }
    } else {
      throw ConfigError("/omega", "must be a number or an object");
    }
  }

  if (const json* ij = find(j, "init")) {
    std::string type = optional_string(*ij, "/init", "type", "taylor_green");
    if (type == "taylor_green") {
      c.init.type = InitSpec::Type::TaylorGreen;
      c.init.amplitude = optional_number(*ij, "/init", "amplitude", 1.0);
    } else if (type == "random") {
      c.init.type = InitSpec::Type::Random;
      c.init.amplitude = optional_number(*ij, "/init", "amplitude", 1.0);
      c.init.kmax = static_cast<int>(optional_integer(*ij, "/init", "kmax", 4));
      c.init.seed = static_cast<uint64_t>(optional_integer(*ij, "/init", "seed", 1));
    } else {
      throw ConfigError("/init/type", "must be taylor_green or random");
    }
  }
  return c;
}

json params_to_json(const FluidParams& p) {
  return json{{"mu1", p.mu1}, {"mu2", p.mu2},           {"nu", p.nu}, {"tau_star", p.tau_star},
              {"p", p.p},     {"q", p.q},               {"a1", p.a1}, {"a2", p.a2}};
}

json channel_config_to_json(const ChannelConfig& c) {
  return json{{"params", params_to_json(c.params)},
              {"half_width", c.half_width},
              {"cells", c.cells},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"body_force", c.body_force},
              {"alpha", c.alpha},
              {"reg_n", c.reg_n},
              {"omega", c.omega_expr},
              {"friction", c.friction_expr},
              {"steady_tol", c.steady_tol},
              {"plug_tol_scale", c.plug_tol_scale},
              {"ledger_stride", c.ledger_stride},
              {"cfl_safety", c.cfl_safety}};
}

json galerkin_config_to_json(const SpectralConfig& c) {
  json omega;
  switch (c.omega.type) {
    case OmegaSpec::Type::Zero:
      omega = json{{"type", "zero"}};
      break;
    case OmegaSpec::Type::Constant:
      omega = json{{"type", "constant"}, {"value", c.omega.value}};
      break;
    case OmegaSpec::Type::Expression:
      omega = json{{"type", "expr"}, {"expr", c.omega.expr}};
      break;
    case OmegaSpec::Type::File:
      omega = json{{"type", "file"}, {"path", c.omega.path}};
      break;
  }
  json init;
  if (c.init.type == InitSpec::Type::TaylorGreen)
    init = json{{"type", "taylor_green"}, {"amplitude", c.init.amplitude}};
  else
    init = json{{"type", "random"},
                {"amplitude", c.init.amplitude},
                {"kmax", c.init.kmax},
                {"seed", c.init.seed}};
  return json{{"params", params_to_json(c.params)},
              {"modes", c.modes},
              {"grid", c.grid},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"reg_n", c.reg_n},
              {"omega", omega},
              {"init", init},
              {"record_stride", c.record_stride},
              {"cfl_safety", c.cfl_safety},
              {"seed", c.seed}};
}

}  // namespace ysl
