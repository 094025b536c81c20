// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_CONFIG_HPP
#define YSL_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "ysl/channel.hpp"
#include "ysl/params.hpp"
#include "ysl/spectral.hpp"

namespace ysl {

nlohmann::json load_json_file(const std::string& path);

/// Field accessors that raise ConfigError with the JSON pointer of the
/// offending field ("config error at /params/mu1: ...").
double require_number(const nlohmann::json& j, const std::string& base, const std::string& key);
double optional_number(const nlohmann::json& j, const std::string& base, const std::string& key,
                       double fallback);
int64_t optional_integer(const nlohmann::json& j, const std::string& base, const std::string& key,
                         int64_t fallback);
std::string optional_string(const nlohmann::json& j, const std::string& base,
                            const std::string& key, const std::string& fallback);

/// Parses {"mu1": ..., "mu2": ..., ...}; mu1 is required, the rest
/// default. Range violations report the exact field path.
FluidParams parse_params(const nlohmann::json& j, const std::string& base);

ChannelConfig parse_channel_config(const nlohmann::json& j);
SpectralConfig parse_galerkin_config(const nlohmann::json& j);

nlohmann::json params_to_json(const FluidParams& p);
nlohmann::json channel_config_to_json(const ChannelConfig& c);
nlohmann::json galerkin_config_to_json(const SpectralConfig& c);

}  // namespace ysl

#endif
