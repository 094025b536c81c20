// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_ERRORS_HPP
#define YSL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ysl {

/// Matrix operands of different dimension were combined.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A potential-based operation was requested in the nu=0, mu2>0 regime,
/// where the stress law has no convex potential.
struct PotentialUnavailable : std::domain_error {
  PotentialUnavailable() : std::domain_error(message()) {}
  // Exact text is part of the documented CLI contract; see README.
  static const char* message() { return "potential unavailable: nu=0 requires mu2=0"; }
};

/// The gradient (or a gradient-like quantity) was requested at a plug point.
struct AtPlugPoint : std::domain_error {
  using std::domain_error::domain_error;
  AtPlugPoint() : std::domain_error("gradient undefined at plug point") {}
};

/// A plastic operator was evaluated where its denominator vanishes.
struct UndefinedAtPlug : std::domain_error {
  using std::domain_error::domain_error;
  UndefinedAtPlug() : std::domain_error("plastic operator undefined at plug point") {}
};

/// Configuration file failed validation. `path` is the JSON pointer of
/// the offending field.
struct ConfigError : std::runtime_error {
  std::string path;
  ConfigError(std::string path_, const std::string& what_)
      : std::runtime_error("config error at " + path_ + ": " + what_), path(std::move(path_)) {}
};

/// A solver produced NaN/Inf or violated its stability bound.
struct DivergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ysl

#endif
