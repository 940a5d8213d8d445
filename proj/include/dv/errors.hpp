#pragma once

#include <stdexcept>
#include <string>

namespace dv {

// Error categories map one-to-one onto CLI exit codes (see cli.cpp).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EndpointError : std::runtime_error {
  explicit EndpointError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dv
