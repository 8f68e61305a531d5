#pragma once

#include <stdexcept>
#include <string>

namespace hoirl {

/// Judge backend failed to produce usable scores (timeout, bad payload,
/// length mismatch). Callers decide the fallback.
class JudgeError : public std::runtime_error {
public:
  explicit JudgeError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Synthetic environment construction failed (e.g. template table overflow).
class ToyEnvError : public std::runtime_error {
public:
  explicit ToyEnvError(const std::string& what) : std::runtime_error(what) {}
};

/// Training aborted (non-finite objective/gradient, bad inputs).
class TrainError : public std::runtime_error {
public:
  explicit TrainError(const std::string& what) : std::runtime_error(what) {}
};

/// File-level I/O or record parse failure.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hoirl
