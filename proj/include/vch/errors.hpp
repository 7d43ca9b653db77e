#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vch {

// Base error type. The tag is a stable machine-parsable identifier; the CLI
// prints it on failure and maps it to an exit code.
class VchError : public std::runtime_error {
 public:
  VchError(std::string tag, const std::string& message)
      : std::runtime_error(message), tag_(std::move(tag)) {}

  const std::string& tag() const { return tag_; }

 private:
  std::string tag_;
};

// Configuration / input errors (CLI exit code 2).
class ConfigError : public VchError {
 public:
  explicit ConfigError(const std::string& message, std::string tag = "config-error")
      : VchError(std::move(tag), message) {}
};

}  // namespace vch
