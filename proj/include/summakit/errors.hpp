#pragma once

#include <stdexcept>
#include <string>

namespace summakit {

// Bad run configuration: unknown keys, missing required inputs,
// out-of-range control parameters. Maps to CLI exit code 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A checked precondition on user data failed (distinct from config
// errors so the CLI can report it as exit code 4 where required).
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace summakit
