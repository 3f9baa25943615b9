#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace uwbsim {

/// A model parameter is out of its admissible range (nonpositive rate, k <= 1, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument has the wrong shape: empty list, index out of range, size mismatch.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An unsupported configuration was requested (e.g. an unknown code rate).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario file problems. Carries every violation found, each prefixed with
/// its line number when one applies.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace uwbsim
