#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sociotraffic {

// Exit codes used by the CLI. Library code throws the matching exception;
// the CLI maps the exception to the code.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  parse_error = 2,
  validation_error = 3,
  degenerate_split = 4,
  cfl_violation = 5,
  non_hyperbolic = 6,
};

class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Carries every violation found during scenario validation, each prefixed
// with its field path.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  explicit ValidationError(const std::string& violation)
      : ValidationError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "validation failed:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

// Route choice produced M1 = 0 or M2 = 0; alpha would leave (0,1).
class DegenerateSplitError : public std::runtime_error {
public:
  DegenerateSplitError(std::size_t m1, std::size_t m2)
      : std::runtime_error("degenerate route split: M1=" + std::to_string(m1) +
                           ", M2=" + std::to_string(m2) +
                           " (alpha must lie strictly in (0,1); widen heterogeneity or set alpha directly)"),
        m1_(m1), m2_(m2) {}
  std::size_t m1() const { return m1_; }
  std::size_t m2() const { return m2_; }

private:
  std::size_t m1_, m2_;
};

class CflError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonHyperbolicError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class JunctionBlockedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sociotraffic
