#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace turtleglyph {

/// One validation finding: which node and which invariant it violates.
struct Diagnostic {
  std::string node_path;  // "Ω" for the root, otherwise "A/B/C"
  std::string message;

  std::string format() const { return message + " at " + node_path; }
};

/// Parse failure with 1-based source position.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : std::runtime_error("syntax error at line " + std::to_string(line) +
                           ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A structurally parsed model that violates model invariants.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics)
      : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& ds) {
    std::string out = "model validation failed";
    for (const auto& d : ds) out += "\n  " + d.format();
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

class UnknownPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditional probability with a zero-mass condition (undefined, not zero).
class ZeroConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DepthExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LayoutMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo conditional estimate where the condition never occurred.
class NoConditionHitsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace turtleglyph
