#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qbn {

enum class Severity { error, warning };

/// A single finding produced while parsing or validating a source text.
/// `code` is a stable short identifier suitable for matching in tests and
/// clients; `message` is for humans.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  int line = 0;  // 1-based, 0 when not tied to source text
  int column = 0;

  [[nodiscard]] bool is_error() const { return severity == Severity::error; }
};

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

[[nodiscard]] inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.is_error()) return true;
  return false;
}

/// Outcome of a parse: a value iff there are no error diagnostics.
/// Warnings may accompany a value.
template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  [[nodiscard]] bool ok() const { return value.has_value(); }
  explicit operator bool() const { return ok(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

/// Thrown by operations whose preconditions are violated (unknown role,
/// empty path, illegal move, ...). `code` mirrors Diagnostic codes.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace qbn
