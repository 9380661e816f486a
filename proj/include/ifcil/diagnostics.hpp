#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ifcil {

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline void warn(Diagnostics* diags, std::string message) {
  if (diags) diags->push_back({Severity::Warning, std::move(message)});
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

class NormalizeError : public Error {
 public:
  using Error::Error;
};

class SemanticError : public Error {
 public:
  using Error::Error;
};

class FlowTableError : public Error {
 public:
  using Error::Error;
};

class EmitError : public Error {
 public:
  using Error::Error;
};

}  // namespace ifcil
