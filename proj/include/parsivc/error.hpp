#pragma once

#include <stdexcept>
#include <string>

namespace parsivc {

struct SourceLocation {
  std::string file;
  int line = 0;
  int column = 0;

  bool operator==(const SourceLocation&) const = default;
};

enum class ErrorKind {
  Lexical,
  Syntax,
  Sort,
  Resolution,
  Import,
  Substitution,
  Builder,
  Engine,
};

std::string_view toString(ErrorKind kind);

/// Every failure in the toolchain surfaces as one of these. `diagnostic()`
/// renders the `file:line:col: error: message` form used on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, SourceLocation where = {});

  ErrorKind kind() const { return kind_; }
  const SourceLocation& where() const { return where_; }
  const std::string& message() const { return message_; }
  std::string diagnostic() const;

 private:
  ErrorKind kind_;
  SourceLocation where_;
  std::string message_;
};

}  // namespace parsivc
