#include "parsivc/error.hpp"

namespace parsivc {

std::string_view toString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lexical:
      return "lexical";
    case ErrorKind::Syntax:
      return "syntax";
    case ErrorKind::Sort:
      return "sort";
    case ErrorKind::Resolution:
      return "resolution";
    case ErrorKind::Import:
      return "import";
    case ErrorKind::Substitution:
      return "substitution";
    case ErrorKind::Builder:
      return "builder";
    case ErrorKind::Engine:
      return "engine";
  }
  return "?";
}

Error::Error(ErrorKind kind, const std::string& message, SourceLocation where)
    : std::runtime_error(message), kind_(kind), where_(std::move(where)), message_(message) {}

std::string Error::diagnostic() const {
  std::string out;
  if (!where_.file.empty()) out += where_.file + ":";
  if (where_.line > 0) out += std::to_string(where_.line) + ":" + std::to_string(where_.column) + ":";
  if (!out.empty()) out += " ";
  return out + "error: " + message_;
}

}  // namespace parsivc
