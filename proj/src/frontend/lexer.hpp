#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "parsivc/error.hpp"

namespace parsivc::detail {

enum class Tok { Ident, Int, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
  int column = 0;
};

/// Splits ASCII source into identifiers, integers and punctuation. `--` and
/// `//` start line comments. `|_|` and `<_>` lex as identifiers so that
/// theories can declare the outfix operators by name.
std::vector<Token> tokenize(std::string_view text, const std::string& file);

}  // namespace parsivc::detail
