#include "lexer.hpp"

#include <array>
#include <cctype>

namespace parsivc::detail {

namespace {

// Longest first.
constexpr std::array<std::string_view, 22> kSymbols = {
    "<=>", "|_|", "<_>", ":=", "<=", ">=", "/=", "->", "=>", "|-", "(", ")", ",",
    ";",   ":",   "|",   "<",  ">",  "=",  "+",  "-",  "*",
};

constexpr std::string_view kSingle = "#{}.";

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identPart(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

}  // namespace

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if ((c == '-' || c == '/') && i + 1 < text.size() && text[i + 1] == c) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (identStart(c)) {
      std::size_t j = i;
      while (j < text.size() && identPart(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (std::string_view sym : kSymbols) {
      if (text.substr(i, sym.size()) == sym) {
        t.kind = (sym == "|_|" || sym == "<_>") ? Tok::Ident : Tok::Symbol;
        t.text = std::string(sym);
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched && kSingle.find(c) != std::string_view::npos) {
      t.kind = Tok::Symbol;
      t.text = std::string(1, c);
      advance(1);
      matched = true;
    }
    if (!matched) {
      throw Error(ErrorKind::Lexical, std::string("unexpected character '") + c + "'", {file, line, col});
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace parsivc::detail
