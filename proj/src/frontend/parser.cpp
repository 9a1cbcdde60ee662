#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "parsivc/frontend.hpp"
#include "parsivc/ops.hpp"
#include "parsivc/printer.hpp"

namespace parsivc {

using detail::Tok;
using detail::Token;

std::string_view toString(SourceModule::Kind kind) {
  switch (kind) {
    case SourceModule::Kind::Concept:
      return "concept";
    case SourceModule::Kind::Extension:
      return "extension";
    case SourceModule::Kind::Theory:
      return "theory";
  }
  return "?";
}

namespace {

const std::set<std::string, std::less<>> kReserved = {
    "and",  "or",   "not",   "implies", "iff",  "forall", "exists", "exists_unique", "lambda",
    "if",   "then", "else",  "true",    "false", "end",   "do",     "requires",      "ensures",
    "uses", "Var",  "While", "If",      "Assume", "Confirm", "Stipulate", "maintaining", "decreasing",
    "changing",
};

// ---------------------------------------------------------------------------
// Untyped parse trees, elaborated against a Context afterwards.

struct RawSort {
  enum class Kind { Name, Str, Arrow, Product };
  Kind kind = Kind::Name;
  std::string name;
  std::vector<RawSort> parts;  // Arrow: domain..., codomain
  SourceLocation loc;
};

struct Raw {
  enum class Kind { Name, Int, Bool, Apply, Binary, Not, Quant, Lambda, Cond, Tuple, Paren, Outfix, Singleton, Arrow };
  Kind kind = Kind::Name;
  std::string text;
  bool incoming = false;
  std::int64_t value = 0;
  Quantifier quant = Quantifier::ForAll;
  std::vector<std::pair<std::string, RawSort>> binders;
  std::vector<Raw> kids;
  SourceLocation loc;
};

struct ProgramType {
  Sort sort;
  std::string name;
};

class TokenStream {
 public:
  TokenStream(std::vector<Token> toks, std::string file) : toks_(std::move(toks)), file_(std::move(file)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool atEnd() const { return peek().kind == Tok::End; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool isSym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Symbol && peek(ahead).text == s;
  }
  bool isWord(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool acceptSym(std::string_view s) {
    if (!isSym(s)) return false;
    next();
    return true;
  }
  bool acceptWord(std::string_view w) {
    if (!isWord(w)) return false;
    next();
    return true;
  }
  Token expectSym(std::string_view s) {
    if (!isSym(s)) fail("expected '" + std::string(s) + "' but found " + describe(peek()));
    return next();
  }
  Token expectWord(std::string_view w) {
    if (!isWord(w)) fail("expected '" + std::string(w) + "' but found " + describe(peek()));
    return next();
  }
  Token expectIdent(std::string_view what) {
    if (peek().kind != Tok::Ident || kReserved.contains(peek().text)) {
      fail("expected " + std::string(what) + " but found " + describe(peek()));
    }
    return next();
  }
  SourceLocation loc() const { return {file_, peek().line, peek().column}; }
  SourceLocation locOf(const Token& t) const { return {file_, t.line, t.column}; }
  const std::string& file() const { return file_; }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::Syntax, msg, loc()); }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End:
        return "end of input";
      case Tok::Int:
        return "integer " + t.text;
      default:
        return "'" + t.text + "'";
    }
  }

  const std::vector<Token>& tokens() const { return toks_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string file_;
};

// ---------------------------------------------------------------------------
// Raw expression grammar.

class ExprParser {
 public:
  explicit ExprParser(TokenStream& ts) : ts_(ts) {}

  Raw expr() { return iff(); }

  RawSort sort() {
    RawSort first = sortProduct();
    if (ts_.acceptSym("->")) {
      RawSort arrow;
      arrow.kind = RawSort::Kind::Arrow;
      arrow.loc = first.loc;
      if (first.kind == RawSort::Kind::Product) {
        arrow.parts = std::move(first.parts);
      } else {
        arrow.parts.push_back(std::move(first));
      }
      arrow.parts.push_back(sort());
      return arrow;
    }
    return first;
  }

  std::vector<std::pair<std::string, RawSort>> binders(bool allowSemicolon = true) {
    std::vector<std::pair<std::string, RawSort>> out;
    while (true) {
      std::vector<std::string> names{ts_.expectIdent("a bound variable").text};
      while (ts_.acceptSym(",")) names.push_back(ts_.expectIdent("a bound variable").text);
      ts_.expectSym(":");
      RawSort s = sort();
      for (auto& n : names) out.emplace_back(n, s);
      if (!allowSemicolon || !ts_.isSym(";") || !looksLikeBinderGroup()) break;
      ts_.next();
    }
    return out;
  }

 private:
  // After `;`: `x, y : T` or `x : T` starts another group.
  bool looksLikeBinderGroup() const {
    std::size_t k = 1;
    while (ts_.peek(k).kind == Tok::Ident && ts_.isSym(",", k + 1)) k += 2;
    return ts_.peek(k).kind == Tok::Ident && ts_.isSym(":", k + 1);
  }

  RawSort sortProduct() {
    RawSort first = sortAtom();
    if (!ts_.isSym("*")) return first;
    RawSort prod;
    prod.kind = RawSort::Kind::Product;
    prod.loc = first.loc;
    prod.parts.push_back(std::move(first));
    while (ts_.acceptSym("*")) prod.parts.push_back(sortAtom());
    return prod;
  }

  RawSort sortAtom() {
    RawSort s;
    s.loc = ts_.loc();
    if (ts_.acceptSym("(")) {
      s = sort();
      ts_.expectSym(")");
      return s;
    }
    s.name = ts_.expectIdent("a sort").text;
    if (s.name == "Str" && ts_.acceptSym("(")) {
      s.kind = RawSort::Kind::Str;
      s.parts.push_back(sort());
      ts_.expectSym(")");
    }
    return s;
  }

  Raw make(Raw::Kind k, SourceLocation loc) {
    Raw r;
    r.kind = k;
    r.loc = std::move(loc);
    return r;
  }

  Raw binary(std::string op, Raw l, Raw r) {
    Raw b = make(Raw::Kind::Binary, l.loc);
    b.text = std::move(op);
    b.kids.push_back(std::move(l));
    b.kids.push_back(std::move(r));
    return b;
  }

  Raw iff() {
    Raw l = implies();
    if (ts_.acceptWord("iff") || ts_.acceptSym("<=>")) return binary("iff", std::move(l), iff());
    return l;
  }

  Raw implies() {
    Raw l = disjunction();
    if (ts_.acceptWord("implies") || ts_.acceptSym("=>")) return binary("implies", std::move(l), implies());
    return l;
  }

  Raw disjunction() {
    Raw l = conjunction();
    if (ts_.acceptWord("or")) return binary("or", std::move(l), disjunction());
    return l;
  }

  Raw conjunction() {
    Raw l = comparison();
    if (ts_.acceptWord("and")) return binary("and", std::move(l), conjunction());
    return l;
  }

  bool atComparison() const {
    if (ts_.peek().kind != Tok::Symbol) return false;
    return isComparisonOp(ts_.peek().text);
  }

  Raw comparison() {
    Raw l = additive();
    if (!atComparison()) return l;
    std::string op = ts_.next().text;
    Raw r = additive();
    if (atComparison()) ts_.fail("comparison operators do not chain; add parentheses");
    return binary(std::move(op), std::move(l), std::move(r));
  }

  Raw additive() {
    Raw l = multiplicative();
    while (ts_.isSym("+") || ts_.isSym("-") || ts_.isWord("o")) {
      std::string op = ts_.next().text;
      l = binary(std::move(op), std::move(l), multiplicative());
    }
    return l;
  }

  Raw multiplicative() {
    Raw l = unary();
    while (ts_.acceptSym("*")) l = binary("*", std::move(l), unary());
    return l;
  }

  Raw unary() {
    if (ts_.isWord("not")) {
      Raw n = make(Raw::Kind::Not, ts_.loc());
      ts_.next();
      n.kids.push_back(unary());
      return n;
    }
    if (ts_.isSym("-") && ts_.peek(1).kind == Tok::Int) {
      Raw n = make(Raw::Kind::Int, ts_.loc());
      ts_.next();
      n.value = -std::stoll(ts_.next().text);
      return n;
    }
    return postfix();
  }

  Raw postfix() {
    Raw p = primary();
    while (ts_.isSym("(") && (p.kind == Raw::Kind::Name || p.kind == Raw::Kind::Apply || p.kind == Raw::Kind::Paren)) {
      ts_.next();
      Raw app = make(Raw::Kind::Apply, p.loc);
      app.kids.push_back(std::move(p));
      if (!ts_.isSym(")")) {
        app.kids.push_back(expr());
        while (ts_.acceptSym(",")) app.kids.push_back(expr());
      }
      ts_.expectSym(")");
      p = std::move(app);
    }
    return p;
  }

  Raw primary() {
    const SourceLocation loc = ts_.loc();
    const Token& t = ts_.peek();
    if (t.kind == Tok::Int) {
      Raw r = make(Raw::Kind::Int, loc);
      r.value = std::stoll(ts_.next().text);
      return r;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        Raw r = make(Raw::Kind::Bool, loc);
        r.value = ts_.next().text == "true";
        return r;
      }
      if (t.text == "forall" || t.text == "exists" || t.text == "exists_unique") {
        Raw r = make(Raw::Kind::Quant, loc);
        const std::string q = ts_.next().text;
        r.quant = q == "forall" ? Quantifier::ForAll : q == "exists" ? Quantifier::Exists : Quantifier::ExistsUnique;
        r.binders = binders();
        ts_.expectSym(",");
        r.kids.push_back(expr());
        return r;
      }
      if (t.text == "lambda") {
        Raw r = make(Raw::Kind::Lambda, loc);
        ts_.next();
        r.binders = binders();
        ts_.expectSym(",");
        r.kids.push_back(expr());
        return r;
      }
      if (t.text == "if") {
        Raw r = make(Raw::Kind::Cond, loc);
        ts_.next();
        r.kids.push_back(expr());
        ts_.expectWord("then");
        r.kids.push_back(expr());
        ts_.expectWord("else");
        r.kids.push_back(expr());
        return r;
      }
      Raw r = make(Raw::Kind::Name, loc);
      r.text = ts_.expectIdent("an expression").text;
      return r;
    }
    if (ts_.acceptSym("#")) {
      Raw r = make(Raw::Kind::Name, loc);
      r.incoming = true;
      r.text = ts_.expectIdent("a name after '#'").text;
      return r;
    }
    if (ts_.acceptSym("(")) {
      Raw first = expr();
      if (ts_.acceptSym("->")) {
        Raw r = make(Raw::Kind::Arrow, loc);
        r.kids.push_back(std::move(first));
        r.kids.push_back(expr());
        ts_.expectSym(")");
        return r;
      }
      if (ts_.isSym(",")) {
        Raw r = make(Raw::Kind::Tuple, loc);
        r.kids.push_back(std::move(first));
        while (ts_.acceptSym(",")) r.kids.push_back(expr());
        ts_.expectSym(")");
        return r;
      }
      ts_.expectSym(")");
      Raw r = make(Raw::Kind::Paren, loc);
      r.kids.push_back(std::move(first));
      return r;
    }
    if (ts_.acceptSym("|")) {
      Raw r = make(Raw::Kind::Outfix, loc);
      r.kids.push_back(additive());
      ts_.expectSym("|");
      return r;
    }
    if (ts_.acceptSym("<")) {
      Raw r = make(Raw::Kind::Singleton, loc);
      r.kids.push_back(additive());
      ts_.expectSym(">");
      return r;
    }
    ts_.fail("expected an expression but found " + TokenStream::describe(t));
  }

  TokenStream& ts_;
};

// ---------------------------------------------------------------------------
// Elaboration: names resolved, sorts checked.

class Elaborator {
 public:
  explicit Elaborator(const Context& ctx) : ctx_(ctx) {}

  Sort sort(const RawSort& s) const {
    switch (s.kind) {
      case RawSort::Kind::Name: {
        const Symbol* sym = ctx_.lookup(s.name);
        if (sym == nullptr || sym->kind != SymbolKind::Sort) {
          throw Error(ErrorKind::Resolution, "unknown sort '" + s.name + "'", s.loc);
        }
        return Sort::named(s.name);
      }
      case RawSort::Kind::Str: {
        const Symbol* sym = ctx_.lookup("SStr");
        if (sym == nullptr || sym->kind != SymbolKind::Sort) {
          throw Error(ErrorKind::Resolution, "Str(...) models need the sort SStr in scope (uses String_Theory)",
                      s.loc);
        }
        sort(s.parts.at(0));
        return Sort::named("SStr");
      }
      case RawSort::Kind::Arrow: {
        std::vector<Sort> dom;
        for (std::size_t i = 0; i + 1 < s.parts.size(); ++i) dom.push_back(sort(s.parts[i]));
        return Sort::arrow(std::move(dom), sort(s.parts.back()));
      }
      case RawSort::Kind::Product: {
        std::vector<Sort> parts;
        for (const auto& p : s.parts) parts.push_back(sort(p));
        return Sort::product(std::move(parts));
      }
    }
    return Sort::boolean();
  }

  Expr expr(const Raw& r) {
    Expr e = build(r);
    return r.loc.line > 0 ? e.at(r.loc.line, r.loc.column) : e;
  }

  Expr formula(const Raw& r, const char* what) {
    Expr e = expr(r);
    if (!e.isFormula()) {
      throw Error(ErrorKind::Sort, std::string(what) + " must be a formula, got sort " + e.sort().str(), r.loc);
    }
    return e;
  }

 private:
  Expr name(const Raw& r) {
    if (!r.incoming) {
      for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
        if (it->name == r.text) return Expr::variable(r.text, it->sort);
      }
    }
    const Symbol* sym = ctx_.lookupVariable(r.text, r.incoming);
    std::string text = r.text;
    if (sym == nullptr && !r.incoming && (text == "empty_string" || text == "Empty_String")) {
      text = "Lambda";
      sym = ctx_.lookup(text);
    }
    if (sym == nullptr) {
      throw Error(ErrorKind::Resolution, "unresolved symbol '" + std::string(r.incoming ? "#" : "") + r.text + "'",
                  r.loc);
    }
    if (r.incoming && sym->kind != SymbolKind::SpecVariable) {
      throw Error(ErrorKind::Resolution, "'#" + r.text + "' does not name a parameter", r.loc);
    }
    if (sym->kind == SymbolKind::Sort) {
      throw Error(ErrorKind::Sort, "sort '" + r.text + "' used as a value", r.loc);
    }
    return Expr::variable(text, sym->sort, r.incoming);
  }

  Expr applySymbol(const std::string& op, const SourceLocation& loc, std::vector<Expr> args) {
    const Symbol* sym = ctx_.lookup(op);
    if (sym == nullptr || (sym->kind != SymbolKind::Function && sym->kind != SymbolKind::Predicate)) {
      throw Error(ErrorKind::Resolution, "operator '" + op + "' is not declared in scope", loc);
    }
    Expr head = Expr::variable(op, sym->sort);
    return checkedApply(head, std::move(args), loc, op);
  }

  Expr checkedApply(const Expr& head, std::vector<Expr> args, const SourceLocation& loc, const std::string& what) {
    const Sort& hs = head.sort();
    if (hs.kind() != Sort::Kind::Arrow) {
      throw Error(ErrorKind::Sort, "'" + what + "' of sort " + hs.str() + " is not a function", loc);
    }
    if (hs.arity() != args.size()) {
      throw Error(ErrorKind::Sort,
                  "'" + what + "' expects " + std::to_string(hs.arity()) + " argument(s), got " +
                      std::to_string(args.size()),
                  loc);
    }
    auto dom = hs.components();
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!ctx_.accepts(dom[i], args[i].sort())) {
        throw Error(ErrorKind::Sort,
                    "argument " + std::to_string(i + 1) + " of '" + what + "' expects " + dom[i].str() + ", got " +
                        args[i].sort().str(),
                    loc);
      }
    }
    return Expr::apply(head, std::move(args), hs.codomain());
  }

  Expr build(const Raw& r) {
    switch (r.kind) {
      case Raw::Kind::Name:
        return name(r);
      case Raw::Kind::Int:
        return Expr::integer(r.value);
      case Raw::Kind::Bool:
        return Expr::boolean(r.value != 0);
      case Raw::Kind::Apply: {
        Expr head = expr(r.kids[0]);
        std::vector<Expr> args;
        for (std::size_t i = 1; i < r.kids.size(); ++i) args.push_back(expr(r.kids[i]));
        return checkedApply(head, std::move(args), r.loc, print(head));
      }
      case Raw::Kind::Binary:
        return binary(r);
      case Raw::Kind::Not: {
        Expr inner = formula(r.kids[0], "operand of 'not'");
        return Expr::negation(inner);
      }
      case Raw::Kind::Quant:
      case Raw::Kind::Lambda: {
        std::vector<Binder> bs;
        for (const auto& [n, s] : r.binders) bs.push_back({n, sort(s)});
        const std::size_t mark = bound_.size();
        bound_.insert(bound_.end(), bs.begin(), bs.end());
        Expr body = r.kind == Raw::Kind::Quant ? formula(r.kids[0], "quantifier body") : expr(r.kids[0]);
        bound_.resize(mark);
        return r.kind == Raw::Kind::Quant ? Expr::quantified(r.quant, std::move(bs), body)
                                          : Expr::lambda(std::move(bs), body);
      }
      case Raw::Kind::Cond: {
        Expr c = formula(r.kids[0], "if-condition");
        Expr t = expr(r.kids[1]);
        Expr e = expr(r.kids[2]);
        if (!ctx_.compatible(t.sort(), e.sort())) {
          throw Error(ErrorKind::Sort, "branches of 'if' have sorts " + t.sort().str() + " and " + e.sort().str(),
                      r.loc);
        }
        return Expr::conditional(c, t, e);
      }
      case Raw::Kind::Tuple: {
        std::vector<Expr> parts;
        for (const auto& k : r.kids) parts.push_back(expr(k));
        return Expr::product(std::move(parts));
      }
      case Raw::Kind::Paren:
        return Expr::paren(expr(r.kids[0]));
      case Raw::Kind::Arrow:
        return Expr::arrowCtor(expr(r.kids[0]), expr(r.kids[1]));
      case Raw::Kind::Outfix:
        return applySymbol("|_|", r.loc, {expr(r.kids[0])});
      case Raw::Kind::Singleton:
        return applySymbol("<_>", r.loc, {expr(r.kids[0])});
    }
    throw Error(ErrorKind::Syntax, "unsupported expression", r.loc);
  }

  Expr binary(const Raw& r) {
    const std::string& op = r.text;
    if (op == "and" || op == "or" || op == "implies" || op == "iff") {
      Expr l = formula(r.kids[0], ("left operand of '" + op + "'").c_str());
      Expr rr = formula(r.kids[1], ("right operand of '" + op + "'").c_str());
      const Connective c = op == "and"       ? Connective::And
                           : op == "or"      ? Connective::Or
                           : op == "implies" ? Connective::Implies
                                             : Connective::Iff;
      return Expr::connective(c, l, rr);
    }
    Expr l = expr(r.kids[0]);
    Expr rr = expr(r.kids[1]);
    if (op == "=" || op == "/=") {
      if (!ctx_.compatible(l.sort(), rr.sort())) {
        throw Error(ErrorKind::Sort, "cannot compare " + l.sort().str() + " with " + rr.sort().str(), r.loc);
      }
      return Expr::binary(op, ctx_.lookup(op)->sort, l, rr, Sort::boolean());
    }
    // `a >= b` is stored as `b <= a`, `a > b` as `b < a`.
    if (op == ">=") return applySymbol("<=", r.loc, {rr, l});
    if (op == ">") return applySymbol("<", r.loc, {rr, l});
    return applySymbol(op, r.loc, {l, rr});
  }

  const Context& ctx_;
  std::vector<Binder> bound_;
};

bool mentionsIncoming(const Expr& e) {
  if (e.kind() == Expr::Kind::Variable) return e.incoming();
  for (const auto& c : e.children()) {
    if (mentionsIncoming(c)) return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Module grammar.

class Parser {
 public:
  Parser(ModuleLoader& loader, TokenStream& ts) : loader_(loader), ts_(ts), raw_(ts) {}

  std::unique_ptr<SourceModule> module() {
    auto m = std::make_unique<SourceModule>();
    m->file = ts_.file();
    ctx_ = std::make_shared<Context>(Context::builtins());
    mod_ = m.get();
    importDependencies(*m);
    header(*m);
    for (const auto& p : m->params) declareModuleParam(p);
    while (!ts_.isWord("end")) {
      if (ts_.atEnd()) ts_.fail("missing 'end " + m->name + ";'");
      item(*m);
    }
    ts_.expectWord("end");
    const Token closing = ts_.expectIdent("the module name");
    if (closing.text != m->name) {
      throw Error(ErrorKind::Syntax, "module '" + m->name + "' closed as '" + closing.text + "'", ts_.locOf(closing));
    }
    ts_.expectSym(";");
    if (!ts_.atEnd()) ts_.fail("text after the end of module '" + m->name + "'");
    m->context = ctx_;
    return m;
  }

  /// Names imported by a module, scanned ahead of parsing so that headers
  /// may mention sorts from `uses` clauses that appear later.
  static std::vector<std::pair<std::string, SourceLocation>> scanImports(const TokenStream& ts) {
    std::vector<std::pair<std::string, SourceLocation>> out;
    const auto& toks = ts.tokens();
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      const bool usesClause = toks[i].kind == Tok::Ident && toks[i].text == "uses";
      const bool forClause =
          i == 2 && (toks[0].text == "Enhancement" || toks[0].text == "Extension") && toks[i].text == "for";
      if (!usesClause && !forClause) continue;
      std::size_t j = i + 1;
      while (j < toks.size() && toks[j].kind == Tok::Ident) {
        out.emplace_back(toks[j].text, ts.locOf(toks[j]));
        if (forClause || !(toks[j + 1].kind == Tok::Symbol && toks[j + 1].text == ",")) break;
        j += 2;
      }
    }
    return out;
  }

 private:
  void header(SourceModule& m) {
    if (ts_.acceptWord("Concept")) {
      m.kind = SourceModule::Kind::Concept;
      m.name = ts_.expectIdent("a concept name").text;
      if (ts_.acceptSym("(")) {
        moduleParams(m);
        ts_.expectSym(")");
      }
    } else if (ts_.acceptWord("Enhancement") || ts_.acceptWord("Extension")) {
      m.kind = SourceModule::Kind::Extension;
      m.name = ts_.expectIdent("an enhancement name").text;
      ts_.expectWord("for");
      m.enhances = ts_.expectIdent("a concept name").text;
    } else if (ts_.acceptWord("Theory")) {
      m.kind = SourceModule::Kind::Theory;
      m.name = ts_.expectIdent("a theory name").text;
    } else {
      ts_.fail("expected 'Concept', 'Enhancement' or 'Theory'");
    }
    ts_.expectSym(";");
  }

  void moduleParams(SourceModule& m) {
    do {
      const SourceLocation loc = ts_.loc();
      if (ts_.acceptWord("type")) {
        ParamDecl p;
        p.name = ts_.expectIdent("a type parameter").text;
        p.mode = ParamMode::Evaluates;
        p.loc = loc;
        m.params.push_back(p);
        continue;
      }
      for (auto& p : paramGroup()) m.params.push_back(std::move(p));
    } while (ts_.acceptSym(";"));
  }

  // Runs before the header is parsed, so `m` only knows what the token scan
  // tells it.
  void importDependencies(SourceModule& m) {
    const std::string self = ts_.peek(1).text;
    const bool extension = ts_.isWord("Enhancement") || ts_.isWord("Extension");
    auto imports = scanImports(ts_);
    for (std::size_t i = 0; i < imports.size(); ++i) {
      const auto& [name, loc] = imports[i];
      if (name == self) throw Error(ErrorKind::Import, "module '" + name + "' imports itself", loc);
      const SourceModule& dep = loader_.loadByName(name, loc);
      if (dep.context) ctx_->importAll(*dep.context);
      if (extension && i == 0) {
        m.enhances = name;
      } else if (std::find(m.uses.begin(), m.uses.end(), name) == m.uses.end()) {
        m.uses.push_back(name);
      }
    }
  }

  void declareModuleParam(const ParamDecl& p) {
    if (p.typeName.empty()) {
      ctx_->defineSort(p.name, mod_->name);
      programTypes_[p.name] = {Sort::named(p.name), p.name};
      return;
    }
    ctx_->define(p.name, {SymbolKind::Constant, p.sort, mod_->name});
  }

  // `updates Q, R : Queue`; the mode defaults to updates.
  std::vector<ParamDecl> paramGroup() {
    ParamMode mode = ParamMode::Updates;
    if (ts_.acceptWord("updates")) {
      mode = ParamMode::Updates;
    } else if (ts_.acceptWord("restores")) {
      mode = ParamMode::Restores;
    } else if (ts_.acceptWord("alters")) {
      mode = ParamMode::Alters;
    } else if (ts_.acceptWord("evaluates")) {
      mode = ParamMode::Evaluates;
    }
    std::vector<ParamDecl> out;
    do {
      ParamDecl p;
      p.loc = ts_.loc();
      p.name = ts_.expectIdent("a parameter name").text;
      p.mode = mode;
      out.push_back(p);
    } while (ts_.acceptSym(","));
    ts_.expectSym(":");
    const Token ty = ts_.expectIdent("a program type");
    const Sort s = programType(ty.text, ts_.locOf(ty));
    for (auto& p : out) {
      p.typeName = ty.text;
      p.sort = s;
    }
    return out;
  }

  std::vector<ParamDecl> operationParams() {
    std::vector<ParamDecl> out;
    ts_.expectSym("(");
    if (!ts_.isSym(")")) {
      do {
        for (auto& p : paramGroup()) out.push_back(std::move(p));
      } while (ts_.acceptSym(";"));
    }
    ts_.expectSym(")");
    std::set<std::string> seen;
    for (const auto& p : out) {
      if (!seen.insert(p.name).second) throw Error(ErrorKind::Syntax, "duplicate parameter '" + p.name + "'", p.loc);
    }
    return out;
  }

  Sort programType(const std::string& name, const SourceLocation& loc) {
    if (auto it = programTypes_.find(name); it != programTypes_.end()) return it->second.sort;
    if (name == "Integer") return requireSort("Z", name, loc);
    if (name == "Boolean") return Sort::boolean();
    if (mod_ != nullptr) {
      for (const SourceModule* dep : loader_.closure(*mod_)) {
        for (const auto& tf : dep->typeFamilies) {
          if (tf.name == name) return tf.model;
        }
        for (const auto& p : dep->params) {
          if (p.typeName.empty() && p.name == name) return Sort::named(name);
        }
      }
    }
    throw Error(ErrorKind::Resolution, "unknown program type '" + name + "'", loc);
  }

  Sort requireSort(const std::string& sort, const std::string& type, const SourceLocation& loc) {
    const Symbol* sym = ctx_->lookup(sort);
    if (sym == nullptr || sym->kind != SymbolKind::Sort) {
      throw Error(ErrorKind::Resolution, "program type " + type + " needs the sort " + sort + " (uses Integer_Theory)",
                  loc);
    }
    return Sort::named(sort);
  }

  Expr formulaIn(const Context& ctx, const char* what) {
    Raw r = raw_.expr();
    return Elaborator(ctx).formula(r, what);
  }

  void item(SourceModule& m) {
    const SourceLocation loc = ts_.loc();
    if (ts_.acceptWord("uses")) {
      // Already imported by the token scan.
      do {
        ts_.expectIdent("a module name");
      } while (ts_.acceptSym(","));
      ts_.expectSym(";");
    } else if (ts_.acceptWord("requires")) {
      Expr e = formulaIn(*ctx_, "module requires");
      m.moduleRequires = m.moduleRequires ? Expr::connective(Connective::And, m.moduleRequires, e) : e;
      ts_.expectSym(";");
    } else if (ts_.isWord("Type")) {
      typeFamily(m);
    } else if (ts_.acceptWord("Operation")) {
      m.operations.push_back(operationSpec(loc));
    } else if (ts_.acceptWord("Oper")) {
      OperationDecl op = operationSpec(loc);
      m.procedures.push_back(procedureBody(op.name, op.params, loc));
      m.operations.push_back(std::move(op));
    } else if (ts_.acceptWord("Procedure")) {
      const std::string name = ts_.expectIdent("a procedure name").text;
      std::vector<ParamDecl> params = operationParams();
      ts_.expectSym(";");
      m.procedures.push_back(procedureBody(name, std::move(params), loc));
    } else if (ts_.acceptWord("Definition")) {
      definition(m, loc);
    } else if (ts_.acceptWord("Corollary")) {
      corollary(m, loc);
    } else if (ts_.acceptWord("Subsort")) {
      const Token lo = ts_.expectIdent("a sort");
      ts_.expectWord("of");
      const Token hi = ts_.expectIdent("a sort");
      requireSort(lo.text, lo.text, ts_.locOf(lo));
      requireSort(hi.text, hi.text, ts_.locOf(hi));
      ctx_->addSubsort(lo.text, hi.text);
      ts_.expectSym(";");
    } else if (ts_.acceptWord("Assertive_Code")) {
      assertiveCode(m, loc);
    } else {
      ts_.fail("unexpected " + TokenStream::describe(ts_.peek()) + " at module level");
    }
  }

  void typeFamily(SourceModule& m) {
    TypeFamilyDecl tf;
    tf.loc = ts_.loc();
    ts_.expectWord("Type");
    ts_.expectWord("family");
    tf.name = ts_.expectIdent("a type name").text;
    ts_.expectWord("is");
    ts_.expectWord("modeled");
    ts_.expectWord("by");
    tf.model = Elaborator(*ctx_).sort(raw_.sort());
    ts_.expectSym(";");
    ts_.expectWord("exemplar");
    tf.exemplar = ts_.expectIdent("an exemplar name").text;
    ts_.expectSym(";");
    auto local = std::make_shared<Context>(ctx_);
    local->defineSpecVariable(tf.exemplar, tf.model, m.name);
    if (ts_.acceptWord("constraints")) {
      tf.constraint = formulaIn(*local, "constraints clause");
      ts_.expectSym(";");
    }
    if (ts_.acceptWord("initialization")) {
      ts_.expectWord("ensures");
      tf.initialization = formulaIn(*local, "initialization ensures");
      ts_.expectSym(";");
    }
    programTypes_[tf.name] = {tf.model, tf.name};
    m.typeFamilies.push_back(std::move(tf));
  }

  std::shared_ptr<Context> paramContext(const std::vector<ParamDecl>& params) {
    auto local = std::make_shared<Context>(ctx_);
    for (const auto& p : params) local->defineSpecVariable(p.name, p.sort, mod_->name, true);
    return local;
  }

  OperationDecl operationSpec(const SourceLocation& loc) {
    OperationDecl op;
    op.loc = loc;
    op.name = ts_.expectIdent("an operation name").text;
    op.params = operationParams();
    ts_.expectSym(";");
    auto local = paramContext(op.params);
    op.precondition = Expr::boolean(true);
    op.postcondition = Expr::boolean(true);
    if (ts_.isWord("requires")) {
      op.requiresLoc = ts_.loc();
      ts_.next();
      op.precondition = formulaIn(*local, "requires clause");
      ts_.expectSym(";");
    }
    if (ts_.isWord("ensures")) {
      op.ensuresLoc = ts_.loc();
      ts_.next();
      op.postcondition = formulaIn(*local, "ensures clause");
      ts_.expectSym(";");
    }
    return op;
  }

  ProcedureDecl procedureBody(const std::string& name, std::vector<ParamDecl> params, const SourceLocation& loc) {
    ProcedureDecl proc;
    proc.name = name;
    proc.loc = loc;
    auto local = paramContext(params);
    proc.params = std::move(params);
    while (ts_.isWord("Var")) {
      ts_.next();
      std::vector<LocalVarDecl> group;
      do {
        LocalVarDecl v;
        v.loc = ts_.loc();
        v.name = ts_.expectIdent("a variable name").text;
        group.push_back(v);
      } while (ts_.acceptSym(","));
      ts_.expectSym(":");
      const Token ty = ts_.expectIdent("a program type");
      const Sort s = programType(ty.text, ts_.locOf(ty));
      ts_.expectSym(";");
      for (auto& v : group) {
        if (local->lookup(v.name) && local->lookup(v.name)->kind == SymbolKind::SpecVariable) {
          throw Error(ErrorKind::Syntax, "variable '" + v.name + "' is already declared", v.loc);
        }
        v.typeName = ty.text;
        v.sort = s;
        local->defineSpecVariable(v.name, s, mod_->name);
        proc.locals.push_back(v);
      }
    }
    proc.body = statements(*local, true);
    ts_.expectWord("end");
    if (ts_.peek().kind == Tok::Ident && ts_.peek().text == name) ts_.next();
    ts_.acceptSym(";");
    proc.context = local;
    return proc;
  }

  void definition(SourceModule& m, const SourceLocation& loc) {
    DefinitionDecl d;
    d.loc = loc;
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident || (t.kind == Tok::Symbol && (isComparisonOp(t.text) || isAdditiveOp(t.text) ||
                                                           isMultiplicativeOp(t.text)))) {
      d.name = ts_.next().text;
    } else {
      ts_.fail("expected a definition name");
    }
    std::vector<Sort> dom;
    if (ts_.acceptSym("(")) {
      for (const auto& [n, s] : raw_.binders()) dom.push_back(Elaborator(*ctx_).sort(s));
      ts_.expectSym(")");
    }
    ts_.expectSym(":");
    Sort s = Elaborator(*ctx_).sort(raw_.sort());
    ts_.expectSym(";");
    if (!dom.empty()) s = Sort::arrow(std::move(dom), s);
    d.sort = s;
    if (s.kind() == Sort::Kind::SSet) {
      ctx_->defineSort(d.name, m.name);
    } else if (s.kind() == Sort::Kind::Arrow) {
      ctx_->define(d.name, {s.codomain().isBoolean() ? SymbolKind::Predicate : SymbolKind::Function, s, m.name});
    } else {
      ctx_->define(d.name, {SymbolKind::Constant, s, m.name});
    }
    m.definitions.push_back(std::move(d));
  }

  void corollary(SourceModule& m, const SourceLocation& loc) {
    RewriteCorollary rc;
    rc.loc = loc;
    rc.name = ts_.expectIdent("a corollary name").text;
    ts_.expectSym(":");
    Expr e = formulaIn(*ctx_, "corollary");
    ts_.expectSym(";");
    const Expr* body = &stripParen(e);
    while (body->kind() == Expr::Kind::Quantified && body->quantifier() == Quantifier::ForAll) {
      rc.binders.insert(rc.binders.end(), body->binders().begin(), body->binders().end());
      body = &stripParen(body->child(0));
    }
    // Only equations can serve as directed rewrites; other corollaries are
    // accepted and carried no further.
    if (!body->isEquality()) return;
    rc.lhs = stripParen(body->args()[0]);
    rc.rhs = body->args()[1];
    const auto lhsVars = freeVariables(rc.lhs);
    for (const auto& v : freeVariables(rc.rhs)) {
      const bool isBinder = std::any_of(rc.binders.begin(), rc.binders.end(),
                                        [&](const Binder& b) { return b.name == v.name && !v.incoming; });
      if (isBinder && !lhsVars.contains(v)) {
        throw Error(ErrorKind::Syntax, "corollary " + rc.name + ": right side introduces '" + v.name + "'", loc);
      }
    }
    m.corollaries.push_back(std::move(rc));
  }

  void assertiveCode(SourceModule& m, const SourceLocation& loc) {
    AssertiveCodeDecl ac;
    ac.loc = loc;
    ac.name = ts_.expectIdent("a name").text;
    auto local = std::make_shared<Context>(ctx_);
    if (ts_.acceptSym("(")) {
      if (!ts_.isSym(")")) {
        for (const auto& [n, s] : raw_.binders()) {
          Binder b{n, Elaborator(*ctx_).sort(s)};
          local->defineSpecVariable(b.name, b.sort, m.name, true);
          ac.variables.push_back(b);
        }
      }
      ts_.expectSym(")");
    }
    ts_.expectSym(";");
    ac.statements = statements(*local, false);
    ts_.expectWord("end");
    if (ts_.isWord(ac.name)) ts_.next();
    ts_.expectSym(";");
    ac.context = local;
    m.assertiveCode.push_back(std::move(ac));
  }

  Provenance here() const {
    const SourceLocation l = ts_.loc();
    return {l.file, l.line, l.column, ""};
  }

  Expr executable(const Context& ctx, const char* what) {
    const SourceLocation loc = ts_.loc();
    Expr e = Elaborator(ctx).expr(raw_.expr());
    if (mentionsIncoming(e)) {
      throw Error(ErrorKind::Syntax, std::string("'#' values are not allowed in ") + what, loc);
    }
    return e;
  }

  Expr variableRef(const Context& ctx, const Token& t) {
    const Symbol* sym = ctx.lookup(t.text);
    if (sym == nullptr || sym->kind != SymbolKind::SpecVariable) {
      throw Error(ErrorKind::Resolution, "'" + t.text + "' is not a variable in scope", ts_.locOf(t));
    }
    return Expr::variable(t.text, sym->sort).at(t.line, t.column);
  }

  std::vector<Statement> statements(const Context& ctx, bool program) {
    std::vector<Statement> out;
    while (!ts_.isWord("end") && !ts_.isWord("else") && !ts_.atEnd()) out.push_back(statement(ctx, program));
    return out;
  }

  Statement statement(const Context& ctx, bool program) {
    Provenance p = here();
    if (ts_.acceptWord("Assume")) {
      Statement s = Statement::assume(formulaIn(ctx, "Assume"), p);
      ts_.expectSym(";");
      return s;
    }
    if (ts_.acceptWord("Confirm")) {
      Statement s = Statement::confirm(formulaIn(ctx, "Confirm"), p);
      ts_.expectSym(";");
      return s;
    }
    if (ts_.acceptWord("Stipulate")) {
      Statement s = Statement::stipulate(formulaIn(ctx, "Stipulate"), p);
      ts_.expectSym(";");
      return s;
    }
    if (program && ts_.acceptWord("If")) {
      Statement s;
      s.kind = Statement::Kind::If;
      s.provenance = p;
      s.expr = executable(ctx, "conditions");
      if (!s.expr.isFormula()) throw Error(ErrorKind::Sort, "If condition must be a formula", {p.file, p.line, p.column});
      ts_.expectWord("then");
      s.thenBody = statements(ctx, program);
      if (ts_.acceptWord("else")) s.elseBody = statements(ctx, program);
      ts_.expectWord("end");
      ts_.expectSym(";");
      return s;
    }
    if (program && ts_.acceptWord("While")) return loop(ctx, p);
    if (ts_.peek().kind == Tok::Ident && !kReserved.contains(ts_.peek().text)) {
      const Token name = ts_.next();
      if (ts_.acceptSym(":=")) {
        Expr target = variableRef(ctx, name);
        Expr value = program ? executable(ctx, "program expressions") : Elaborator(ctx).expr(raw_.expr());
        if (!ctx.accepts(target.sort(), value.sort())) {
          throw Error(ErrorKind::Sort,
                      "cannot assign " + value.sort().str() + " to '" + name.text + "' of sort " + target.sort().str(),
                      {p.file, p.line, p.column});
        }
        ts_.expectSym(";");
        return Statement::assign(target, value, p);
      }
      if (program && ts_.acceptSym("(")) {
        Statement s;
        s.kind = Statement::Kind::Call;
        s.provenance = p;
        s.callee = name.text;
        if (!ts_.isSym(")")) {
          do {
            s.args.push_back(executable(ctx, "call arguments"));
          } while (ts_.acceptSym(","));
        }
        ts_.expectSym(")");
        ts_.expectSym(";");
        return s;
      }
      throw Error(ErrorKind::Syntax, "expected ':=' or a call after '" + name.text + "'", ts_.loc());
    }
    ts_.fail("expected a statement but found " + TokenStream::describe(ts_.peek()));
  }

  Statement loop(const Context& ctx, Provenance p) {
    Statement s;
    s.kind = Statement::Kind::While;
    s.provenance = p;
    s.expr = executable(ctx, "conditions");
    if (!s.expr.isFormula()) throw Error(ErrorKind::Sort, "While condition must be a formula", {p.file, p.line, p.column});
    while (!ts_.isWord("do")) {
      if (ts_.acceptWord("changing")) {
        s.changingGiven = true;
        do {
          s.changing.push_back(variableRef(ctx, ts_.expectIdent("a variable")));
        } while (ts_.acceptSym(","));
      } else if (ts_.acceptWord("maintaining")) {
        if (s.invariant) ts_.fail("duplicate maintaining clause");
        s.invariant = formulaIn(ctx, "maintaining clause");
      } else if (ts_.acceptWord("decreasing")) {
        if (s.decreasing) ts_.fail("duplicate decreasing clause");
        s.decreasing = Elaborator(ctx).expr(raw_.expr());
      } else {
        ts_.fail("expected 'changing', 'maintaining', 'decreasing' or 'do'");
      }
      ts_.expectSym(";");
    }
    if (!s.invariant) throw Error(ErrorKind::Syntax, "While loop needs a maintaining clause", {p.file, p.line, p.column});
    ts_.expectWord("do");
    s.body = statements(ctx, true);
    ts_.expectWord("end");
    ts_.expectSym(";");
    return s;
  }

  ModuleLoader& loader_;
  TokenStream& ts_;
  ExprParser raw_;
  SourceModule* mod_ = nullptr;
  std::shared_ptr<Context> ctx_;
  std::map<std::string, ProgramType> programTypes_;
};

// ---------------------------------------------------------------------------

ModuleLoader::ModuleLoader(std::vector<std::filesystem::path> searchPath) : searchPath_(std::move(searchPath)) {}

const SourceModule& ModuleLoader::loadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Import, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (std::find(searchPath_.begin(), searchPath_.end(), dir) == searchPath_.end()) searchPath_.push_back(dir);
  return parseAndStore(buf.str(), path.string());
}

const SourceModule& ModuleLoader::loadSource(std::string_view text, const std::string& file) {
  return parseAndStore(text, file);
}

const SourceModule& ModuleLoader::parseAndStore(std::string_view text, const std::string& file) {
  TokenStream ts(detail::tokenize(text, file), file);
  std::string name;
  if (ts.peek(1).kind == Tok::Ident) name = ts.peek(1).text;
  if (!name.empty()) {
    if (std::find(inProgress_.begin(), inProgress_.end(), name) != inProgress_.end()) {
      throw Error(ErrorKind::Import, "cyclic import of module '" + name + "'", {file, 1, 1});
    }
    if (const SourceModule* existing = find(name)) return *existing;
    inProgress_.push_back(name);
  }
  struct Pop {
    std::vector<std::string>& v;
    bool active;
    ~Pop() {
      if (active) v.pop_back();
    }
  } pop{inProgress_, !name.empty()};
  Parser parser(*this, ts);
  auto m = parser.module();
  auto& slot = modules_[m->name];
  slot = std::move(m);
  return *slot;
}

const SourceModule& ModuleLoader::loadByName(const std::string& name, const SourceLocation& from) {
  if (std::find(inProgress_.begin(), inProgress_.end(), name) != inProgress_.end()) {
    throw Error(ErrorKind::Import, "cyclic import of module '" + name + "'", from);
  }
  if (const SourceModule* m = find(name)) return *m;
  const auto dirs = searchPath_;
  for (const auto& dir : dirs) {
    for (const char* ext : {".mthy", ".mrsl"}) {
      const auto candidate = dir / (name + ext);
      if (std::filesystem::exists(candidate)) return loadFile(candidate);
    }
  }
  throw Error(ErrorKind::Import, "cannot find module '" + name + "' on the search path", from);
}

const SourceModule* ModuleLoader::find(const std::string& name) const {
  auto it = modules_.find(name);
  return it == modules_.end() ? nullptr : it->second.get();
}

std::vector<const SourceModule*> ModuleLoader::closure(const SourceModule& m) const {
  std::vector<const SourceModule*> out;
  std::set<const SourceModule*> seen;
  std::function<void(const SourceModule&)> visit = [&](const SourceModule& cur) {
    if (!seen.insert(&cur).second) return;
    std::vector<std::string> deps = cur.uses;
    if (!cur.enhances.empty()) deps.insert(deps.begin(), cur.enhances);
    for (const auto& d : deps) {
      if (const SourceModule* dm = find(d)) visit(*dm);
    }
    out.push_back(&cur);
  };
  visit(m);
  return out;
}

std::vector<RewriteCorollary> ModuleLoader::rewriteRules(const SourceModule& m) const {
  std::vector<RewriteCorollary> out;
  for (const SourceModule* dep : closure(m)) out.insert(out.end(), dep->corollaries.begin(), dep->corollaries.end());
  return out;
}

const OperationDecl* ModuleLoader::findOperation(const SourceModule& m, const std::string& name) const {
  auto deps = closure(m);
  for (auto it = deps.rbegin(); it != deps.rend(); ++it) {
    for (const auto& op : (*it)->operations) {
      if (op.name == name) return &op;
    }
  }
  return nullptr;
}

const TypeFamilyDecl* ModuleLoader::findTypeFamily(const SourceModule& m, const std::string& name) const {
  auto deps = closure(m);
  for (auto it = deps.rbegin(); it != deps.rend(); ++it) {
    for (const auto& tf : (*it)->typeFamilies) {
      if (tf.name == name) return &tf;
    }
  }
  return nullptr;
}

const SourceModule* ModuleLoader::moduleOf(const TypeFamilyDecl* tf) const {
  for (const auto& [name, m] : modules_) {
    for (const auto& t : m->typeFamilies) {
      if (&t == tf) return m.get();
    }
  }
  return nullptr;
}

std::shared_ptr<const Context> buildContext(const std::vector<const SourceModule*>& modules) {
  auto ctx = std::make_shared<Context>(Context::builtins());
  for (const SourceModule* m : modules) {
    if (m != nullptr && m->context) ctx->importAll(*m->context);
  }
  return ctx;
}

Expr parseExpression(std::string_view text, const Context& ctx) {
  TokenStream ts(detail::tokenize(text, "<expr>"), "<expr>");
  ExprParser p(ts);
  Raw r = p.expr();
  if (!ts.atEnd()) ts.fail("unexpected " + TokenStream::describe(ts.peek()) + " after expression");
  return Elaborator(ctx).expr(r);
}

Sequent parseSequent(std::string_view text, const Context& ctx) {
  TokenStream ts(detail::tokenize(text, "<sequent>"), "<sequent>");
  ExprParser p(ts);
  Sequent s;
  auto side = [&](std::vector<Expr>& into) {
    ts.expectSym("{");
    if (!ts.isSym("}")) {
      do {
        Expr e = Elaborator(ctx).formula(p.expr(), "sequent member");
        if (std::none_of(into.begin(), into.end(), [&](const Expr& x) { return equalModParen(x, e); })) {
          into.push_back(e);
        }
      } while (ts.acceptSym(","));
    }
    ts.expectSym("}");
  };
  side(s.antecedents);
  ts.expectSym("|-");
  side(s.succedents);
  if (!ts.atEnd()) ts.fail("unexpected text after sequent");
  return s;
}

std::vector<std::filesystem::path> splitSearchPath(std::string_view list) {
  std::vector<std::filesystem::path> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t stop = std::min(list.find(':', start), list.size());
    if (stop > start) out.emplace_back(std::string(list.substr(start, stop - start)));
    start = stop + 1;
  }
  return out;
}

}  // namespace parsivc
