#include "parsivc/expr.hpp"

#include <functional>

#include "parsivc/error.hpp"

namespace parsivc {

struct Expr::Node {
  Kind kind = Kind::BoolLiteral;
  Sort sort;
  std::string name;
  bool incoming = false;
  Connective op = Connective::And;
  Quantifier quant = Quantifier::ForAll;
  bool boolValue = false;
  std::int64_t intValue = 0;
  std::vector<Binder> binders;
  std::vector<Expr> kids;
  int line = 0;
  int column = 0;
};

namespace {

const std::string kEmpty;

void requireFormula(const Expr& e, const char* where) {
  if (!e.isFormula()) {
    throw Error(ErrorKind::Sort, std::string(where) + " expects a B-sorted operand, got " + e.sort().str());
  }
}

}  // namespace

Expr Expr::variable(std::string name, Sort sort, bool incoming) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  n->sort = std::move(sort);
  n->incoming = incoming;
  return Expr(std::move(n));
}

Expr Expr::apply(Expr head, std::vector<Expr> args, Sort result) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->sort = std::move(result);
  n->kids.reserve(args.size() + 1);
  n->kids.push_back(std::move(head));
  for (auto& a : args) n->kids.push_back(std::move(a));
  return Expr(std::move(n));
}

Expr Expr::connective(Connective op, Expr left, Expr right) {
  requireFormula(left, "connective");
  requireFormula(right, "connective");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Connective;
  n->op = op;
  n->kids = {std::move(left), std::move(right)};
  return Expr(std::move(n));
}

Expr Expr::negation(Expr inner) {
  requireFormula(inner, "not");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->kids = {std::move(inner)};
  return Expr(std::move(n));
}

Expr Expr::quantified(Quantifier q, std::vector<Binder> binders, Expr body) {
  requireFormula(body, "quantifier body");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quantified;
  n->quant = q;
  n->binders = std::move(binders);
  n->kids = {std::move(body)};
  return Expr(std::move(n));
}

Expr Expr::lambda(std::vector<Binder> binders, Expr body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lambda;
  std::vector<Sort> domain;
  for (const auto& b : binders) domain.push_back(b.sort);
  n->sort = Sort::arrow(std::move(domain), body.sort());
  n->binders = std::move(binders);
  n->kids = {std::move(body)};
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> components) {
  std::vector<Sort> sorts;
  for (const auto& c : components) sorts.push_back(c.sort());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->sort = Sort::product(std::move(sorts));
  n->kids = std::move(components);
  return Expr(std::move(n));
}

Expr Expr::arrowCtor(Expr from, Expr to) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ArrowCtor;
  n->sort = Sort::sset();
  n->kids = {std::move(from), std::move(to)};
  return Expr(std::move(n));
}

Expr Expr::boolean(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::BoolLiteral;
  n->boolValue = value;
  return Expr(std::move(n));
}

Expr Expr::integer(std::int64_t value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntLiteral;
  n->sort = Sort::named("Z");
  n->intValue = value;
  return Expr(std::move(n));
}

Expr Expr::paren(Expr inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Paren;
  n->sort = inner.sort();
  n->kids = {std::move(inner)};
  return Expr(std::move(n));
}

Expr Expr::conditional(Expr condition, Expr thenExpr, Expr elseExpr) {
  requireFormula(condition, "if-condition");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Conditional;
  n->sort = thenExpr.sort();
  n->kids = {std::move(condition), std::move(thenExpr), std::move(elseExpr)};
  return Expr(std::move(n));
}

Expr Expr::binary(const std::string& op, Sort opSort, Expr left, Expr right, Sort result) {
  return apply(variable(op, std::move(opSort)), {std::move(left), std::move(right)}, std::move(result));
}

const Expr::Node& Expr::node() const {
  if (!node_) throw Error(ErrorKind::Engine, "use of empty expression");
  return *node_;
}

Expr::Kind Expr::kind() const { return node().kind; }
const Sort& Expr::sort() const { return node().sort; }
const std::string& Expr::name() const { return node().name; }
bool Expr::incoming() const { return node().incoming; }
Connective Expr::connectiveOp() const { return node().op; }
Quantifier Expr::quantifier() const { return node().quant; }
std::span<const Binder> Expr::binders() const { return node().binders; }
bool Expr::boolValue() const { return node().boolValue; }
std::int64_t Expr::intValue() const { return node().intValue; }
std::span<const Expr> Expr::children() const { return node().kids; }
int Expr::line() const { return node().line; }
int Expr::column() const { return node().column; }

const std::string& Expr::headName() const {
  if (kind() != Kind::Apply) return kEmpty;
  const Expr& h = head();
  if (h.kind() != Kind::Variable || h.incoming()) return kEmpty;
  return h.name();
}

bool Expr::isApplicationOf(std::string_view op) const {
  return kind() == Kind::Apply && headName() == op;
}

Expr Expr::withChildren(std::vector<Expr> children) const {
  auto n = std::make_shared<Node>(node());
  if (n->kind == Kind::Lambda) {
    std::vector<Sort> domain;
    for (const auto& b : n->binders) domain.push_back(b.sort);
    n->sort = Sort::arrow(std::move(domain), children.at(0).sort());
  } else if (n->kind == Kind::Paren) {
    n->sort = children.at(0).sort();
  }
  n->kids = std::move(children);
  return Expr(std::move(n));
}

Expr Expr::at(int line, int column) const {
  auto n = std::make_shared<Node>(node());
  n->line = line;
  n->column = column;
  return Expr(std::move(n));
}

const Expr& stripParen(const Expr& e) {
  const Expr* cur = &e;
  while (cur->kind() == Expr::Kind::Paren) cur = &cur->child(0);
  return *cur;
}

bool equalModParen(const Expr& a0, const Expr& b0) {
  const Expr& a = stripParen(a0);
  const Expr& b = stripParen(b0);
  if (a.identity() == b.identity()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Variable:
      return a.name() == b.name() && a.incoming() == b.incoming();
    case Expr::Kind::BoolLiteral:
      return a.boolValue() == b.boolValue();
    case Expr::Kind::IntLiteral:
      return a.intValue() == b.intValue();
    case Expr::Kind::Connective:
      if (a.connectiveOp() != b.connectiveOp()) return false;
      break;
    case Expr::Kind::Quantified:
      if (a.quantifier() != b.quantifier()) return false;
      [[fallthrough]];
    case Expr::Kind::Lambda:
      if (!std::equal(a.binders().begin(), a.binders().end(), b.binders().begin(), b.binders().end())) {
        return false;
      }
      break;
    default:
      break;
  }
  auto ka = a.children();
  auto kb = b.children();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (!equalModParen(ka[i], kb[i])) return false;
  }
  return true;
}

std::size_t hashModParen(const Expr& e0) {
  const Expr& e = stripParen(e0);
  auto mix = [](std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); };
  std::size_t h = static_cast<std::size_t>(e.kind());
  switch (e.kind()) {
    case Expr::Kind::Variable:
      h = mix(h, std::hash<std::string>{}(e.name()));
      h = mix(h, e.incoming() ? 1 : 0);
      break;
    case Expr::Kind::BoolLiteral:
      h = mix(h, e.boolValue() ? 1 : 0);
      break;
    case Expr::Kind::IntLiteral:
      h = mix(h, std::hash<std::int64_t>{}(e.intValue()));
      break;
    case Expr::Kind::Connective:
      h = mix(h, static_cast<std::size_t>(e.connectiveOp()));
      break;
    case Expr::Kind::Quantified:
    case Expr::Kind::Lambda:
      for (const auto& b : e.binders()) h = mix(h, std::hash<std::string>{}(b.name));
      break;
    default:
      break;
  }
  for (const auto& c : e.children()) h = mix(h, hashModParen(c));
  return h;
}

}  // namespace parsivc
