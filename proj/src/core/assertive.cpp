#include "parsivc/assertive.hpp"

#include <algorithm>

namespace parsivc {

std::string_view toString(ParamMode mode) {
  switch (mode) {
    case ParamMode::Updates:
      return "updates";
    case ParamMode::Restores:
      return "restores";
    case ParamMode::Alters:
      return "alters";
    case ParamMode::Evaluates:
      return "evaluates";
  }
  return "?";
}

std::string_view toString(Statement::Kind kind) {
  switch (kind) {
    case Statement::Kind::Assume:
      return "Assume";
    case Statement::Kind::Confirm:
      return "Confirm";
    case Statement::Kind::Stipulate:
      return "Stipulate";
    case Statement::Kind::FnAssign:
      return "FnAssign";
    case Statement::Kind::Call:
      return "Call";
    case Statement::Kind::If:
      return "If";
    case Statement::Kind::While:
      return "While";
    case Statement::Kind::Remember:
      return "Remember";
  }
  return "?";
}

namespace {

Statement payload(Statement::Kind kind, Expr e, Provenance p) {
  Statement s;
  s.kind = kind;
  s.expr = std::move(e);
  s.provenance = std::move(p);
  return s;
}

bool containsModParen(const std::vector<Expr>& xs, const Expr& e) {
  return std::any_of(xs.begin(), xs.end(), [&](const Expr& x) { return equalModParen(x, e); });
}

}  // namespace

Statement Statement::assume(Expr e, Provenance p) { return payload(Kind::Assume, std::move(e), std::move(p)); }
Statement Statement::confirm(Expr e, Provenance p) { return payload(Kind::Confirm, std::move(e), std::move(p)); }
Statement Statement::stipulate(Expr e, Provenance p) {
  return payload(Kind::Stipulate, std::move(e), std::move(p));
}

Statement Statement::assign(Expr target, Expr value, Provenance p) {
  Statement s = payload(Kind::FnAssign, std::move(value), std::move(p));
  s.target = std::move(target);
  return s;
}

Statement Statement::remember(std::vector<Expr> vars, Provenance p) {
  Statement s;
  s.kind = Kind::Remember;
  s.remembered = std::move(vars);
  s.provenance = std::move(p);
  return s;
}

bool Sequent::addAntecedent(Expr e) {
  if (hasAntecedent(e)) return false;
  antecedents.push_back(std::move(e));
  return true;
}

bool Sequent::addSuccedent(Expr e) {
  if (hasSuccedent(e)) return false;
  succedents.push_back(std::move(e));
  return true;
}

bool Sequent::hasAntecedent(const Expr& e) const { return containsModParen(antecedents, e); }
bool Sequent::hasSuccedent(const Expr& e) const { return containsModParen(succedents, e); }

Sequent& AssertiveBlock::addSequent(Sequent s) {
  s.id = nextSequentId++;
  finalConfirm.push_back(std::move(s));
  return finalConfirm.back();
}

const Sequent* AssertiveBlock::findSequent(int id) const {
  for (const auto& s : finalConfirm) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

Sequent* AssertiveBlock::findSequent(int id) {
  for (auto& s : finalConfirm) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

}  // namespace parsivc
