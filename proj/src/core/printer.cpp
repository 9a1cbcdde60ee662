#include "parsivc/printer.hpp"

#include <sstream>

namespace parsivc {

namespace {

// Binding strength, loosest first.
enum Prec : int {
  kBinder = 0,
  kIff = 1,
  kImplies = 2,
  kOr = 3,
  kAnd = 4,
  kCompare = 5,
  kAdd = 6,
  kMul = 7,
  kUnary = 8,
  kAtom = 9,
};

bool isInfix(const Expr& e) {
  if (e.kind() != Expr::Kind::Apply || e.args().size() != 2) return false;
  const std::string& h = e.headName();
  return isComparisonOp(h) || isAdditiveOp(h) || isMultiplicativeOp(h);
}

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Connective:
      switch (e.connectiveOp()) {
        case Connective::Iff:
          return kIff;
        case Connective::Implies:
          return kImplies;
        case Connective::Or:
          return kOr;
        case Connective::And:
          return kAnd;
      }
      return kAtom;
    case Expr::Kind::Quantified:
    case Expr::Kind::Lambda:
    case Expr::Kind::Conditional:
      return kBinder;
    case Expr::Kind::Not:
      return kUnary;
    case Expr::Kind::IntLiteral:
      return e.intValue() < 0 ? kUnary : kAtom;
    case Expr::Kind::Apply:
      if (isInfix(e)) {
        const std::string& h = e.headName();
        if (isComparisonOp(h)) return kCompare;
        if (isAdditiveOp(h)) return kAdd;
        return kMul;
      }
      return kAtom;
    default:
      return kAtom;
  }
}

std::string_view keyword(Connective op) {
  switch (op) {
    case Connective::And:
      return "and";
    case Connective::Or:
      return "or";
    case Connective::Implies:
      return "implies";
    case Connective::Iff:
      return "iff";
  }
  return "?";
}

std::string_view keyword(Quantifier q) {
  switch (q) {
    case Quantifier::ForAll:
      return "forall";
    case Quantifier::Exists:
      return "exists";
    case Quantifier::ExistsUnique:
      return "exists_unique";
  }
  return "?";
}

void printBinders(std::ostream& os, std::span<const Binder> bs) {
  // Consecutive binders of one sort share an annotation: `x, y : Z; b : B`.
  for (std::size_t i = 0; i < bs.size();) {
    std::size_t j = i;
    if (i > 0) os << "; ";
    while (j < bs.size() && bs[j].sort == bs[i].sort) {
      if (j > i) os << ", ";
      os << bs[j].name;
      ++j;
    }
    os << " : " << bs[i].sort.str();
    i = j;
  }
}

void emit(std::ostream& os, const Expr& e, int minPrec);

void emitInner(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Variable:
      if (e.incoming()) os << '#';
      os << e.name();
      return;
    case Expr::Kind::BoolLiteral:
      os << (e.boolValue() ? "true" : "false");
      return;
    case Expr::Kind::IntLiteral:
      os << e.intValue();
      return;
    case Expr::Kind::Paren:
      os << '(';
      emit(os, e.child(0), kBinder);
      os << ')';
      return;
    case Expr::Kind::Not:
      os << "not ";
      emit(os, e.child(0), kUnary);
      return;
    case Expr::Kind::Connective: {
      const int p = precedence(e);
      // All binary connectives associate to the right.
      emit(os, e.child(0), p + 1);
      os << ' ' << keyword(e.connectiveOp()) << ' ';
      emit(os, e.child(1), p);
      return;
    }
    case Expr::Kind::Quantified:
      os << keyword(e.quantifier()) << ' ';
      printBinders(os, e.binders());
      os << ", ";
      emit(os, e.child(0), kBinder);
      return;
    case Expr::Kind::Lambda:
      os << "lambda ";
      printBinders(os, e.binders());
      os << ", ";
      emit(os, e.child(0), kBinder);
      return;
    case Expr::Kind::Conditional:
      os << "if ";
      emit(os, e.child(0), kBinder + 1);
      os << " then ";
      emit(os, e.child(1), kBinder + 1);
      os << " else ";
      emit(os, e.child(2), kBinder);
      return;
    case Expr::Kind::Product: {
      os << '(';
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) os << ", ";
        first = false;
        emit(os, c, kBinder);
      }
      os << ')';
      return;
    }
    case Expr::Kind::ArrowCtor:
      os << '(';
      emit(os, e.child(0), kAdd);
      os << " -> ";
      emit(os, e.child(1), kAdd);
      os << ')';
      return;
    case Expr::Kind::Apply: {
      const std::string& h = e.headName();
      if (isInfix(e)) {
        const int p = precedence(e);
        if (p == kCompare) {
          emit(os, e.args()[0], p + 1);
          os << ' ' << h << ' ';
          emit(os, e.args()[1], p + 1);
        } else {
          emit(os, e.args()[0], p);
          os << ' ' << h << ' ';
          emit(os, e.args()[1], p + 1);
        }
        return;
      }
      if (h == "|_|" && e.args().size() == 1) {
        os << '|';
        emit(os, e.args()[0], kAdd);
        os << '|';
        return;
      }
      if (h == "<_>" && e.args().size() == 1) {
        os << '<';
        emit(os, e.args()[0], kAdd);
        os << '>';
        return;
      }
      emit(os, e.head(), kAtom);
      os << '(';
      bool first = true;
      for (const auto& a : e.args()) {
        if (!first) os << ", ";
        first = false;
        emit(os, a, kBinder);
      }
      os << ')';
      return;
    }
  }
}

void emit(std::ostream& os, const Expr& e, int minPrec) {
  if (precedence(e) < minPrec) {
    os << '(';
    emitInner(os, e);
    os << ')';
  } else {
    emitInner(os, e);
  }
}

void emitList(std::ostream& os, const std::vector<Expr>& xs) {
  os << '{';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) os << ", ";
    emit(os, xs[i], kBinder);
  }
  os << '}';
}

void emitStatements(std::ostream& os, const std::vector<Statement>& body, int indent) {
  for (const auto& s : body) os << print(s, indent) << '\n';
}

}  // namespace

bool isComparisonOp(const std::string& op) {
  return op == "=" || op == "/=" || op == "<" || op == "<=" || op == ">" || op == ">=";
}

bool isAdditiveOp(const std::string& op) { return op == "+" || op == "-" || op == "o"; }

bool isMultiplicativeOp(const std::string& op) { return op == "*"; }

std::string print(const Expr& e) {
  if (!e) return "<empty>";
  std::ostringstream os;
  emit(os, e, kBinder);
  return os.str();
}

std::string print(const Sequent& s) {
  std::ostringstream os;
  emitList(os, s.antecedents);
  os << " |- ";
  emitList(os, s.succedents);
  return os.str();
}

std::string print(const Statement& s, int indent) {
  std::ostringstream os;
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case Statement::Kind::Assume:
    case Statement::Kind::Confirm:
    case Statement::Kind::Stipulate:
      os << toString(s.kind) << ' ' << print(s.expr) << ';';
      break;
    case Statement::Kind::FnAssign:
      os << print(s.target) << " := " << print(s.expr) << ';';
      break;
    case Statement::Kind::Call: {
      os << s.callee << '(';
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i > 0) os << ", ";
        os << print(s.args[i]);
      }
      os << ");";
      break;
    }
    case Statement::Kind::Remember: {
      os << "Remember";
      for (std::size_t i = 0; i < s.remembered.size(); ++i) os << (i == 0 ? " " : ", ") << print(s.remembered[i]);
      os << ';';
      break;
    }
    case Statement::Kind::If:
      os << "If " << print(s.expr) << " then\n";
      emitStatements(os, s.thenBody, indent + 1);
      if (!s.elseBody.empty()) {
        os << pad << "else\n";
        emitStatements(os, s.elseBody, indent + 1);
      }
      os << pad << "end;";
      break;
    case Statement::Kind::While: {
      os << "While " << print(s.expr) << '\n';
      if (s.changingGiven) {
        os << pad << "  changing ";
        for (std::size_t i = 0; i < s.changing.size(); ++i) os << (i == 0 ? "" : ", ") << print(s.changing[i]);
        os << ";\n";
      }
      os << pad << "  maintaining " << print(s.invariant) << ";\n";
      if (s.decreasing) os << pad << "  decreasing " << print(s.decreasing) << ";\n";
      os << pad << "do\n";
      emitStatements(os, s.body, indent + 1);
      os << pad << "end;";
      break;
    }
  }
  return os.str();
}

std::string print(const AssertiveBlock& b) {
  std::ostringstream os;
  emitStatements(os, b.statements, 0);
  os << "Confirm";
  if (b.finalConfirm.empty()) os << " true";
  for (std::size_t i = 0; i < b.finalConfirm.size(); ++i) {
    os << (i == 0 ? " " : "\n    and ") << print(b.finalConfirm[i]);
  }
  os << ';';
  return os.str();
}

}  // namespace parsivc
