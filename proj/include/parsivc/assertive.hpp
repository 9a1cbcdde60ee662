#pragma once

#include <memory>
#include <string>
#include <vector>

#include "parsivc/context.hpp"
#include "parsivc/expr.hpp"

namespace parsivc {

/// Where an obligation came from: a source position plus the reason shown
/// next to the VC ("ensures clause of Do_Nothing", "requires of Pop at line 12").
struct Provenance {
  std::string file;
  int line = 0;
  int column = 0;
  std::string reason;

  bool operator==(const Provenance&) const = default;
};

enum class ParamMode { Updates, Restores, Alters, Evaluates };

std::string_view toString(ParamMode mode);

struct FormalParam {
  std::string name;
  ParamMode mode = ParamMode::Updates;
  Sort sort;
};

/// Everything the call rule needs about a callee, attached to each Call
/// statement by the builder so the engine stays independent of modules.
struct CallSpec {
  std::string operation;
  std::vector<FormalParam> formals;
  Expr precondition;  // over formals
  /// Effective ensures conjuncts (including `p = #p` for restores formals).
  std::vector<Expr> postconditions;
  /// Type-family constraint instantiated on each formal, empty when none.
  std::vector<Expr> constraints;
};

struct Statement {
  enum class Kind { Assume, Confirm, Stipulate, FnAssign, Call, If, While, Remember };

  Kind kind = Kind::Assume;
  /// Assume/Confirm/Stipulate payload, FnAssign value, If/While condition.
  Expr expr;
  /// FnAssign target variable.
  Expr target;
  // Call
  std::string callee;
  std::vector<Expr> args;
  std::shared_ptr<const CallSpec> spec;
  /// Set on calls replayed inside a loop's inductive block, whose
  /// precondition is already obligated on the enclosing path.
  bool skipPrecondition = false;
  // If
  std::vector<Statement> thenBody;
  std::vector<Statement> elseBody;
  // While
  Expr invariant;
  Expr decreasing;  // may be empty
  std::vector<Expr> changing;
  bool changingGiven = false;
  std::vector<Statement> body;
  /// Remember: program variables whose current value is the entry value.
  std::vector<Expr> remembered;

  Provenance provenance;

  static Statement assume(Expr e, Provenance p = {});
  static Statement confirm(Expr e, Provenance p = {});
  static Statement stipulate(Expr e, Provenance p = {});
  static Statement assign(Expr target, Expr value, Provenance p = {});
  static Statement remember(std::vector<Expr> vars, Provenance p = {});
};

std::string_view toString(Statement::Kind kind);

/// Gentzen sequent: the conjunction of the antecedents entails the
/// disjunction of the succedents. Both sides are duplicate-free modulo Paren
/// and keep insertion order.
struct Sequent {
  int id = 0;
  std::vector<Expr> antecedents;
  std::vector<Expr> succedents;
  Provenance provenance;
  bool vacuous = false;
  /// Variables already folded away by ApplyEqLeft in this sequent.
  std::vector<std::string> folded;

  /// Returns false when an equal formula is already present.
  bool addAntecedent(Expr e);
  bool addSuccedent(Expr e);
  bool hasAntecedent(const Expr& e) const;
  bool hasSuccedent(const Expr& e) const;
};

/// Assertive code: statements followed by a final Confirm over a set of
/// sequents. The final Confirm is held separately, never as a statement.
struct AssertiveBlock {
  std::string label;
  std::vector<Statement> statements;
  std::vector<Sequent> finalConfirm;
  std::shared_ptr<const Context> context;
  int nextSequentId = 1;

  Sequent& addSequent(Sequent s);
  const Sequent* findSequent(int id) const;
  Sequent* findSequent(int id);
};

}  // namespace parsivc
