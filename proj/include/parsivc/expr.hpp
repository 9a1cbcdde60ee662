#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parsivc/sort.hpp"

namespace parsivc {

enum class Connective { And, Or, Implies, Iff };
enum class Quantifier { ForAll, Exists, ExistsUnique };

struct Binder {
  std::string name;
  Sort sort;

  bool operator==(const Binder&) const = default;
};

/// Immutable term/formula tree. Formulas are simply the B-sorted
/// expressions. Copies share structure.
///
/// Children layout per kind:
///   Apply        head, args...
///   Connective   left, right
///   Not, Paren   inner
///   Quantified   body          (binders() holds the bound names)
///   Lambda       body
///   Product      components...
///   ArrowCtor    from, to
///   Conditional  condition, then, else
class Expr {
 public:
  enum class Kind {
    Variable,
    Apply,
    Connective,
    Not,
    Quantified,
    Lambda,
    Product,
    ArrowCtor,
    BoolLiteral,
    IntLiteral,
    Paren,
    Conditional,
  };

  Expr() = default;

  static Expr variable(std::string name, Sort sort, bool incoming = false);
  static Expr apply(Expr head, std::vector<Expr> args, Sort result);
  static Expr connective(Connective op, Expr left, Expr right);
  static Expr negation(Expr inner);
  static Expr quantified(Quantifier q, std::vector<Binder> binders, Expr body);
  static Expr lambda(std::vector<Binder> binders, Expr body);
  static Expr product(std::vector<Expr> components);
  static Expr arrowCtor(Expr from, Expr to);
  static Expr boolean(bool value);
  static Expr integer(std::int64_t value);
  static Expr paren(Expr inner);
  static Expr conditional(Expr condition, Expr thenExpr, Expr elseExpr);

  /// Binary application of an operator symbol, e.g. `=` or `+`.
  static Expr binary(const std::string& op, Sort opSort, Expr left, Expr right, Sort result);

  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  const Sort& sort() const;
  bool isFormula() const { return sort().isBoolean(); }

  // Variable
  const std::string& name() const;
  bool incoming() const;

  Connective connectiveOp() const;
  Quantifier quantifier() const;
  std::span<const Binder> binders() const;
  bool boolValue() const;
  std::int64_t intValue() const;

  std::span<const Expr> children() const;
  const Expr& child(std::size_t i) const { return children()[i]; }

  // Apply helpers.
  const Expr& head() const { return child(0); }
  std::span<const Expr> args() const { return children().subspan(1); }
  /// Name of the head symbol when the head is a plain variable, else "".
  const std::string& headName() const;
  /// True for `Apply(op, ...)` whose head is the non-incoming variable `op`.
  bool isApplicationOf(std::string_view op) const;
  bool isEquality() const { return isApplicationOf("=") && args().size() == 2; }
  bool isTrue() const { return kind() == Kind::BoolLiteral && boolValue(); }
  bool isFalse() const { return kind() == Kind::BoolLiteral && !boolValue(); }

  /// Same node with the children replaced (binders, names, sort kept).
  Expr withChildren(std::vector<Expr> children) const;

  /// Source position recorded by the parser (0 when synthesized).
  int line() const;
  int column() const;
  Expr at(int line, int column) const;

  /// Identity of the shared node; equal handles are structurally equal.
  const void* identity() const { return node_.get(); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

/// Drops any number of enclosing Paren nodes.
const Expr& stripParen(const Expr& e);

/// Structural equality ignoring Paren nodes and source positions. No
/// alpha-equivalence.
bool equalModParen(const Expr& a, const Expr& b);

struct ExprEqual {
  bool operator()(const Expr& a, const Expr& b) const { return equalModParen(a, b); }
};

std::size_t hashModParen(const Expr& e);

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return hashModParen(e); }
};

}  // namespace parsivc
