#pragma once

#include <string>

#include "parsivc/assertive.hpp"
#include "parsivc/expr.hpp"

namespace parsivc {

/// ASCII concrete syntax, parseable by the frontend. Parentheses are
/// inserted only where precedence demands them, plus wherever the tree holds
/// an explicit Paren node.
std::string print(const Expr& e);

/// `{a, b} |- {c}`
std::string print(const Sequent& s);

/// One statement in source-like form, without a trailing newline.
std::string print(const Statement& s, int indent = 0);

/// The whole block: statements one per line, then the final Confirm.
std::string print(const AssertiveBlock& b);

/// Operator classification shared with the parser.
bool isComparisonOp(const std::string& op);
bool isAdditiveOp(const std::string& op);
bool isMultiplicativeOp(const std::string& op);

}  // namespace parsivc
