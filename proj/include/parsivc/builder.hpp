#pragma once

#include <vector>

#include "parsivc/assertive.hpp"
#include "parsivc/frontend.hpp"
#include "parsivc/ops.hpp"

namespace parsivc {

/// Lowers a procedure to assertive blocks, one per control path. Each If
/// doubles the paths through it; each While contributes its base-case Confirm
/// to the enclosing path, an inductive-step block per path through its body,
/// and continues the enclosing path after the loop.
///
/// Labels read `Proc / path k / ensures` or `Proc / path k / invariant
/// inductive step`.
std::vector<AssertiveBlock> buildProcedure(const ProcedureDecl& proc, const SourceModule& m,
                                           const ModuleLoader& loader);

/// The statements of an Assertive_Code declaration under an empty final
/// Confirm, labelled with the declaration name.
AssertiveBlock buildAssertiveCode(const AssertiveCodeDecl& decl);

/// Every Assertive_Code declaration and procedure of `m`, in source order.
std::vector<AssertiveBlock> buildModule(const SourceModule& m, const ModuleLoader& loader);

/// Applies `rho` to every expression in `st`, including assignment targets
/// and nested bodies.
Statement renameStatement(const Statement& st, const Substitution& rho);

/// Variables a statement list may modify: assignment targets and arguments
/// passed to non-evaluates, non-restores formals.
std::vector<Expr> modifiedVariables(const std::vector<Statement>& body, const SourceModule& m,
                                    const ModuleLoader& loader);

}  // namespace parsivc
