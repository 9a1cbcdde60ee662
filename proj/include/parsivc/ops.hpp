#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "parsivc/assertive.hpp"
#include "parsivc/context.hpp"
#include "parsivc/expr.hpp"

namespace parsivc {

/// A specification variable occurrence: `#x` and `x` are distinct keys.
struct VarKey {
  std::string name;
  bool incoming = false;

  auto operator<=>(const VarKey&) const = default;
  std::string str() const { return incoming ? "#" + name : name; }
  static VarKey of(const Expr& var) { return {var.name(), var.incoming()}; }
};

using VarSet = std::set<VarKey>;
using Substitution = std::map<VarKey, Expr>;

/// Replaces every free occurrence of `v` in `e` by `t`. Occurrences bound by
/// a Quantified/Lambda binder of the same name are left alone. Throws a
/// Substitution error when the sorts of `v` and `t` disagree (`ctx`, when
/// given, supplies subsorts).
Expr substitute(const Expr& e, const Expr& v, const Expr& t, const Context* ctx = nullptr);

/// Simultaneous substitution. No sort checking.
Expr substituteAll(const Expr& e, const Substitution& map);

/// Flattens the top-level conjunction chain of `phi`, left to right. Paren
/// nodes around conjunctions are looked through.
std::vector<Expr> splitConjuncts(const Expr& phi);

/// Right-leaning conjunction of `parts`; `true` when empty.
Expr conjoin(const std::vector<Expr>& parts);

/// Free specification variables of `e` under `ctx`. Throws a Resolution
/// error for a free symbol that `ctx` does not know.
VarSet sfv(const Context& ctx, const Expr& e);
VarSet sfvSet(const Context& ctx, const std::vector<Expr>& exprs);
VarSet sfvSequent(const Context& ctx, const Sequent& s);

/// Free-variable closure of `seed` through the sibling `conjuncts`.
VarSet fvc(const Context& ctx, const Expr& seed, const std::vector<Expr>& conjuncts);

/// Every free variable name (spec or not) occurring in `e`, for renaming.
std::set<VarKey> freeVariables(const Expr& e);

bool intersects(const VarSet& a, const VarSet& b);

/// `base` with one or more primes appended, stopping at the first name unknown
/// to `ctx` and not in `taken`: S with S' taken gives S''.
std::string freshName(const Context& ctx, const std::string& base, const std::set<std::string>& taken = {});

}  // namespace parsivc
