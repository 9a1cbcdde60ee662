#include "parsivc/ops.hpp"

#include <algorithm>

#include "parsivc/error.hpp"

namespace parsivc {

namespace {

bool bindsName(const Expr& e, const std::string& name) {
  const auto bs = e.binders();
  return std::any_of(bs.begin(), bs.end(), [&](const Binder& b) { return b.name == name; });
}

Expr substituteRec(const Expr& e, const Substitution& map) {
  switch (e.kind()) {
    case Expr::Kind::Variable: {
      auto it = map.find(VarKey::of(e));
      return it == map.end() ? e : it->second;
    }
    case Expr::Kind::BoolLiteral:
    case Expr::Kind::IntLiteral:
      return e;
    case Expr::Kind::Quantified:
    case Expr::Kind::Lambda: {
      // Binder names shield plain occurrences beneath them.
      Substitution inner;
      for (const auto& [k, v] : map) {
        if (k.incoming || !bindsName(e, k.name)) inner.emplace(k, v);
      }
      if (inner.empty()) return e;
      return e.withChildren({substituteRec(e.child(0), inner)});
    }
    default:
      break;
  }
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  bool changed = false;
  for (const auto& c : e.children()) {
    kids.push_back(substituteRec(c, map));
    changed = changed || kids.back().identity() != c.identity();
  }
  return changed ? e.withChildren(std::move(kids)) : e;
}

void collectFree(const Expr& e, std::vector<std::string>& bound, std::set<VarKey>& out,
                 const Context* ctx, bool specOnly) {
  switch (e.kind()) {
    case Expr::Kind::Variable: {
      if (!e.incoming() && std::find(bound.begin(), bound.end(), e.name()) != bound.end()) return;
      if (ctx != nullptr) {
        const Symbol* sym = ctx->lookupVariable(e.name(), e.incoming());
        if (sym == nullptr) {
          throw Error(ErrorKind::Resolution,
                      "unresolved symbol '" + (e.incoming() ? "#" + e.name() : e.name()) + "'",
                      {"", e.line(), e.column()});
        }
        if (specOnly && sym->kind != SymbolKind::SpecVariable) return;
      }
      out.insert(VarKey::of(e));
      return;
    }
    case Expr::Kind::Quantified:
    case Expr::Kind::Lambda: {
      const std::size_t mark = bound.size();
      for (const auto& b : e.binders()) bound.push_back(b.name);
      collectFree(e.child(0), bound, out, ctx, specOnly);
      bound.resize(mark);
      return;
    }
    default:
      for (const auto& c : e.children()) collectFree(c, bound, out, ctx, specOnly);
  }
}

}  // namespace

Expr substitute(const Expr& e, const Expr& v, const Expr& t, const Context* ctx) {
  if (v.kind() != Expr::Kind::Variable) {
    throw Error(ErrorKind::Substitution, "substitution target must be a variable");
  }
  const bool ok = ctx ? ctx->accepts(v.sort(), t.sort()) : (v.sort() == t.sort() || v.sort().isEntity());
  if (!ok) {
    throw Error(ErrorKind::Substitution, "cannot substitute a " + t.sort().str() + " term for variable '" +
                                             VarKey::of(v).str() + "' of sort " + v.sort().str());
  }
  return substituteRec(e, {{VarKey::of(v), t}});
}

Expr substituteAll(const Expr& e, const Substitution& map) {
  if (map.empty()) return e;
  return substituteRec(e, map);
}

std::vector<Expr> splitConjuncts(const Expr& phi) {
  std::vector<Expr> out;
  std::vector<const Expr*> stack{&phi};
  while (!stack.empty()) {
    const Expr& cur = stripParen(*stack.back());
    const Expr& original = *stack.back();
    stack.pop_back();
    if (cur.kind() == Expr::Kind::Connective && cur.connectiveOp() == Connective::And) {
      stack.push_back(&cur.child(1));
      stack.push_back(&cur.child(0));
    } else {
      out.push_back(original);
    }
  }
  return out;
}

Expr conjoin(const std::vector<Expr>& parts) {
  if (parts.empty()) return Expr::boolean(true);
  Expr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
    acc = Expr::connective(Connective::And, *it, acc);
  }
  return acc;
}

VarSet sfv(const Context& ctx, const Expr& e) {
  VarSet out;
  std::vector<std::string> bound;
  collectFree(e, bound, out, &ctx, true);
  return out;
}

VarSet sfvSet(const Context& ctx, const std::vector<Expr>& exprs) {
  VarSet out;
  for (const auto& e : exprs) {
    auto s = sfv(ctx, e);
    out.insert(s.begin(), s.end());
  }
  return out;
}

VarSet sfvSequent(const Context& ctx, const Sequent& s) {
  VarSet out = sfvSet(ctx, s.antecedents);
  auto right = sfvSet(ctx, s.succedents);
  out.insert(right.begin(), right.end());
  return out;
}

bool intersects(const VarSet& a, const VarSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

VarSet fvc(const Context& ctx, const Expr& seed, const std::vector<Expr>& conjuncts) {
  VarSet closure = sfv(ctx, seed);
  std::vector<VarSet> parts;
  parts.reserve(conjuncts.size());
  for (const auto& c : conjuncts) parts.push_back(sfv(ctx, c));
  std::vector<bool> used(parts.size(), false);
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (used[i] || !intersects(parts[i], closure)) continue;
      used[i] = true;
      const std::size_t before = closure.size();
      closure.insert(parts[i].begin(), parts[i].end());
      grew = grew || closure.size() != before;
    }
  }
  return closure;
}

std::set<VarKey> freeVariables(const Expr& e) {
  std::set<VarKey> out;
  std::vector<std::string> bound;
  collectFree(e, bound, out, nullptr, false);
  return out;
}

std::string freshName(const Context& ctx, const std::string& base, const std::set<std::string>& taken) {
  std::string name = base + "'";
  while (ctx.contains(name) || taken.contains(name)) name += "'";
  return name;
}

}  // namespace parsivc
