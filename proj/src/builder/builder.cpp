#include "parsivc/builder.hpp"

#include <algorithm>
#include <set>

#include "parsivc/engine.hpp"
#include "parsivc/error.hpp"

namespace parsivc {

namespace {

SourceLocation locOf(const Provenance& p) { return {p.file, p.line, p.column}; }

Provenance provOf(const SourceLocation& l, std::string reason = {}) {
  return {l.file, l.line, l.column, std::move(reason)};
}

Expr renameExpr(const Expr& e, const Substitution& rho) { return e ? substituteAll(e, rho) : e; }

std::vector<Statement> renameAll(const std::vector<Statement>& xs, const Substitution& rho) {
  std::vector<Statement> out;
  out.reserve(xs.size());
  for (const auto& s : xs) out.push_back(renameStatement(s, rho));
  return out;
}

const OperationDecl& requireOperation(const Statement& call, const SourceModule& m, const ModuleLoader& loader) {
  const OperationDecl* op = loader.findOperation(m, call.callee);
  if (op == nullptr) {
    throw Error(ErrorKind::Resolution, "no operation specification for '" + call.callee + "'",
                locOf(call.provenance));
  }
  if (op->params.size() != call.args.size()) {
    throw Error(ErrorKind::Sort,
                call.callee + " expects " + std::to_string(op->params.size()) + " argument(s), got " +
                    std::to_string(call.args.size()),
                locOf(call.provenance));
  }
  return *op;
}

void collectModified(const std::vector<Statement>& body, const SourceModule& m, const ModuleLoader& loader,
                     std::vector<Expr>& out) {
  auto add = [&](const Expr& v) {
    if (v.kind() != Expr::Kind::Variable || v.incoming()) return;
    if (std::none_of(out.begin(), out.end(), [&](const Expr& x) { return x.name() == v.name(); })) out.push_back(v);
  };
  for (const auto& s : body) {
    switch (s.kind) {
      case Statement::Kind::FnAssign:
        add(s.target);
        break;
      case Statement::Kind::Call: {
        const OperationDecl& op = requireOperation(s, m, loader);
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          const ParamMode mode = op.params[i].mode;
          if (mode != ParamMode::Evaluates && mode != ParamMode::Restores) add(s.args[i]);
        }
        break;
      }
      case Statement::Kind::If:
        collectModified(s.thenBody, m, loader, out);
        collectModified(s.elseBody, m, loader, out);
        break;
      case Statement::Kind::While:
        if (s.changingGiven) {
          for (const auto& v : s.changing) add(v);
        } else {
          collectModified(s.body, m, loader, out);
        }
        break;
      default:
        break;
    }
  }
}

/// One control path under construction. `rho` renames source-level names to
/// the names current at the end of the path; it is applied to each statement
/// as it is appended and to the goal when the path is closed.
struct Path {
  std::vector<Statement> statements;
  Substitution rho;
};

class ProcedureBuilder {
 public:
  ProcedureBuilder(const ProcedureDecl& proc, const SourceModule& m, const ModuleLoader& loader)
      : proc_(proc), m_(m), loader_(loader), ctx_(std::make_shared<Context>(proc.context)) {
    op_ = loader.findOperation(m, proc.name);
    if (op_ != nullptr && op_->params.size() != proc.params.size()) op_ = nullptr;
    intSort_ = ctx_->lookup("Z") && ctx_->lookup("Z")->kind == SymbolKind::Sort;
  }

  std::vector<AssertiveBlock> run() {
    Path start;
    start.statements = prologue();
    std::vector<Path> ends = expand(proc_.body, {start});
    std::vector<AssertiveBlock> out;
    for (auto& p : ends) out.push_back(close(p, ensuresGoal(p.rho), "ensures"));
    for (auto& b : inductive_) {
      b.label = proc_.name + " / path " + std::to_string(++pathCount_) + " / invariant inductive step";
      out.push_back(std::move(b));
    }
    return out;
  }

 private:
  Expr equality(const Expr& l, const Expr& r) const {
    return Expr::binary("=", ctx_->lookup("=")->sort, l, r, Sort::boolean());
  }

  Expr incomingOf(const std::string& name, const Sort& s) const { return Expr::variable(name, s, true); }

  const TypeFamilyDecl* family(const std::string& typeName) const {
    return typeName.empty() ? nullptr : loader_.findTypeFamily(m_, typeName);
  }

  static Expr onExemplar(const Expr& e, const TypeFamilyDecl& tf, const Expr& value) {
    return e ? substituteAll(e, {{{tf.exemplar, false}, value}}) : e;
  }

  std::vector<Statement> prologue() {
    std::vector<Statement> out;
    std::vector<Expr> pre;
    for (const SourceModule* dep : loader_.closure(m_)) {
      if (dep->moduleRequires) pre.push_back(dep->moduleRequires);
    }
    Substitution toIncoming;
    for (const auto& p : proc_.params) toIncoming[{p.name, false}] = incomingOf(p.name, p.sort);
    for (const auto& p : proc_.params) {
      if (const TypeFamilyDecl* tf = family(p.typeName); tf && tf->constraint) {
        pre.push_back(onExemplar(tf->constraint, *tf, incomingOf(p.name, p.sort)));
      }
    }
    if (op_ != nullptr) {
      for (const auto& c : splitConjuncts(op_->precondition)) {
        if (!stripParen(c).isTrue()) pre.push_back(substituteAll(c, toIncoming));
      }
    }
    if (!pre.empty()) out.push_back(Statement::assume(conjoin(pre), provOf(proc_.loc, "requires")));
    if (!proc_.params.empty()) {
      std::vector<Expr> vars;
      for (const auto& p : proc_.params) vars.push_back(Expr::variable(p.name, p.sort));
      out.push_back(Statement::remember(std::move(vars), provOf(proc_.loc)));
    }
    for (const auto& v : proc_.locals) {
      const Expr var = Expr::variable(v.name, v.sort);
      std::vector<Expr> init;
      if (v.typeName == "Integer" && intSort_) {
        init.push_back(equality(var, Expr::integer(0)));
      } else if (v.typeName == "Boolean") {
        init.push_back(equality(var, Expr::boolean(false)));
      } else if (const TypeFamilyDecl* tf = family(v.typeName)) {
        if (tf->initialization) init.push_back(onExemplar(tf->initialization, *tf, var));
        if (tf->constraint) init.push_back(onExemplar(tf->constraint, *tf, var));
      }
      if (!init.empty()) out.push_back(Statement::assume(conjoin(init), provOf(v.loc, "initialization of " + v.name)));
    }
    return out;
  }

  std::shared_ptr<const CallSpec> specFor(const Statement& call) {
    const OperationDecl& op = requireOperation(call, m_, loader_);
    auto spec = std::make_shared<CallSpec>();
    spec->operation = op.name;
    spec->precondition = op.precondition;
    Substitution formals;
    for (std::size_t i = 0; i < op.params.size(); ++i) {
      const ParamDecl& p = op.params[i];
      if (!ctx_->accepts(p.sort, call.args[i].sort())) {
        throw Error(ErrorKind::Sort,
                    "argument " + std::to_string(i + 1) + " of " + op.name + " expects " + p.sort.str() + ", got " +
                        call.args[i].sort().str(),
                    locOf(call.provenance));
      }
      spec->formals.push_back({p.name, p.mode, p.sort});
    }
    spec->postconditions = splitConjuncts(op.postcondition);
    std::erase_if(spec->postconditions, [](const Expr& e) { return stripParen(e).isTrue(); });
    for (const auto& p : op.params) {
      if (p.mode == ParamMode::Restores) {
        spec->postconditions.push_back(equality(Expr::variable(p.name, p.sort), incomingOf(p.name, p.sort)));
      }
    }
    for (const auto& p : op.params) {
      const TypeFamilyDecl* tf = family(p.typeName);
      spec->constraints.push_back(tf && tf->constraint ? onExemplar(tf->constraint, *tf, Expr::variable(p.name, p.sort))
                                                       : Expr());
    }
    return spec;
  }

  Expr freshVariable(const Expr& current) {
    const std::string name = freshName(*ctx_, current.name(), {});
    ctx_->defineSpecVariable(name, current.sort(), proc_.name);
    return Expr::variable(name, current.sort());
  }

  Substitution freshen(const Substitution& rho, const std::vector<Expr>& vars) {
    Substitution out = rho;
    for (const auto& v : vars) {
      const VarKey k = VarKey::of(v);
      auto it = rho.find(k);
      out[k] = freshVariable(it == rho.end() ? v : it->second);
    }
    return out;
  }

  void appendSimple(Path& p, const Statement& s) {
    Statement r = renameStatement(s, p.rho);
    if (r.kind == Statement::Kind::Call) r.spec = specFor(r);
    p.statements.push_back(std::move(r));
  }

  std::vector<Path> expand(const std::vector<Statement>& body, std::vector<Path> paths) {
    for (const auto& s : body) {
      std::vector<Path> next;
      for (auto& p : paths) {
        if (s.kind == Statement::Kind::If) {
          const Expr c = renameExpr(s.expr, p.rho);
          Path t = p;
          Path e = std::move(p);
          t.statements.push_back(Statement::stipulate(c, withReason(s.provenance, "condition of If")));
          e.statements.push_back(
              Statement::stipulate(Expr::negation(c), withReason(s.provenance, "condition of If (negated)")));
          for (auto& q : expand(s.thenBody, {std::move(t)})) next.push_back(std::move(q));
          for (auto& q : expand(s.elseBody, {std::move(e)})) next.push_back(std::move(q));
        } else if (s.kind == Statement::Kind::While) {
          next.push_back(loop(std::move(p), s));
        } else {
          appendSimple(p, s);
          next.push_back(std::move(p));
        }
      }
      paths = std::move(next);
    }
    return paths;
  }

  Path loop(Path p, const Statement& w) {
    std::vector<Expr> changing = w.changingGiven ? w.changing : std::vector<Expr>{};
    if (!w.changingGiven) collectModified(w.body, m_, loader_, changing);
    const Provenance at = w.provenance;

    Path base = p;
    Provenance baseProv = at;
    baseProv.reason = "maintaining clause (base case)";
    base.statements.push_back(Statement::confirm(renameExpr(w.invariant, p.rho), baseProv));

    // Inductive step from an arbitrary state satisfying the invariant.
    Path step;
    for (const auto& s : p.statements) {
      if (s.kind == Statement::Kind::Confirm) continue;
      Statement c = s;
      if (c.kind == Statement::Kind::Call) c.skipPrecondition = true;
      step.statements.push_back(std::move(c));
    }
    step.rho = freshen(p.rho, changing);
    Expr measure;
    Expr entry;
    if (w.decreasing) {
      if (!intSort_ || !ctx_->accepts(Sort::named("Z"), w.decreasing.sort())) {
        throw Error(ErrorKind::Sort, "decreasing clause must be an integer", locOf(at));
      }
      entry = freshVariable(Expr::variable("P_Val", Sort::named("Z")));
      measure = w.decreasing;
    }
    Expr hyp = renameExpr(w.invariant, step.rho);
    if (measure) hyp = Expr::connective(Connective::And, hyp, equality(renameExpr(measure, step.rho), entry));
    step.statements.push_back(Statement::assume(hyp, at));
    step.statements.push_back(Statement::stipulate(renameExpr(w.expr, step.rho), withReason(at, "condition of While")));
    for (auto& q : expand(w.body, {std::move(step)})) {
      std::vector<Sequent> goal;
      goal.push_back(goalSequent(renameExpr(w.invariant, q.rho), provOf(locOf(at), "maintaining clause")));
      if (measure) {
        const Symbol* lt = ctx_->lookup("<");
        if (lt == nullptr) throw Error(ErrorKind::Resolution, "decreasing clause needs '<' (uses Integer_Theory)", locOf(at));
        Expr dec = Expr::binary("<", lt->sort, renameExpr(measure, q.rho), entry, Sort::boolean());
        goal.push_back(goalSequent(dec, provOf(locOf(at), "decreasing clause")));
      }
      inductive_.push_back(close(q, std::move(goal), ""));
    }

    // Continue after the loop from an arbitrary state where it exits.
    Path after = std::move(base);
    after.rho = freshen(p.rho, changing);
    after.statements.push_back(Statement::assume(renameExpr(w.invariant, after.rho), at));
    after.statements.push_back(Statement::stipulate(Expr::negation(renameExpr(w.expr, after.rho)),
                                                    withReason(at, "condition of While (negated)")));
    return after;
  }

  static Provenance withReason(Provenance p, std::string reason) {
    p.reason = std::move(reason);
    return p;
  }

  static Sequent goalSequent(const Expr& e, Provenance p) {
    Sequent s;
    s.addSuccedent(stripParen(e));
    s.provenance = std::move(p);
    return s;
  }

  std::vector<Sequent> ensuresGoal(const Substitution& rho) {
    std::vector<Sequent> out;
    Substitution alters;
    for (const auto& p : proc_.params) {
      if (p.mode == ParamMode::Alters) {
        const Expr v = Expr::variable(p.name, p.sort);
        alters[VarKey::of(v)] = freshVariable(v);
      }
    }
    auto finalForm = [&](const Expr& e) { return substituteAll(substituteAll(e, alters), rho); };
    if (op_ != nullptr) {
      const SourceLocation where = op_->ensuresLoc.line > 0 ? op_->ensuresLoc : op_->loc;
      for (const auto& c : splitConjuncts(op_->postcondition)) {
        if (stripParen(c).isTrue()) continue;
        out.push_back(goalSequent(finalForm(c), provOf(where, "ensures clause of " + proc_.name)));
      }
    }
    for (const auto& p : proc_.params) {
      if (p.mode != ParamMode::Restores) continue;
      const Expr eq = equality(Expr::variable(p.name, p.sort), incomingOf(p.name, p.sort));
      out.push_back(goalSequent(finalForm(eq), provOf(p.loc, "restores parameter " + p.name)));
    }
    if (out.empty()) {
      const SourceLocation where = op_ != nullptr ? op_->loc : proc_.loc;
      out.push_back(goalSequent(Expr::boolean(true), provOf(where, "ensures clause of " + proc_.name)));
    }
    return out;
  }

  AssertiveBlock close(const Path& p, std::vector<Sequent> goal, const std::string& kind) {
    AssertiveBlock b;
    if (!kind.empty()) b.label = proc_.name + " / path " + std::to_string(++pathCount_) + " / " + kind;
    b.statements = p.statements;
    b.context = ctx_;
    for (auto& s : goal) b.addSequent(std::move(s));
    b.finalConfirm = reduceSequents(b.finalConfirm, b.nextSequentId);
    return b;
  }

  const ProcedureDecl& proc_;
  const SourceModule& m_;
  const ModuleLoader& loader_;
  std::shared_ptr<Context> ctx_;
  const OperationDecl* op_ = nullptr;
  bool intSort_ = false;
  int pathCount_ = 0;
  std::vector<AssertiveBlock> inductive_;
};

}  // namespace

Statement renameStatement(const Statement& st, const Substitution& rho) {
  if (rho.empty()) return st;
  Statement out = st;
  out.expr = renameExpr(st.expr, rho);
  if (st.target) {
    out.target = renameExpr(st.target, rho);
    if (out.target.kind() != Expr::Kind::Variable) {
      throw Error(ErrorKind::Substitution, "renaming turned an assignment target into a non-variable");
    }
  }
  for (auto& a : out.args) a = renameExpr(a, rho);
  out.thenBody = renameAll(st.thenBody, rho);
  out.elseBody = renameAll(st.elseBody, rho);
  out.invariant = renameExpr(st.invariant, rho);
  out.decreasing = renameExpr(st.decreasing, rho);
  for (auto& c : out.changing) c = renameExpr(c, rho);
  out.body = renameAll(st.body, rho);
  for (auto& r : out.remembered) r = renameExpr(r, rho);
  return out;
}

std::vector<Expr> modifiedVariables(const std::vector<Statement>& body, const SourceModule& m,
                                    const ModuleLoader& loader) {
  std::vector<Expr> out;
  collectModified(body, m, loader, out);
  return out;
}

std::vector<AssertiveBlock> buildProcedure(const ProcedureDecl& proc, const SourceModule& m,
                                           const ModuleLoader& loader) {
  return ProcedureBuilder(proc, m, loader).run();
}

AssertiveBlock buildAssertiveCode(const AssertiveCodeDecl& decl) {
  AssertiveBlock b;
  b.label = decl.name;
  b.statements = decl.statements;
  b.context = decl.context;
  return b;
}

std::vector<AssertiveBlock> buildModule(const SourceModule& m, const ModuleLoader& loader) {
  struct Item {
    int line;
    const AssertiveCodeDecl* code;
    const ProcedureDecl* proc;
  };
  std::vector<Item> items;
  for (const auto& a : m.assertiveCode) items.push_back({a.loc.line, &a, nullptr});
  for (const auto& p : m.procedures) items.push_back({p.loc.line, nullptr, &p});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.line < b.line; });
  std::vector<AssertiveBlock> out;
  for (const auto& it : items) {
    if (it.code) {
      out.push_back(buildAssertiveCode(*it.code));
    } else {
      for (auto& b : buildProcedure(*it.proc, m, loader)) out.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace parsivc
