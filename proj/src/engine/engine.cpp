#include "parsivc/engine.hpp"

#include <algorithm>
#include <sstream>

#include "parsivc/error.hpp"
#include "parsivc/ops.hpp"
#include "parsivc/printer.hpp"

namespace parsivc {

std::string_view toString(Mode mode) { return mode == Mode::Parsimonious ? "parsimonious" : "conservative"; }

std::optional<Mode> parseMode(std::string_view text) {
  if (text == "parsimonious") return Mode::Parsimonious;
  if (text == "conservative") return Mode::Conservative;
  return std::nullopt;
}

std::string_view toString(RuleTarget::Kind kind) {
  switch (kind) {
    case RuleTarget::Kind::Statement:
      return "statement";
    case RuleTarget::Kind::Reduction:
      return "reduction";
    case RuleTarget::Kind::EqFold:
      return "eqfold";
  }
  return "?";
}

std::string RuleTarget::describe() const {
  if (kind == Kind::Statement) return rule + " on the last statement";
  std::ostringstream os;
  os << rule << " on sequent " << sequentId << ' ' << (side == Side::Antecedent ? "antecedent" : "succedent") << '['
     << index << ']';
  return os.str();
}

std::vector<std::string> DerivationTrace::ruleNames() const {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.target.rule);
  return out;
}

namespace {

bool contains(const std::vector<Expr>& xs, const Expr& e) {
  return std::any_of(xs.begin(), xs.end(), [&](const Expr& x) { return equalModParen(x, e); });
}

// Inserts at `pos` unless an equal member exists. Returns the position after
// the inserted element (or `pos` when skipped).
std::size_t insertMember(std::vector<Expr>& xs, std::size_t pos, const Expr& e) {
  if (contains(xs, e)) return pos;
  pos = std::min(pos, xs.size());
  xs.insert(xs.begin() + static_cast<std::ptrdiff_t>(pos), stripParen(e));
  return pos + 1;
}

void appendMember(std::vector<Expr>& xs, const Expr& e) { insertMember(xs, xs.size(), e); }

std::vector<Expr>& sideOf(Sequent& s, Side side) { return side == Side::Antecedent ? s.antecedents : s.succedents; }
const std::vector<Expr>& sideOf(const Sequent& s, Side side) {
  return side == Side::Antecedent ? s.antecedents : s.succedents;
}

struct Reduced {
  std::string rule;
  std::vector<Sequent> parts;
};

Reduced reduceAt(const Sequent& s, Side side, int index, int& nextId) {
  const auto& members = sideOf(s, side);
  const Expr f = stripParen(members.at(static_cast<std::size_t>(index)));
  const std::size_t pos = static_cast<std::size_t>(index);
  Sequent base = s;
  auto& own = sideOf(base, side);
  own.erase(own.begin() + index);
  Reduced out;
  out.rule = reductionRule(f, side);
  auto branch = [&](Sequent q) {
    if (!out.parts.empty()) q.id = nextId++;
    out.parts.push_back(std::move(q));
  };
  const Expr* l = f.kind() == Expr::Kind::Connective ? &f.child(0) : nullptr;
  const Expr* r = f.kind() == Expr::Kind::Connective ? &f.child(1) : nullptr;
  if (side == Side::Antecedent) {
    if (f.kind() == Expr::Kind::Not) {
      appendMember(base.succedents, f.child(0));
      branch(base);
      return out;
    }
    switch (f.connectiveOp()) {
      case Connective::And: {
        std::size_t p = insertMember(base.antecedents, pos, *l);
        insertMember(base.antecedents, p, *r);
        branch(base);
        break;
      }
      case Connective::Or: {
        Sequent a = base, b = base;
        insertMember(a.antecedents, pos, *l);
        insertMember(b.antecedents, pos, *r);
        branch(a);
        branch(b);
        break;
      }
      case Connective::Implies: {
        Sequent a = base, b = base;
        appendMember(a.succedents, *l);
        insertMember(b.antecedents, pos, *r);
        branch(a);
        branch(b);
        break;
      }
      case Connective::Iff: {
        Sequent a = base, b = base;
        std::size_t p = insertMember(a.antecedents, pos, *l);
        insertMember(a.antecedents, p, *r);
        appendMember(b.succedents, *l);
        appendMember(b.succedents, *r);
        branch(a);
        branch(b);
        break;
      }
    }
    return out;
  }
  if (f.kind() == Expr::Kind::Not) {
    appendMember(base.antecedents, f.child(0));
    branch(base);
    return out;
  }
  switch (f.connectiveOp()) {
    case Connective::And: {
      Sequent a = base, b = base;
      insertMember(a.succedents, pos, *l);
      insertMember(b.succedents, pos, *r);
      branch(a);
      branch(b);
      break;
    }
    case Connective::Or: {
      std::size_t p = insertMember(base.succedents, pos, *l);
      insertMember(base.succedents, p, *r);
      branch(base);
      break;
    }
    case Connective::Implies:
      appendMember(base.antecedents, *l);
      insertMember(base.succedents, pos, *r);
      branch(base);
      break;
    case Connective::Iff: {
      Sequent a = base, b = base;
      appendMember(a.antecedents, *l);
      insertMember(a.succedents, pos, *r);
      appendMember(b.antecedents, *r);
      insertMember(b.succedents, pos, *l);
      branch(a);
      branch(b);
      break;
    }
  }
  return out;
}

std::optional<std::pair<Side, int>> firstReducible(const Sequent& s) {
  for (Side side : {Side::Antecedent, Side::Succedent}) {
    const auto& xs = sideOf(s, side);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!reductionRule(xs[i], side).empty()) return std::make_pair(side, static_cast<int>(i));
    }
  }
  return std::nullopt;
}

Sequent substituteSequent(const Sequent& s, const Substitution& m) {
  Sequent out = s;
  out.antecedents.clear();
  out.succedents.clear();
  for (const auto& a : s.antecedents) out.addAntecedent(substituteAll(a, m));
  for (const auto& d : s.succedents) out.addSuccedent(substituteAll(d, m));
  return out;
}

void substituteBlock(AssertiveBlock& b, const Substitution& m) {
  for (auto& s : b.finalConfirm) s = substituteSequent(s, m);
}

std::string statementRule(const Statement& st, const EngineConfig& cfg) {
  switch (st.kind) {
    case Statement::Kind::Assume:
      return cfg.mode == Mode::Parsimonious ? "ParsimoniousAssume" : "ConservativeAssume";
    case Statement::Kind::Confirm:
      return "Confirm";
    case Statement::Kind::Stipulate:
      return "Stipulate";
    case Statement::Kind::FnAssign:
      return "FnAssign";
    case Statement::Kind::Call:
      return "Call";
    case Statement::Kind::Remember:
      return "Remember";
    case Statement::Kind::If:
    case Statement::Kind::While:
      break;
  }
  throw Error(ErrorKind::Engine, std::string("no rule for a ") + std::string(toString(st.kind)) +
                                     " statement; control flow must be lowered first");
}

void assumeRule(AssertiveBlock& b, const Expr& phi, const EngineConfig& cfg) {
  if (cfg.mode == Mode::Parsimonious) {
    b.finalConfirm = sigmaSelect(b.finalConfirm, phi, *b.context);
    return;
  }
  const auto conjuncts = splitConjuncts(phi);
  for (auto& s : b.finalConfirm) {
    for (const auto& c : conjuncts) s.addAntecedent(stripParen(c));
  }
}

void stipulateRule(AssertiveBlock& b, const Expr& phi) {
  const auto conjuncts = splitConjuncts(phi);
  for (auto& s : b.finalConfirm) {
    for (const auto& c : conjuncts) s.addAntecedent(stripParen(c));
  }
}

void callRule(AssertiveBlock& b, const Statement& call) {
  if (!call.spec) throw Error(ErrorKind::Engine, "call to " + call.callee + " has no specification attached");
  const CallSpec& spec = *call.spec;
  if (spec.formals.size() != call.args.size()) {
    throw Error(ErrorKind::Engine, "call to " + call.callee + " has the wrong number of arguments");
  }
  auto layer = std::make_shared<Context>(b.context);
  Substitution pre;
  Substitution post;
  Substitution rename;
  std::vector<Expr> fresh(spec.formals.size());
  std::set<std::string> taken;
  for (std::size_t i = 0; i < spec.formals.size(); ++i) {
    const FormalParam& f = spec.formals[i];
    const Expr& arg = call.args[i];
    pre[{f.name, false}] = arg;
    pre[{f.name, true}] = arg;
    post[{f.name, true}] = arg;
    if (f.mode == ParamMode::Evaluates) {
      post[{f.name, false}] = arg;
      continue;
    }
    if (arg.kind() != Expr::Kind::Variable || arg.incoming()) {
      throw Error(ErrorKind::Engine, "argument for " + std::string(toString(f.mode)) + " parameter " + f.name +
                                         " of " + call.callee + " must be a variable");
    }
    const std::string name = freshName(*layer, arg.name(), taken);
    taken.insert(name);
    layer->defineSpecVariable(name, arg.sort(), "call " + call.callee);
    fresh[i] = Expr::variable(name, arg.sort());
    post[{f.name, false}] = fresh[i];
    rename[VarKey::of(arg)] = fresh[i];
  }
  b.context = layer;
  substituteBlock(b, rename);

  std::vector<Expr> assumed;
  for (const auto& c : spec.postconditions) assumed.push_back(substituteAll(c, post));
  for (std::size_t i = 0; i < spec.formals.size(); ++i) {
    const ParamMode m = spec.formals[i].mode;
    if (i < spec.constraints.size() && spec.constraints[i] && (m == ParamMode::Updates || m == ParamMode::Alters)) {
      assumed.push_back(substituteAll(spec.constraints[i], {{{spec.formals[i].name, false}, fresh[i]}}));
    }
  }
  std::vector<Statement> replacement;
  if (!call.skipPrecondition) {
    Provenance p = call.provenance;
    p.reason = "requires of " + call.callee;
    replacement.push_back(Statement::confirm(substituteAll(spec.precondition, pre), p));
  }
  replacement.push_back(Statement::assume(conjoin(assumed), call.provenance));
  b.statements.pop_back();
  b.statements.insert(b.statements.end(), replacement.begin(), replacement.end());
}

void applyStatementRule(AssertiveBlock& b, const EngineConfig& cfg) {
  const Statement st = b.statements.back();
  if (st.kind == Statement::Kind::Call) {
    callRule(b, st);
    return;
  }
  b.statements.pop_back();
  switch (st.kind) {
    case Statement::Kind::Confirm: {
      Sequent s;
      s.provenance = st.provenance;
      if (s.provenance.reason.empty()) s.provenance.reason = "Confirm";
      s.addSuccedent(stripParen(st.expr));
      b.addSequent(std::move(s));
      break;
    }
    case Statement::Kind::Assume:
      assumeRule(b, st.expr, cfg);
      break;
    case Statement::Kind::Stipulate:
      stipulateRule(b, st.expr);
      break;
    case Statement::Kind::FnAssign:
      substituteBlock(b, {{VarKey::of(st.target), st.expr}});
      break;
    case Statement::Kind::Remember: {
      Substitution m;
      for (const auto& v : st.remembered) m[VarKey::of(v)] = Expr::variable(v.name(), v.sort(), true);
      substituteBlock(b, m);
      break;
    }
    default:
      throw Error(ErrorKind::Engine, "unexpected statement kind");
  }
}

std::size_t indexOfSequent(const AssertiveBlock& b, int id) {
  for (std::size_t i = 0; i < b.finalConfirm.size(); ++i) {
    if (b.finalConfirm[i].id == id) return i;
  }
  throw Error(ErrorKind::Engine, "no sequent with id " + std::to_string(id));
}

TraceStep applyUnchecked(AssertiveBlock& b, const RuleTarget& t, const EngineConfig& cfg) {
  TraceStep step;
  step.target = t;
  step.before = b;
  switch (t.kind) {
    case RuleTarget::Kind::Statement:
      step.subject = print(b.statements.back());
      applyStatementRule(b, cfg);
      break;
    case RuleTarget::Kind::Reduction: {
      const std::size_t at = indexOfSequent(b, t.sequentId);
      step.subject = print(sideOf(b.finalConfirm[at], t.side).at(static_cast<std::size_t>(t.index)));
      Reduced r = reduceAt(b.finalConfirm[at], t.side, t.index, b.nextSequentId);
      b.finalConfirm.erase(b.finalConfirm.begin() + static_cast<std::ptrdiff_t>(at));
      b.finalConfirm.insert(b.finalConfirm.begin() + static_cast<std::ptrdiff_t>(at), r.parts.begin(), r.parts.end());
      break;
    }
    case RuleTarget::Kind::EqFold: {
      const std::size_t at = indexOfSequent(b, t.sequentId);
      step.subject = print(b.finalConfirm[at].antecedents.at(static_cast<std::size_t>(t.index)));
      b.finalConfirm[at] = foldEquality(b.finalConfirm[at], t.index);
      break;
    }
  }
  step.after = b;
  return step;
}

std::string fingerprint(const AssertiveBlock& b) {
  std::ostringstream os;
  os << b.label << '\n' << print(b) << '\n';
  for (const auto& s : b.finalConfirm) {
    os << s.id << ' ' << s.provenance.line << ' ' << s.provenance.reason << ' ';
    for (const auto& f : s.folded) os << f << ' ';
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string reductionRule(const Expr& member, Side side) {
  const Expr& f = stripParen(member);
  const bool left = side == Side::Antecedent;
  if (f.kind() == Expr::Kind::Not) return left ? "NotLeft" : "NotRight";
  if (f.kind() != Expr::Kind::Connective) return "";
  switch (f.connectiveOp()) {
    case Connective::And:
      return left ? "AndLeft" : "AndRight";
    case Connective::Or:
      return left ? "OrLeft" : "OrRight";
    case Connective::Implies:
      return left ? "ImpLeft" : "ImpRight";
    case Connective::Iff:
      return left ? "IffLeft" : "IffRight";
  }
  return "";
}

std::vector<Sequent> reduceSequent(const Sequent& s, int& nextId, std::vector<std::string>* rules) {
  std::vector<Sequent> work{s};
  std::size_t i = 0;
  while (i < work.size()) {
    auto target = firstReducible(work[i]);
    if (!target) {
      ++i;
      continue;
    }
    Reduced r = reduceAt(work[i], target->first, target->second, nextId);
    if (rules) rules->push_back(r.rule);
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(i));
    work.insert(work.begin() + static_cast<std::ptrdiff_t>(i), r.parts.begin(), r.parts.end());
  }
  return work;
}

std::vector<Sequent> reduceSequents(const std::vector<Sequent>& psi, int& nextId) {
  std::vector<Sequent> out;
  for (const auto& s : psi) {
    auto parts = reduceSequent(s, nextId);
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return out;
}

std::vector<int> eqFoldCandidates(const Sequent& s, const Context& ctx, const EngineConfig& cfg) {
  std::vector<int> out;
  if (static_cast<int>(s.folded.size()) >= cfg.maxEqFoldPasses) return out;
  for (std::size_t i = 0; i < s.antecedents.size(); ++i) {
    const Expr& f = stripParen(s.antecedents[i]);
    if (!f.isEquality()) continue;
    const Expr& v = stripParen(f.args()[0]);
    if (v.kind() != Expr::Kind::Variable || !ctx.isSpecVariable(v.name(), v.incoming())) continue;
    const VarKey key = VarKey::of(v);
    if (std::find(s.folded.begin(), s.folded.end(), key.str()) != s.folded.end()) continue;
    if (freeVariables(f.args()[1]).contains(key)) continue;
    bool occurs = false;
    for (std::size_t j = 0; j < s.antecedents.size() && !occurs; ++j) {
      occurs = j != i && freeVariables(s.antecedents[j]).contains(key);
    }
    for (std::size_t j = 0; j < s.succedents.size() && !occurs; ++j) {
      occurs = freeVariables(s.succedents[j]).contains(key);
    }
    if (occurs) out.push_back(static_cast<int>(i));
  }
  return out;
}

Sequent foldEquality(const Sequent& s, int index) {
  const Expr f = stripParen(s.antecedents.at(static_cast<std::size_t>(index)));
  if (!f.isEquality()) throw Error(ErrorKind::Engine, "ApplyEqLeft target is not an equality");
  const Expr& v = stripParen(f.args()[0]);
  Sequent rest = s;
  rest.antecedents.erase(rest.antecedents.begin() + index);
  Sequent out = substituteSequent(rest, {{VarKey::of(v), f.args()[1]}});
  out.folded.push_back(VarKey::of(v).str());
  return out;
}

Sequent applyEqLeft(const Sequent& s, const Context& ctx, const EngineConfig& cfg) {
  Sequent cur = s;
  while (true) {
    auto c = eqFoldCandidates(cur, ctx, cfg);
    if (c.empty()) return cur;
    cur = foldEquality(cur, c.front());
  }
}

std::vector<Sequent> sigmaSelect(const std::vector<Sequent>& psi, const Expr& phi, const Context& ctx) {
  const auto conjuncts = splitConjuncts(phi);
  std::vector<VarSet> closures;
  closures.reserve(conjuncts.size());
  for (const auto& c : conjuncts) closures.push_back(fvc(ctx, c, conjuncts));
  std::vector<Sequent> out;
  out.reserve(psi.size());
  for (const auto& s : psi) {
    const VarSet vars = sfvSequent(ctx, s);
    Sequent next = s;
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
      if (intersects(closures[i], vars)) next.addAntecedent(stripParen(conjuncts[i]));
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<RuleTarget> applicableRules(const AssertiveBlock& b, const EngineConfig& cfg) {
  std::vector<RuleTarget> out;
  for (const auto& s : b.finalConfirm) {
    for (Side side : {Side::Antecedent, Side::Succedent}) {
      const auto& xs = sideOf(s, side);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        std::string rule = reductionRule(xs[i], side);
        if (!rule.empty()) out.push_back({RuleTarget::Kind::Reduction, rule, s.id, side, static_cast<int>(i)});
      }
    }
  }
  if (!out.empty()) return out;
  if (!b.statements.empty()) {
    out.push_back({RuleTarget::Kind::Statement, statementRule(b.statements.back(), cfg), 0, Side::Antecedent, 0});
    return out;
  }
  for (const auto& s : b.finalConfirm) {
    for (int i : eqFoldCandidates(s, *b.context, cfg)) {
      out.push_back({RuleTarget::Kind::EqFold, "ApplyEqLeft", s.id, Side::Antecedent, i});
    }
  }
  return out;
}

TraceStep applyRule(AssertiveBlock& b, const RuleTarget& t, const EngineConfig& cfg) {
  const auto options = applicableRules(b, cfg);
  if (std::find(options.begin(), options.end(), t) == options.end()) {
    throw Error(ErrorKind::Engine, "rule target is stale or not applicable: " + t.describe());
  }
  return applyUnchecked(b, t, cfg);
}

void eliminateNext(AssertiveBlock& b, const EngineConfig& cfg, DerivationTrace& trace) {
  auto pending = [&] {
    auto r = applicableRules(b, cfg);
    return !r.empty() && r.front().kind == RuleTarget::Kind::Reduction ? std::optional<RuleTarget>(r.front())
                                                                       : std::nullopt;
  };
  while (auto t = pending()) trace.steps.push_back(applyUnchecked(b, *t, cfg));
  if (b.statements.empty()) throw Error(ErrorKind::Engine, "no statement to eliminate");
  RuleTarget st{RuleTarget::Kind::Statement, statementRule(b.statements.back(), cfg), 0, Side::Antecedent, 0};
  trace.steps.push_back(applyUnchecked(b, st, cfg));
  while (auto t = pending()) trace.steps.push_back(applyUnchecked(b, *t, cfg));
}

Derivation runDerivation(const AssertiveBlock& b, const EngineConfig& cfg) {
  Derivation d;
  d.initial = b;
  AssertiveBlock cur = b;
  while (true) {
    auto rules = applicableRules(cur, cfg);
    if (rules.empty()) break;
    d.trace.steps.push_back(applyUnchecked(cur, rules.front(), cfg));
  }
  d.vcs = extractVcs(cur);
  d.final = std::move(cur);
  return d;
}

AssertiveBlock replay(const AssertiveBlock& initial, const DerivationTrace& trace, const EngineConfig& cfg) {
  AssertiveBlock cur = initial;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    applyRule(cur, trace.steps[i].target, cfg);
    if (fingerprint(cur) != fingerprint(trace.steps[i].after)) {
      throw Error(ErrorKind::Engine, "replay diverged at step " + std::to_string(i + 1));
    }
  }
  return cur;
}

std::vector<Vc> extractVcs(const AssertiveBlock& b) {
  std::vector<Vc> out;
  for (std::size_t k = 0; k < b.finalConfirm.size(); ++k) {
    out.push_back({b.label + "#" + std::to_string(k + 1), b.label, b.finalConfirm[k]});
  }
  return out;
}

}  // namespace parsivc
