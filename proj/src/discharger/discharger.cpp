#include "parsivc/discharger.hpp"

#include <map>
#include <optional>
#include <unordered_map>

#include "parsivc/ops.hpp"
#include "parsivc/printer.hpp"

namespace parsivc {

std::string_view toString(VcStatus status) {
  switch (status) {
    case VcStatus::Proved:
      return "proved";
    case VcStatus::Vacuous:
      return "vacuous";
    case VcStatus::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

using Bindings = std::map<std::string, Expr>;

bool match(const Expr& pat, const Expr& term, const RewriteCorollary& rule, const Context& ctx, Bindings& b) {
  const Expr& p = stripParen(pat);
  const Expr& t = stripParen(term);
  if (p.kind() == Expr::Kind::Variable && !p.incoming()) {
    for (const auto& binder : rule.binders) {
      if (binder.name != p.name()) continue;
      if (auto it = b.find(p.name()); it != b.end()) return equalModParen(it->second, t);
      if (!ctx.accepts(binder.sort, t.sort())) return false;
      b.emplace(p.name(), t);
      return true;
    }
  }
  if (p.kind() != t.kind()) return false;
  switch (p.kind()) {
    case Expr::Kind::Variable:
      return p.name() == t.name() && p.incoming() == t.incoming();
    case Expr::Kind::BoolLiteral:
      return p.boolValue() == t.boolValue();
    case Expr::Kind::IntLiteral:
      return p.intValue() == t.intValue();
    case Expr::Kind::Quantified:
    case Expr::Kind::Lambda:
      return equalModParen(p, t);
    case Expr::Kind::Connective:
      if (p.connectiveOp() != t.connectiveOp()) return false;
      break;
    default:
      break;
  }
  if (p.children().size() != t.children().size()) return false;
  for (std::size_t i = 0; i < p.children().size(); ++i) {
    if (!match(p.child(i), t.child(i), rule, ctx, b)) return false;
  }
  return true;
}

std::optional<Expr> foldArithmetic(const Expr& e) {
  if (e.kind() != Expr::Kind::Apply || e.args().size() != 2) return std::nullopt;
  const Expr& a = e.args()[0];
  const Expr& b = e.args()[1];
  const std::string& op = e.headName();
  if (a.kind() == Expr::Kind::IntLiteral && b.kind() == Expr::Kind::IntLiteral) {
    const std::int64_t x = a.intValue();
    const std::int64_t y = b.intValue();
    if (op == "+") return Expr::integer(x + y);
    if (op == "*") return Expr::integer(x * y);
    if (op == "-" && x >= y) return Expr::integer(x - y);
    if (op == "<=") return Expr::boolean(x <= y);
    if (op == "<") return Expr::boolean(x < y);
    if (op == "=") return Expr::boolean(x == y);
    if (op == "/=") return Expr::boolean(x != y);
  }
  if (a.kind() == Expr::Kind::BoolLiteral && b.kind() == Expr::Kind::BoolLiteral) {
    if (op == "=") return Expr::boolean(a.boolValue() == b.boolValue());
    if (op == "/=") return Expr::boolean(a.boolValue() != b.boolValue());
  }
  return std::nullopt;
}

class Normalizer {
 public:
  Normalizer(const std::vector<RewriteCorollary>& rules, const Context& ctx, std::vector<RewriteStep>* log,
             int budget)
      : rules_(rules), ctx_(ctx), log_(log), budget_(budget) {}

  Expr run(const Expr& e) {
    const Expr& s = stripParen(e);
    Expr cur = s;
    if (!s.children().empty()) {
      std::vector<Expr> kids;
      bool changed = false;
      for (const auto& c : s.children()) {
        kids.push_back(run(c));
        changed = changed || kids.back().identity() != c.identity();
      }
      if (changed) cur = s.withChildren(std::move(kids));
    }
    if (budget_ <= 0) {
      if (!warned_ && log_ && rewritable(cur)) {
        warned_ = true;
        log_->push_back({"budget exhausted", print(cur), print(cur)});
      }
      return cur;
    }
    if (auto folded = foldArithmetic(cur)) return step("arithmetic", cur, *folded);
    for (const auto& r : rules_) {
      Bindings b;
      if (!match(r.lhs, cur, r, ctx_, b)) continue;
      Substitution m;
      for (const auto& [name, value] : b) m[{name, false}] = value;
      return run(step(r.name, cur, substituteAll(r.rhs, m)));
    }
    return cur;
  }

 private:
  Expr step(const std::string& rule, const Expr& before, Expr after) {
    --budget_;
    if (log_) log_->push_back({rule, print(before), print(after)});
    return stripParen(after);
  }

  const std::vector<RewriteCorollary>& rules_;
  bool rewritable(const Expr& e) const {
    if (foldArithmetic(e)) return true;
    for (const auto& r : rules_) {
      Bindings b;
      if (match(r.lhs, e, r, ctx_, b)) return true;
    }
    return false;
  }

  const Context& ctx_;
  std::vector<RewriteStep>* log_;
  int budget_;
  bool warned_ = false;
};

/// Union-find over interned terms with congruence propagation.
class Congruence {
 public:
  int intern(const Expr& raw) {
    const Expr& e = stripParen(raw);
    if (auto it = ids_.find(e); it != ids_.end()) return it->second;
    std::vector<int> kids;
    const bool opaque = e.kind() == Expr::Kind::Quantified || e.kind() == Expr::Kind::Lambda;
    if (!opaque) {
      for (const auto& c : e.children()) kids.push_back(intern(c));
    }
    const int id = static_cast<int>(terms_.size());
    terms_.push_back(e);
    kids_.push_back(std::move(kids));
    parent_.push_back(id);
    ids_.emplace(e, id);
    return id;
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  bool same(int a, int b) { return find(a) == find(b); }

  /// Propagates congruence until nothing changes.
  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        for (std::size_t j = i + 1; j < terms_.size(); ++j) {
          if (same(static_cast<int>(i), static_cast<int>(j)) || !sameShape(i, j)) continue;
          bool congruent = true;
          for (std::size_t k = 0; k < kids_[i].size() && congruent; ++k) congruent = same(kids_[i][k], kids_[j][k]);
          if (congruent) {
            merge(static_cast<int>(i), static_cast<int>(j));
            changed = true;
          }
        }
      }
    }
  }

  std::size_t size() const { return terms_.size(); }
  const Expr& term(int id) const { return terms_[static_cast<std::size_t>(id)]; }

 private:
  bool sameShape(std::size_t i, std::size_t j) const {
    const Expr& a = terms_[i];
    const Expr& b = terms_[j];
    if (a.kind() != b.kind() || kids_[i].size() != kids_[j].size()) return false;
    switch (a.kind()) {
      case Expr::Kind::Apply:
      case Expr::Kind::Not:
      case Expr::Kind::Product:
      case Expr::Kind::ArrowCtor:
      case Expr::Kind::Conditional:
        return !kids_[i].empty() && a.sort() == b.sort();
      case Expr::Kind::Connective:
        return a.connectiveOp() == b.connectiveOp();
      default:
        return false;  // leaves are congruent only when interned as one
    }
  }

  std::unordered_map<Expr, int, ExprHash, ExprEqual> ids_;
  std::vector<Expr> terms_;
  std::vector<std::vector<int>> kids_;
  std::vector<int> parent_;
};

bool isDisequality(const Expr& e) { return e.isApplicationOf("/=") && e.args().size() == 2; }

}  // namespace

Expr normalize(const Expr& e, const std::vector<RewriteCorollary>& rules, const Context& ctx,
               std::vector<RewriteStep>* log, int budget) {
  return Normalizer(rules, ctx, log, budget).run(e);
}

DischargeResult discharge(const Sequent& s, const std::vector<RewriteCorollary>& rules, const Context& ctx) {
  DischargeResult out;
  Sequent& n = out.normalized;
  n.id = s.id;
  n.provenance = s.provenance;
  n.folded = s.folded;
  for (const auto& a : s.antecedents) n.addAntecedent(normalize(a, rules, ctx, &out.log));
  for (const auto& d : s.succedents) n.addSuccedent(normalize(d, rules, ctx, &out.log));

  Congruence cc;
  const int tru = cc.intern(Expr::boolean(true));
  const int fal = cc.intern(Expr::boolean(false));
  for (const auto& a : n.antecedents) {
    cc.merge(cc.intern(a), tru);
    if (a.kind() == Expr::Kind::Not) cc.merge(cc.intern(a.child(0)), fal);
    if (a.isEquality()) cc.merge(cc.intern(a.args()[0]), cc.intern(a.args()[1]));
  }
  for (const auto& d : n.succedents) {
    cc.intern(d);
    if (d.kind() == Expr::Kind::Not) cc.intern(d.child(0));
  }
  // String lengths that normalize to literals, so that equal strings of
  // different length are caught.
  const Symbol* len = ctx.lookup("|_|");
  std::vector<std::pair<int, std::int64_t>> lengths;
  if (len != nullptr && len->sort.kind() == Sort::Kind::Arrow && len->sort.arity() == 1) {
    const std::size_t count = cc.size();
    for (std::size_t i = 0; i < count; ++i) {
      const Expr t = cc.term(static_cast<int>(i));
      if (!ctx.accepts(len->sort.components()[0], t.sort()) || t.sort().isEntity() ||
          !(t.sort() == Sort::named("SStr"))) {
        continue;
      }
      Expr l = normalize(Expr::apply(Expr::variable("|_|", len->sort), {t}, len->sort.codomain()), rules, ctx);
      if (l.kind() == Expr::Kind::IntLiteral) lengths.emplace_back(static_cast<int>(i), l.intValue());
    }
  }
  cc.close();

  auto vacuous = [&](std::string why) {
    out.status = VcStatus::Vacuous;
    out.reason = "antecedents derive false (" + why + ")";
    out.normalized.vacuous = true;
    return out;
  };
  if (cc.same(tru, fal)) return vacuous("true equals false");
  std::map<int, std::int64_t> literalOf;
  for (std::size_t i = 0; i < cc.size(); ++i) {
    const Expr& t = cc.term(static_cast<int>(i));
    if (t.kind() != Expr::Kind::IntLiteral) continue;
    const int root = cc.find(static_cast<int>(i));
    auto [it, fresh] = literalOf.emplace(root, t.intValue());
    if (!fresh && it->second != t.intValue()) return vacuous("distinct integers are equal");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (std::size_t j = i + 1; j < lengths.size(); ++j) {
      if (lengths[i].second != lengths[j].second && cc.same(lengths[i].first, lengths[j].first)) {
        return vacuous("strings of different length are equal");
      }
    }
  }
  for (const auto& a : n.antecedents) {
    if (isDisequality(a) && cc.same(cc.intern(a.args()[0]), cc.intern(a.args()[1]))) {
      return vacuous("a disequality between equal terms");
    }
  }

  auto proved = [&](std::string why) {
    out.status = VcStatus::Proved;
    out.reason = std::move(why);
    return out;
  };
  for (const auto& d : n.succedents) {
    if (d.isTrue()) return proved("true in succedent");
  }
  for (const auto& d : n.succedents) {
    if (n.hasAntecedent(d)) return proved("antecedent matches succedent");
  }
  for (const auto& d : n.succedents) {
    if (d.isEquality() && equalModParen(d.args()[0], d.args()[1])) return proved("reflexive equality in succedent");
  }
  for (const auto& d : n.succedents) {
    if (d.isEquality() && cc.same(cc.intern(d.args()[0]), cc.intern(d.args()[1]))) {
      return proved("congruence closure");
    }
    if (cc.same(cc.intern(d), tru)) return proved("congruence closure");
    if (d.kind() == Expr::Kind::Not && cc.same(cc.intern(d.child(0)), fal)) return proved("congruence closure");
    if (isDisequality(d)) {
      auto l = literalOf.find(cc.find(cc.intern(d.args()[0])));
      auto r = literalOf.find(cc.find(cc.intern(d.args()[1])));
      if (l != literalOf.end() && r != literalOf.end() && l->second != r->second) {
        return proved("congruence closure");
      }
    }
  }
  out.status = VcStatus::Unknown;
  out.reason = "not established";
  return out;
}

}  // namespace parsivc
