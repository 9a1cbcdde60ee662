#include "doctest.h"
#include "support.hpp"

using namespace parsivc;
using namespace parsivc::testing;

namespace {

std::string theory(const std::string& name, const std::string& vars, const std::string& body) {
  return "Theory T_" + name + ";\n  uses String_Theory;\n  Definition p : Z -> B;\n  Definition q : Z -> B;\n" +
         "  Definition r : B;\n  Assertive_Code " + name + "(" + vars + ");\n" + body + "\n  end " + name +
         ";\nend T_" + name + ";\n";
}

struct Fixture {
  Loaded l;
  AssertiveBlock block;

  explicit Fixture(const std::string& text) : l(loadText(text)), block(buildAssertiveCode(l.module->assertiveCode[0])) {}
  const Context& ctx() const { return *block.context; }
  Sequent seq(const std::string& text) const { return parseSequent(text, ctx()); }
  Expr expr(const std::string& text) const { return parseExpression(text, ctx()); }
};

Fixture fixture(const std::string& vars, const std::string& body) { return Fixture(theory("Blk", vars, body)); }

std::vector<std::string> finalSequents(const AssertiveBlock& b) {
  std::vector<std::string> out;
  for (const auto& s : b.finalConfirm) out.push_back(print(s));
  return out;
}

std::vector<std::string> step(Fixture& f, const EngineConfig& cfg = {}) {
  DerivationTrace t;
  eliminateNext(f.block, cfg, t);
  return finalSequents(f.block);
}

constexpr const char* kRunning =
    "    Assume |S| <= 2 and |T| <= 2 and S = Lambda and T = <1> o <2>;\n"
    "    Confirm (S = Lambda or T = Lambda) and (|S| + |T| = 2);";

}  // namespace

TEST_CASE("running example: Confirm then reductions split the goal") {
  Fixture f = fixture("S, T : SStr", kRunning);
  CHECK(step(f) == std::vector<std::string>{"{} |- {S = Lambda, T = Lambda}", "{} |- {|S| + |T| = 2}"});
  CHECK(step(f) == std::vector<std::string>{
                       "{|S| <= 2, |T| <= 2, S = Lambda, T = <1> o <2>} |- {S = Lambda, T = Lambda}",
                       "{|S| <= 2, |T| <= 2, S = Lambda, T = <1> o <2>} |- {|S| + |T| = 2}"});
  CHECK_THROWS_WITH_AS(step(f), "no statement to eliminate", Error);
}

TEST_CASE("running example end to end") {
  Fixture f = fixture("S, T : SStr", kRunning);
  const Derivation d = runDerivation(f.block, {});
  CHECK(d.trace.ruleNames() == std::vector<std::string>{"Confirm", "AndRight", "OrRight", "ParsimoniousAssume",
                                                         "ApplyEqLeft", "ApplyEqLeft", "ApplyEqLeft", "ApplyEqLeft"});
  CHECK(finalSequents(d.final) ==
        std::vector<std::string>{"{|Lambda| <= 2, |<1> o <2>| <= 2} |- {Lambda = Lambda, <1> o <2> = Lambda}",
                                 "{|Lambda| <= 2, |<1> o <2>| <= 2} |- {|Lambda| + |<1> o <2>| = 2}"});
  REQUIRE(d.vcs.size() == 2);
  CHECK(d.vcs[0].id == "Blk#1");
  CHECK(d.vcs[1].id == "Blk#2");
}

TEST_CASE("Confirm adds a single-goal sequent") {
  Fixture f = fixture("x : Z", "    Confirm true;");
  CHECK(step(f) == std::vector<std::string>{"{} |- {true}"});
  CHECK(f.block.finalConfirm[0].provenance.line == 7);
  const Derivation d = runDerivation(fixture("x : Z", "    Confirm true;").block, {});
  REQUIRE(d.vcs.size() == 1);
  CHECK(print(d.vcs[0].sequent) == "{} |- {true}");
}

TEST_CASE("Assume true changes nothing in parsimonious mode") {
  Fixture f = fixture("x : Z", "    Assume true;\n    Confirm p(x);");
  step(f);
  CHECK(step(f) == std::vector<std::string>{"{} |- {p(x)}"});
}

TEST_CASE("sigmaSelect follows the free-variable closure") {
  Fixture f = fixture("a, b, c, s, x, y : Z", "");
  SUBCASE("closure example") {
    const auto out = sigmaSelect({f.seq("{} |- {p(b)}")}, f.expr("p(c) and c = b and s = x"), f.ctx());
    REQUIRE(out.size() == 1);
    CHECK(print(out[0]) == "{p(c), c = b} |- {p(b)}");
  }
  SUBCASE("empty sequent set") { CHECK(sigmaSelect({}, f.expr("p(c)"), f.ctx()).empty()); }
  SUBCASE("only the sequent sharing a variable gains the conjunct") {
    const auto out = sigmaSelect({f.seq("{} |- {p(a)}"), f.seq("{} |- {p(y)}")}, f.expr("q(a)"), f.ctx());
    CHECK(print(out[0]) == "{q(a)} |- {p(a)}");
    CHECK(print(out[1]) == "{} |- {p(y)}");
  }
  SUBCASE("false shares no variable and is dropped") {
    const auto out = sigmaSelect({f.seq("{} |- {p(a)}")}, f.expr("false"), f.ctx());
    CHECK(print(out[0]) == "{} |- {p(a)}");
  }
}

TEST_CASE("conservative Assume keeps every conjunct") {
  const std::string body = "    Assume p(c) and c = b and s = x;\n    Confirm p(b);";
  EngineConfig cons;
  cons.mode = Mode::Conservative;
  Fixture f = fixture("c, b, s, x : Z", body);
  step(f, cons);
  CHECK(step(f, cons) == std::vector<std::string>{"{p(c), c = b, s = x} |- {p(b)}"});
  Fixture g = fixture("c, b, s, x : Z", body);
  step(g);
  CHECK(step(g) == std::vector<std::string>{"{p(c), c = b} |- {p(b)}"});
}

TEST_CASE("Stipulate adds its conjuncts regardless of overlap") {
  Fixture f = fixture("x, y : Z", "    Stipulate y = 1 and true;\n    Confirm p(x);");
  step(f);
  CHECK(step(f) == std::vector<std::string>{"{y = 1, true} |- {p(x)}"});
  Fixture g = fixture("x : Z", "    Stipulate p(x);");
  CHECK(step(g).empty());
}

TEST_CASE("assignment substitutes backward") {
  Fixture f = fixture("x : Z", "    x := 1;\n    Confirm x = 1;");
  step(f);
  CHECK(step(f) == std::vector<std::string>{"{} |- {1 = 1}"});
  Fixture g = fixture("x, y : Z", "    x := y;\n    Confirm y = x;");
  step(g);
  CHECK(step(g) == std::vector<std::string>{"{} |- {y = y}"});
  Fixture h = fixture("x : Z", "    x := x + 1;\n    Assume x > 0;\n    Confirm x >= 1;");
  step(h);
  step(h);
  CHECK(step(h) == std::vector<std::string>{"{0 < x + 1} |- {1 <= x + 1}"});
}

TEST_CASE("sequent reductions") {
  Fixture f = fixture("a, b : Z", "");
  int next = 10;
  auto reduce = [&](const std::string& text) {
    std::vector<std::string> out;
    for (const auto& s : reduceSequent(f.seq(text), next)) out.push_back(print(s));
    return out;
  };
  CHECK(reduce("{not r} |- {}") == std::vector<std::string>{"{} |- {r}"});
  CHECK(reduce("{} |- {not r}") == std::vector<std::string>{"{r} |- {}"});
  CHECK(reduce("{p(a) or q(a)} |- {r}") == std::vector<std::string>{"{p(a)} |- {r}", "{q(a)} |- {r}"});
  CHECK(reduce("{p(a) and q(a)} |- {r}") == std::vector<std::string>{"{p(a), q(a)} |- {r}"});
  CHECK(reduce("{} |- {p(a) implies q(a)}") == std::vector<std::string>{"{p(a)} |- {q(a)}"});
  CHECK(reduce("{p(a) implies q(a)} |- {r}") == std::vector<std::string>{"{} |- {r, p(a)}", "{q(a)} |- {r}"});
  CHECK(reduce("{} |- {p(a) iff q(a)}") == std::vector<std::string>{"{p(a)} |- {q(a)}", "{q(a)} |- {p(a)}"});
  CHECK(reduce("{p(a) iff q(a)} |- {r}") == std::vector<std::string>{"{p(a), q(a)} |- {r}", "{} |- {r, p(a), q(a)}"});
  CHECK(reduce("{} |- {(forall x : Z, p(x)) and r}") ==
        std::vector<std::string>{"{} |- {forall x : Z, p(x)}", "{} |- {r}"});
  CHECK(reductionRule(f.expr("forall x : Z, p(x) and q(x)"), Side::Antecedent).empty());
}

TEST_CASE("branching keeps the original id first and the new one right after") {
  Fixture f = fixture("a : Z", "");
  std::vector<Sequent> psi = {f.seq("{} |- {p(a) and q(a)}"), f.seq("{} |- {r}")};
  psi[0].id = 1;
  psi[1].id = 2;
  int next = 3;
  const auto out = reduceSequents(psi, next);
  REQUIRE(out.size() == 3);
  CHECK(out[0].id == 1);
  CHECK(out[1].id == 3);
  CHECK(out[2].id == 2);
  CHECK(next == 4);
}

TEST_CASE("ApplyEqLeft folds eligible equalities") {
  Fixture f = fixture("S, T : SStr; x : Z", "");
  const EngineConfig cfg;
  CHECK(print(applyEqLeft(f.seq("{|S| <= 2, |T| <= 2, S = Lambda, T = <1> o <2>} |- {S = Lambda, T = Lambda}"),
                          f.ctx(), cfg)) == "{|Lambda| <= 2, |<1> o <2>| <= 2} |- {Lambda = Lambda, <1> o <2> = Lambda}");
  CHECK(print(applyEqLeft(f.seq("{x = 0} |- {x = 0}"), f.ctx(), cfg)) == "{} |- {0 = 0}");
  CHECK(print(applyEqLeft(f.seq("{x = x + 1} |- {p(x)}"), f.ctx(), cfg)) == "{x = x + 1} |- {p(x)}");
  CHECK(print(applyEqLeft(f.seq("{x = 1} |- {p(2)}"), f.ctx(), cfg)) == "{x = 1} |- {p(2)}");
  EngineConfig none;
  none.maxEqFoldPasses = 0;
  CHECK(print(applyEqLeft(f.seq("{x = 0} |- {x = 0}"), f.ctx(), none)) == "{x = 0} |- {x = 0}");
}

TEST_CASE("stale or inapplicable targets are rejected") {
  Fixture f = fixture("S, T : SStr", kRunning);
  const EngineConfig cfg;
  RuleTarget wrong{RuleTarget::Kind::Statement, "ParsimoniousAssume", 0, Side::Antecedent, 0};
  CHECK_THROWS_AS(applyRule(f.block, wrong, cfg), Error);
  const auto rules = applicableRules(f.block, cfg);
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].rule == "Confirm");
  applyRule(f.block, rules[0], cfg);
  CHECK_THROWS_AS(applyRule(f.block, rules[0], cfg), Error);
  const auto now = applicableRules(f.block, cfg);
  REQUIRE_FALSE(now.empty());
  CHECK((now[0].kind == RuleTarget::Kind::Reduction));
  CHECK(now[0].rule == "AndRight");
}

TEST_CASE("replay reproduces every corpus derivation and notices tampering") {
  for (const auto& file : allCorpus()) {
    Loaded l = loadCorpus(file);
    for (const auto& b : l.blocks()) {
      for (Mode mode : {Mode::Parsimonious, Mode::Conservative}) {
        EngineConfig cfg;
        cfg.mode = mode;
        const Derivation d = runDerivation(b, cfg);
        CAPTURE(b.label);
        CHECK(print(replay(d.initial, d.trace, cfg)) == print(d.final));
        CHECK(print(runDerivation(b, cfg).final) == print(d.final));
      }
    }
  }
  Fixture f = fixture("S, T : SStr", kRunning);
  Derivation d = runDerivation(f.block, {});
  d.trace.steps[3].after.finalConfirm.pop_back();
  CHECK_THROWS_AS(replay(d.initial, d.trace, {}), Error);
}

TEST_CASE("Stipulate conjuncts reach every sequent and σ additions are justified") {
  for (const auto& file : allCorpus()) {
    Loaded l = loadCorpus(file);
    for (const auto& b : l.blocks()) {
      const Derivation d = runDerivation(b, {});
      for (const auto& s : d.trace.steps) {
        if (s.target.kind != RuleTarget::Kind::Statement) continue;
        const Statement& st = s.before.statements.back();
        if (st.kind != Statement::Kind::Assume && st.kind != Statement::Kind::Stipulate) continue;
        const auto conj = splitConjuncts(st.expr);
        CAPTURE(b.label);
        CAPTURE(print(st));
        REQUIRE(s.before.finalConfirm.size() == s.after.finalConfirm.size());
        for (std::size_t i = 0; i < s.after.finalConfirm.size(); ++i) {
          const Sequent& before = s.before.finalConfirm[i];
          const Sequent& after = s.after.finalConfirm[i];
          const VarSet vars = sfvSequent(*s.before.context, before);
          for (const auto& c : conj) {
            if (before.hasAntecedent(c)) continue;
            if (st.kind == Statement::Kind::Stipulate) CHECK(after.hasAntecedent(c));
            if (st.kind == Statement::Kind::Assume) {
              CHECK(after.hasAntecedent(c) == intersects(fvc(*s.before.context, c, conj), vars));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("Γ before equality folding is a subset of the conservative one") {
  auto preFold = [](const Derivation& d) {
    for (const auto& s : d.trace.steps) {
      if (s.target.kind == RuleTarget::Kind::EqFold) return s.before.finalConfirm;
    }
    return d.final.finalConfirm;
  };
  EngineConfig cons;
  cons.mode = Mode::Conservative;
  for (const auto& file : allCorpus()) {
    Loaded l = loadCorpus(file);
    for (const auto& b : l.blocks()) {
      const auto pars = preFold(runDerivation(b, {}));
      const auto full = preFold(runDerivation(b, cons));
      CAPTURE(b.label);
      REQUIRE(pars.size() == full.size());
      for (std::size_t i = 0; i < pars.size(); ++i) {
        CHECK(pars[i].id == full[i].id);
        CHECK(printed(pars[i].succedents) == printed(full[i].succedents));
        for (const auto& a : pars[i].antecedents) CHECK(full[i].hasAntecedent(a));
      }
    }
  }
}

TEST_CASE("mode names") {
  CHECK((parseMode("conservative") == Mode::Conservative));
  CHECK((parseMode("parsimonious") == Mode::Parsimonious));
  CHECK_FALSE(parseMode("eager").has_value());
  CHECK((toString(Mode::Conservative) == "conservative"));
}
