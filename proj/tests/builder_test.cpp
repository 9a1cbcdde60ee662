#include "doctest.h"
#include "support.hpp"

using namespace parsivc;
using namespace parsivc::testing;

namespace {

std::vector<std::string> kinds(const AssertiveBlock& b) {
  std::vector<std::string> out;
  for (const auto& s : b.statements) out.emplace_back(toString(s.kind));
  return out;
}

std::vector<std::string> goals(const AssertiveBlock& b) {
  std::vector<std::string> out;
  for (const auto& s : b.finalConfirm) out.push_back(print(s));
  return out;
}

constexpr const char* kCounter = R"(
Concept Counter;
  uses Integer_Theory;
  Oper Step(updates x : Integer; evaluates y : Integer);
    requires 0 <= y;
    ensures 0 <= x;
    If y = 0 then
      x := 1;
    else
      x := y;
    end;
  end Step;
  Oper Idle();
  end Idle;
  Oper Spin(updates x : Integer);
    While false
      changing x;
      maintaining true;
      decreasing x;
    do
    end;
  end Spin;
end Counter;
)";

}  // namespace

TEST_CASE("Do_Nothing lowers to one path that must restore S") {
  Loaded l = loadCorpus("Do_Nothing_Capability.mrsl");
  const auto blocks = l.blocks();
  REQUIRE(blocks.size() == 1);
  const AssertiveBlock& b = blocks[0];
  CHECK(b.label == "Do_Nothing / path 1 / ensures");
  CHECK(kinds(b) == std::vector<std::string>{"Assume", "Remember", "Call"});
  CHECK(printed(splitConjuncts(b.statements[0].expr)) == std::vector<std::string>{"1 <= |#S|"});
  REQUIRE(b.finalConfirm.size() == 1);
  CHECK(print(b.finalConfirm[0]) == "{} |- {S = #S}");
  CHECK(b.finalConfirm[0].provenance.reason == "restores parameter S");
}

TEST_CASE("the top Assume lists module requires, constraints, then requires") {
  Loaded l = loadCorpus("Append_Capability.mrsl");
  const auto blocks = l.blocks();
  REQUIRE_FALSE(blocks.empty());
  const Statement& top = blocks[0].statements[0];
  CHECK((top.kind == Statement::Kind::Assume));
  CHECK(printed(splitConjuncts(top.expr)) ==
        std::vector<std::string>{"0 < Max_Length", "|#P| <= Max_Length", "|#Q| <= Max_Length",
                                 "|#P| + |#Q| <= Max_Length"});
}

TEST_CASE("an If splits the path on Stipulate cond and its negation") {
  Loaded l = loadText(kCounter);
  const auto blocks = l.blocks();
  REQUIRE(blocks.size() >= 2);
  CHECK(blocks[0].label == "Step / path 1 / ensures");
  CHECK(blocks[1].label == "Step / path 2 / ensures");
  auto stipulations = [](const AssertiveBlock& b) {
    std::vector<std::string> out;
    for (const auto& s : b.statements) {
      if (s.kind == Statement::Kind::Stipulate) out.push_back(print(s.expr));
    }
    return out;
  };
  CHECK(stipulations(blocks[0]) == std::vector<std::string>{"y = 0"});
  CHECK(stipulations(blocks[1]) == std::vector<std::string>{"not (y = 0)"});
  for (const auto& b : {blocks[0], blocks[1]}) {
    CHECK(goals(b) == std::vector<std::string>{"{} |- {0 <= x}"});
    CHECK(b.finalConfirm[0].provenance.reason == "ensures clause of Step");
  }
}

TEST_CASE("an empty body with ensures true confirms true") {
  Loaded l = loadText(kCounter);
  const auto blocks = l.blocks();
  auto it = std::find_if(blocks.begin(), blocks.end(),
                         [](const AssertiveBlock& b) { return b.label.rfind("Idle", 0) == 0; });
  REQUIRE(it != blocks.end());
  CHECK(it->statements.size() == 0);
  CHECK(goals(*it) == std::vector<std::string>{"{} |- {true}"});
}

TEST_CASE("a loop yields a base case, an inductive block and a continuation") {
  Loaded l = loadText(kCounter);
  const auto blocks = l.blocks();
  std::vector<const AssertiveBlock*> spin;
  for (const auto& b : blocks) {
    if (b.label.rfind("Spin", 0) == 0) spin.push_back(&b);
  }
  REQUIRE(spin.size() == 2);
  CHECK(spin[0]->label == "Spin / path 1 / ensures");
  CHECK(spin[1]->label == "Spin / path 2 / invariant inductive step");

  const auto& main = spin[0]->statements;
  auto base = std::find_if(main.begin(), main.end(), [](const Statement& s) {
    return s.kind == Statement::Kind::Confirm && s.provenance.reason == "maintaining clause (base case)";
  });
  REQUIRE(base != main.end());
  CHECK(base->expr.isTrue());
  CHECK(print(main.back()) == "Stipulate not false;");

  const AssertiveBlock& ind = *spin[1];
  CHECK(goals(ind) == std::vector<std::string>{"{} |- {true}", "{} |- {x' < P_Val'}"});
  CHECK(ind.finalConfirm[0].provenance.reason == "maintaining clause");
  CHECK(ind.finalConfirm[1].provenance.reason == "decreasing clause");
  CHECK(print(ind.statements.back()) == "Stipulate false;");
}

TEST_CASE("changing variables are renamed apart in each loop block") {
  Loaded l = loadCorpus("Flip_Capability.mrsl");
  const auto blocks = l.blocks();
  REQUIRE(blocks.size() == 2);
  std::vector<std::string> text;
  for (const auto& s : blocks[1].statements) text.push_back(print(s));
  CHECK(text == std::vector<std::string>{"Remember S;", "Assume T = Lambda;",
                                          "Assume Reverse(T') o S' = #S and |S'| = P_Val';",
                                          "Stipulate S' /= Lambda;", "Pop(e', S');", "Push(e', T');"});
  CHECK(goals(blocks[1]) == std::vector<std::string>{"{} |- {Reverse(T') o S' = #S}", "{} |- {|S'| < P_Val'}"});
  CHECK(print(blocks[0].statements[3]) == "Assume Reverse(T'') o S'' = #S;");
}

TEST_CASE("every Stipulate comes from a control condition") {
  for (const auto& file : tableCorpus()) {
    Loaded l = loadCorpus(file);
    for (const auto& b : l.blocks()) {
      for (const auto& s : b.statements) {
        if (s.kind != Statement::Kind::Stipulate) continue;
        CAPTURE(b.label);
        CHECK(s.provenance.reason.rfind("condition of ", 0) == 0);
      }
      CHECK_FALSE(b.finalConfirm.empty());
    }
  }
}

TEST_CASE("calls carry their callee contract") {
  Loaded l = loadCorpus("Do_Nothing_Capability.mrsl");
  const auto blocks = l.blocks();
  const Statement& call = blocks[0].statements.back();
  REQUIRE((call.kind == Statement::Kind::Call));
  REQUIRE(call.spec != nullptr);
  CHECK(call.spec->operation == "Pop");
  CHECK(print(call.spec->precondition) == "1 <= |S|");
  CHECK(printed(call.spec->postconditions) == std::vector<std::string>{"#S = <R> o S"});
}

TEST_CASE("modifiedVariables skips evaluates and restores arguments") {
  Loaded l = loadCorpus("Search_Capability.mrsl");
  const ProcedureDecl& p = l.module->procedures[0];
  const auto& loop = *std::find_if(p.body.begin(), p.body.end(),
                                   [](const Statement& s) { return s.kind == Statement::Kind::While; });
  CHECK(printed(modifiedVariables(loop.body, *l.module, *l.loader)) == std::vector<std::string>{"e", "Q", "found", "T"});
}
