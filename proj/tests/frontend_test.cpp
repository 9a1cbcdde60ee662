#include <fstream>

#include "doctest.h"
#include "support.hpp"

using namespace parsivc;
using namespace parsivc::testing;

namespace {

ErrorKind errorKindOf(const std::string& text) {
  try {
    loadText(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Engine;
}

}  // namespace

TEST_CASE("Queue_Template parses into a concept with a constrained type family") {
  Loaded l = loadCorpus("Queue_Template.mrsl");
  const SourceModule& m = *l.module;
  CHECK((m.kind == SourceModule::Kind::Concept));
  REQUIRE(m.params.size() == 2);
  CHECK(m.params[0].name == "Entry");
  CHECK(m.params[1].name == "Max_Length");
  // `a > b` is stored as `b < a`.
  CHECK(print(m.moduleRequires) == "0 < Max_Length");
  REQUIRE(m.typeFamilies.size() == 1);
  CHECK(m.typeFamilies[0].exemplar == "Q");
  CHECK(print(m.typeFamilies[0].constraint) == "|Q| <= Max_Length");
  CHECK(print(m.typeFamilies[0].initialization) == "Q = Lambda");
  const OperationDecl* enq = l.loader->findOperation(m, "Enqueue");
  REQUIRE(enq != nullptr);
  CHECK(print(enq->postcondition) == "Q = #Q o <#e>");
  CHECK(enq->postcondition.isEquality());
  CHECK(enq->postcondition.args()[1].isApplicationOf("o"));
}

TEST_CASE("an operation without clauses defaults to true") {
  Loaded l = loadText("Concept Empty;\n  Oper Noop();\n  end Noop;\nend Empty;\n");
  REQUIRE(l.module->operations.size() == 1);
  CHECK(l.module->operations[0].precondition.isTrue());
  CHECK(l.module->operations[0].postcondition.isTrue());
  CHECK(l.module->procedures.size() == 1);
}

TEST_CASE("ASCII spellings of the empty string agree") {
  Loaded l = loadText("Theory T; uses String_Theory;\n  Assertive_Code A(S : SStr);\n"
                      "    Assume S = empty_string;\n    Confirm S = Lambda;\n  end A;\nend T;\n");
  const auto& st = l.module->assertiveCode[0].statements;
  REQUIRE(st.size() == 2);
  CHECK(equalModParen(st[0].expr.args()[1], st[1].expr.args()[1]));
}

TEST_CASE("string theory supplies its vocabulary") {
  Loaded l = loadText("Theory T; uses String_Theory; end T;\n");
  const Context& ctx = *l.module->context;
  for (const char* name : {"Lambda", "o", "<_>", "|_|", "SStr"}) {
    CAPTURE(name);
    CHECK(ctx.lookup(name) != nullptr);
  }
  CHECK((ctx.lookup("Lambda")->kind == SymbolKind::Constant));
  CHECK_FALSE(ctx.isSpecVariable("Lambda", false));
}

TEST_CASE("builtins hold only the boolean basics") {
  auto ctx = Context::builtins();
  CHECK(ctx->lookup("B") != nullptr);
  CHECK(ctx->lookup("=") != nullptr);
  CHECK(ctx->lookup("Lambda") == nullptr);
}

TEST_CASE("printing then reparsing corpus formulas is a fixpoint") {
  for (const auto& file : tableCorpus()) {
    Loaded l = loadCorpus(file);
    for (const auto* mod : l.loader->closure(*l.module)) {
      for (const auto& op : mod->operations) {
        auto ctx = std::make_shared<Context>(mod->context);
        for (const auto& p : op.params) ctx->defineSpecVariable(p.name, p.sort, "test", true);
        for (const Expr& e : {op.precondition, op.postcondition}) {
          CAPTURE(print(e));
          const Expr again = parseExpression(print(e), *ctx);
          CHECK(equalModParen(again, e));
          CHECK(print(again) == print(e));
        }
      }
    }
  }
}

TEST_CASE("diagnostics carry file, line and column") {
  try {
    loadText("Theory T;\n  uses Integer_Theory;\n  Definition p : Z -> B;\n  Corollary C : p(1) = ;\nend T;\n", "bad.mthy");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::Syntax));
    CHECK(e.where().file == "bad.mthy");
    CHECK(e.where().line == 4);
    CHECK(e.where().column > 1);
    CHECK(e.diagnostic().rfind("bad.mthy:4:", 0) == 0);
  }
}

TEST_CASE("error kinds") {
  CHECK((errorKindOf("Theory T; uses No_Such_Theory; end T;") == ErrorKind::Import));
  CHECK((errorKindOf("Theory T; uses Integer_Theory;\n Assertive_Code A(x : Z); Confirm x and true; end A;\nend T;") ==
        ErrorKind::Sort));
  CHECK((errorKindOf("Theory T; Assertive_Code A(); Confirm y = y; end A; end T;") == ErrorKind::Resolution));
  CHECK((errorKindOf("Theory T; Assertive_Code A(); Confirm true $ end A; end T;") == ErrorKind::Lexical));
}

TEST_CASE("cyclic imports are rejected") {
  const auto dir = std::filesystem::temp_directory_path() / "parsivc_cycle_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "Cyc_A.mthy") << "Theory Cyc_A; uses Cyc_B; end Cyc_A;\n";
  std::ofstream(dir / "Cyc_B.mthy") << "Theory Cyc_B; uses Cyc_A; end Cyc_B;\n";
  ModuleLoader loader({dir});
  CHECK_THROWS_AS(loader.loadFile(dir / "Cyc_A.mthy"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("procedure contexts declare parameters in both forms and locals once") {
  Loaded l = loadCorpus("Do_Nothing_Capability.mrsl");
  REQUIRE(l.module->procedures.size() == 1);
  const ProcedureDecl& p = l.module->procedures[0];
  CHECK(p.context->isSpecVariable("S", false));
  CHECK(p.context->isSpecVariable("S", true));
  CHECK(p.context->isSpecVariable("e", false));
  CHECK_FALSE(p.context->isSpecVariable("e", true));
  CHECK((l.module->kind == SourceModule::Kind::Extension));
  CHECK(l.module->enhances == "Stack_Template");
}

TEST_CASE("corollaries load as left-to-right rewrites") {
  Loaded l = loadText("Theory T; uses String_Theory; end T;\n");
  const auto rules = l.rules();
  auto it = std::find_if(rules.begin(), rules.end(), [](const RewriteCorollary& r) { return r.name == "Len1"; });
  REQUIRE(it != rules.end());
  CHECK(print(it->lhs) == "|a o b|");
  CHECK(print(it->rhs) == "|a| + |b|");
}
