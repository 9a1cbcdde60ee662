#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "parsivc/assertive.hpp"
#include "parsivc/context.hpp"
#include "parsivc/error.hpp"
#include "parsivc/expr.hpp"

namespace parsivc {

struct TypeFamilyDecl {
  std::string name;
  Sort model;
  std::string exemplar;
  Expr constraint;      // over the exemplar; empty when absent
  Expr initialization;  // over the exemplar; empty when absent
  SourceLocation loc;
};

/// Program-level parameter: `updates Q : Queue`.
struct ParamDecl {
  std::string name;
  ParamMode mode = ParamMode::Updates;
  std::string typeName;
  Sort sort;
  SourceLocation loc;
};

struct OperationDecl {
  std::string name;
  std::vector<ParamDecl> params;
  Expr precondition;   // defaults to `true`
  Expr postcondition;  // defaults to `true`
  SourceLocation loc;
  SourceLocation requiresLoc;
  SourceLocation ensuresLoc;
};

struct LocalVarDecl {
  std::string name;
  std::string typeName;
  Sort sort;
  SourceLocation loc;
};

struct ProcedureDecl {
  std::string name;
  std::vector<ParamDecl> params;
  std::vector<LocalVarDecl> locals;
  std::vector<Statement> body;
  /// Module context plus the parameters (plain and `#`) and locals.
  std::shared_ptr<const Context> context;
  SourceLocation loc;
};

struct DefinitionDecl {
  std::string name;
  Sort sort;
  SourceLocation loc;
};

/// `Corollary Name : forall x : T, lhs = rhs;`, used left to right.
struct RewriteCorollary {
  std::string name;
  std::vector<Binder> binders;
  Expr lhs;
  Expr rhs;
  SourceLocation loc;
};

/// A literal block of assertive code over declared specification variables.
struct AssertiveCodeDecl {
  std::string name;
  std::vector<Binder> variables;
  std::vector<Statement> statements;
  std::shared_ptr<const Context> context;
  SourceLocation loc;
};

struct SourceModule {
  enum class Kind { Concept, Extension, Theory };

  Kind kind = Kind::Theory;
  std::string name;
  std::string file;
  std::vector<ParamDecl> params;  // `type Entry` has mode Evaluates and an empty typeName
  Expr moduleRequires;            // empty when absent
  std::vector<std::string> uses;
  std::string enhances;  // extension modules only
  std::vector<TypeFamilyDecl> typeFamilies;
  std::vector<OperationDecl> operations;
  std::vector<ProcedureDecl> procedures;
  std::vector<DefinitionDecl> definitions;
  std::vector<RewriteCorollary> corollaries;
  std::vector<AssertiveCodeDecl> assertiveCode;
  std::shared_ptr<const Context> context;
};

std::string_view toString(SourceModule::Kind kind);

/// Resolves `uses` and `for` imports on a search path, caching each module by
/// name. Imports are parsed depth-first; a module that (transitively) imports
/// itself is an Import error.
class ModuleLoader {
 public:
  explicit ModuleLoader(std::vector<std::filesystem::path> searchPath = {});

  const SourceModule& loadFile(const std::filesystem::path& path);
  const SourceModule& loadSource(std::string_view text, const std::string& file);
  const SourceModule& loadByName(const std::string& name, const SourceLocation& from = {});

  const SourceModule* find(const std::string& name) const;

  /// `m` and everything it imports, dependencies first, each once.
  std::vector<const SourceModule*> closure(const SourceModule& m) const;
  /// Rewrite corollaries visible from `m`, in import-then-declaration order.
  std::vector<RewriteCorollary> rewriteRules(const SourceModule& m) const;
  const OperationDecl* findOperation(const SourceModule& m, const std::string& name) const;
  const TypeFamilyDecl* findTypeFamily(const SourceModule& m, const std::string& name) const;
  const SourceModule* moduleOf(const TypeFamilyDecl* tf) const;

  const std::vector<std::filesystem::path>& searchPath() const { return searchPath_; }

 private:
  friend class Parser;
  const SourceModule& parseAndStore(std::string_view text, const std::string& file);

  std::vector<std::filesystem::path> searchPath_;
  std::map<std::string, std::unique_ptr<SourceModule>> modules_;
  std::vector<std::string> inProgress_;
};

/// Merges the contexts of `modules` (in order) over the builtins.
std::shared_ptr<const Context> buildContext(const std::vector<const SourceModule*>& modules);

/// Parses and elaborates one expression against `ctx`.
Expr parseExpression(std::string_view text, const Context& ctx);

/// Parses `{a, b} |- {c}`; either side may be empty.
Sequent parseSequent(std::string_view text, const Context& ctx);

/// Search path from a colon separated list such as PARSIVC_THEORY_PATH.
std::vector<std::filesystem::path> splitSearchPath(std::string_view list);

}  // namespace parsivc
