#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parsivc/sort.hpp"

namespace parsivc {

enum class SymbolKind { Sort, Constant, Function, Predicate, SpecVariable };

std::string_view toString(SymbolKind kind);

struct Symbol {
  SymbolKind kind = SymbolKind::Constant;
  Sort sort;
  std::string origin;
};

/// Lexically chained symbol table. Inner layers shadow outer ones. A layer
/// is filled once and then shared read-only (as `shared_ptr<const Context>`);
/// extending a shared context means layering a new child on top of it.
///
/// Keys for incoming values carry the `#` prefix, so `#S` and `S` are
/// distinct entries.
class Context {
 public:
  explicit Context(std::shared_ptr<const Context> parent = nullptr);

  /// B, SSet, Entity, and the polymorphic `=` / `/=` (true/false are literals).
  static std::shared_ptr<const Context> builtins();

  /// Adds an entry to this layer. Re-declaring the same name identically is
  /// a no-op; an incompatible redeclaration throws.
  void define(const std::string& name, Symbol symbol);
  void defineSort(const std::string& name, const std::string& origin);
  /// Declares `name` and, when `withIncoming`, also `#name`.
  void defineSpecVariable(const std::string& name, const Sort& sort, const std::string& origin,
                          bool withIncoming = false);
  void addSubsort(const std::string& sub, const std::string& super);

  const Symbol* lookup(const std::string& name) const;
  const Symbol* lookupVariable(const std::string& name, bool incoming) const;
  bool contains(const std::string& name) const { return lookup(name) != nullptr; }

  bool isSpecVariable(const std::string& name, bool incoming) const;
  bool isSubsort(const std::string& sub, const std::string& super) const;
  /// Whether a value of `actual` may appear where `expected` is required:
  /// identical sorts, Entity as the expected sort, declared subsorts, and
  /// componentwise for arrows and products.
  bool accepts(const Sort& expected, const Sort& actual) const;
  bool compatible(const Sort& a, const Sort& b) const { return accepts(a, b) || accepts(b, a); }

  const std::shared_ptr<const Context>& parent() const { return parent_; }
  /// Entries of this layer only, in name order.
  const std::map<std::string, Symbol>& entries() const { return entries_; }
  const std::vector<std::pair<std::string, std::string>>& subsorts() const { return subsorts_; }
  /// Copies every entry and subsort pair from `other` (all layers) into this
  /// layer, applying the same compatibility rules as `define`.
  void importAll(const Context& other);

 private:
  std::map<std::string, Symbol> entries_;
  std::vector<std::pair<std::string, std::string>> subsorts_;
  std::shared_ptr<const Context> parent_;
};

/// One layer on top of `parent` holding `symbols`.
std::shared_ptr<const Context> extendContext(std::shared_ptr<const Context> parent,
                                             const std::vector<std::pair<std::string, Symbol>>& symbols);

}  // namespace parsivc
