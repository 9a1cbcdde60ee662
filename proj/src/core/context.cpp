#include "parsivc/context.hpp"

#include <set>

#include "parsivc/error.hpp"

namespace parsivc {

std::string_view toString(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Sort:
      return "sort";
    case SymbolKind::Constant:
      return "constant";
    case SymbolKind::Function:
      return "function";
    case SymbolKind::Predicate:
      return "predicate";
    case SymbolKind::SpecVariable:
      return "specVariable";
  }
  return "?";
}

Context::Context(std::shared_ptr<const Context> parent) : parent_(std::move(parent)) {}

std::shared_ptr<const Context> Context::builtins() {
  static const std::shared_ptr<const Context> instance = [] {
    auto ctx = std::make_shared<Context>();
    ctx->define("B", {SymbolKind::Sort, Sort::sset(), "builtin"});
    ctx->define("SSet", {SymbolKind::Sort, Sort::sset(), "builtin"});
    ctx->define("Entity", {SymbolKind::Sort, Sort::sset(), "builtin"});
    const Sort eqSort = Sort::arrow({Sort::entity(), Sort::entity()}, Sort::boolean());
    ctx->define("=", {SymbolKind::Predicate, eqSort, "builtin"});
    ctx->define("/=", {SymbolKind::Predicate, eqSort, "builtin"});
    return std::shared_ptr<const Context>(std::move(ctx));
  }();
  return instance;
}

void Context::define(const std::string& name, Symbol symbol) {
  auto it = entries_.find(name);
  if (it != entries_.end()) {
    if (it->second.kind == symbol.kind && it->second.sort == symbol.sort) return;
    throw Error(ErrorKind::Resolution, "incompatible redeclaration of '" + name + "' (" +
                                           std::string(toString(it->second.kind)) + " " + it->second.sort.str() +
                                           " from " + it->second.origin + " vs " +
                                           std::string(toString(symbol.kind)) + " " + symbol.sort.str() + " from " +
                                           symbol.origin + ")");
  }
  entries_.emplace(name, std::move(symbol));
}

void Context::defineSort(const std::string& name, const std::string& origin) {
  define(name, {SymbolKind::Sort, Sort::sset(), origin});
}

void Context::defineSpecVariable(const std::string& name, const Sort& sort, const std::string& origin,
                                 bool withIncoming) {
  define(name, {SymbolKind::SpecVariable, sort, origin});
  if (withIncoming) define("#" + name, {SymbolKind::SpecVariable, sort, origin});
}

void Context::addSubsort(const std::string& sub, const std::string& super) {
  for (const auto& p : subsorts_) {
    if (p.first == sub && p.second == super) return;
  }
  subsorts_.emplace_back(sub, super);
}

const Symbol* Context::lookup(const std::string& name) const {
  for (const Context* c = this; c != nullptr; c = c->parent_.get()) {
    auto it = c->entries_.find(name);
    if (it != c->entries_.end()) return &it->second;
  }
  return nullptr;
}

const Symbol* Context::lookupVariable(const std::string& name, bool incoming) const {
  return lookup(incoming ? "#" + name : name);
}

bool Context::isSpecVariable(const std::string& name, bool incoming) const {
  const Symbol* s = lookupVariable(name, incoming);
  return s != nullptr && s->kind == SymbolKind::SpecVariable;
}

bool Context::isSubsort(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  std::set<std::string> seen{sub};
  std::vector<std::string> frontier{sub};
  while (!frontier.empty()) {
    std::string cur = frontier.back();
    frontier.pop_back();
    for (const Context* c = this; c != nullptr; c = c->parent_.get()) {
      for (const auto& [lo, hi] : c->subsorts_) {
        if (lo != cur || seen.contains(hi)) continue;
        if (hi == super) return true;
        seen.insert(hi);
        frontier.push_back(hi);
      }
    }
  }
  return false;
}

bool Context::accepts(const Sort& expected, const Sort& actual) const {
  if (expected == actual || expected.isEntity()) return true;
  if (expected.kind() != actual.kind()) return false;
  switch (expected.kind()) {
    case Sort::Kind::Named:
      return isSubsort(actual.name(), expected.name());
    case Sort::Kind::Arrow:
    case Sort::Kind::Product: {
      auto e = expected.components();
      auto a = actual.components();
      if (e.size() != a.size()) return false;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!compatible(e[i], a[i])) return false;
      }
      return expected.kind() == Sort::Kind::Product || accepts(expected.codomain(), actual.codomain());
    }
    default:
      return false;
  }
}

void Context::importAll(const Context& other) {
  std::vector<const Context*> chain;
  for (const Context* c = &other; c != nullptr; c = c->parent_.get()) chain.push_back(c);
  // Outermost first so inner layers win.
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    for (const auto& [name, sym] : (*it)->entries_) {
      if (const Symbol* mine = lookup(name); mine && mine->kind == sym.kind && mine->sort == sym.sort) continue;
      define(name, sym);
    }
    for (const auto& [lo, hi] : (*it)->subsorts_) addSubsort(lo, hi);
  }
}

std::shared_ptr<const Context> extendContext(std::shared_ptr<const Context> parent,
                                             const std::vector<std::pair<std::string, Symbol>>& symbols) {
  auto ctx = std::make_shared<Context>(std::move(parent));
  for (const auto& [name, sym] : symbols) ctx->define(name, sym);
  return ctx;
}

}  // namespace parsivc
