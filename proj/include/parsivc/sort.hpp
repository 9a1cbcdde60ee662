#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace parsivc {

/// Math sorts. `B` and `SSet` are built in; everything else (Z, N, SStr,
/// Entry, ...) is a named sort introduced by some theory or concept.
/// `Entity` is the built-in top sort: every sort is accepted where Entity is
/// expected.
class Sort {
 public:
  enum class Kind { Boolean, SSet, Named, Arrow, Product };

  Sort();  // Boolean

  static Sort boolean();
  static Sort sset();
  static Sort named(std::string name);
  static Sort entity() { return named("Entity"); }
  static Sort arrow(std::vector<Sort> domain, Sort codomain);
  static Sort product(std::vector<Sort> components);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool isBoolean() const { return kind_ == Kind::Boolean; }
  bool isEntity() const { return kind_ == Kind::Named && name_ == "Entity"; }

  /// Arrow: the domain components. Product: the components.
  std::span<const Sort> components() const;
  /// Arrow only.
  const Sort& codomain() const;
  std::size_t arity() const;

  std::string str() const;

  friend bool operator==(const Sort& a, const Sort& b);

 private:
  Kind kind_ = Kind::Boolean;
  std::string name_;
  // Arrow: domain..., codomain. Product: components.
  std::shared_ptr<const std::vector<Sort>> parts_;
};

}  // namespace parsivc
