#include "parsivc/sort.hpp"

#include "parsivc/error.hpp"

namespace parsivc {

Sort::Sort() = default;

Sort Sort::boolean() { return Sort(); }

Sort Sort::sset() {
  Sort s;
  s.kind_ = Kind::SSet;
  s.name_ = "SSet";
  return s;
}

Sort Sort::named(std::string name) {
  if (name == "B") return boolean();
  if (name == "SSet") return sset();
  Sort s;
  s.kind_ = Kind::Named;
  s.name_ = std::move(name);
  return s;
}

Sort Sort::arrow(std::vector<Sort> domain, Sort codomain) {
  if (domain.empty()) {
    throw Error(ErrorKind::Sort, "arrow sort needs at least one domain component");
  }
  Sort s;
  s.kind_ = Kind::Arrow;
  domain.push_back(std::move(codomain));
  s.parts_ = std::make_shared<const std::vector<Sort>>(std::move(domain));
  return s;
}

Sort Sort::product(std::vector<Sort> components) {
  if (components.size() < 2) {
    throw Error(ErrorKind::Sort, "product sort needs at least two components");
  }
  Sort s;
  s.kind_ = Kind::Product;
  s.parts_ = std::make_shared<const std::vector<Sort>>(std::move(components));
  return s;
}

std::span<const Sort> Sort::components() const {
  if (!parts_) return {};
  std::span<const Sort> all(*parts_);
  if (kind_ == Kind::Arrow) return all.first(all.size() - 1);
  return all;
}

const Sort& Sort::codomain() const {
  if (kind_ != Kind::Arrow) throw Error(ErrorKind::Sort, "codomain of non-arrow sort " + str());
  return parts_->back();
}

std::size_t Sort::arity() const { return kind_ == Kind::Arrow ? parts_->size() - 1 : 0; }

namespace {

std::string componentStr(const Sort& s) {
  // Compound components need grouping when nested inside another compound.
  if (s.kind() == Sort::Kind::Arrow || s.kind() == Sort::Kind::Product) return "(" + s.str() + ")";
  return s.str();
}

}  // namespace

std::string Sort::str() const {
  switch (kind_) {
    case Kind::Boolean:
      return "B";
    case Kind::SSet:
    case Kind::Named:
      return name_;
    case Kind::Product: {
      std::string out;
      for (const auto& c : components()) {
        if (!out.empty()) out += " * ";
        out += componentStr(c);
      }
      return out;
    }
    case Kind::Arrow: {
      std::string out;
      for (const auto& c : components()) {
        if (!out.empty()) out += " * ";
        out += componentStr(c);
      }
      return out + " -> " + componentStr(codomain());
    }
  }
  return "?";
}

bool operator==(const Sort& a, const Sort& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == Sort::Kind::Arrow || a.kind_ == Sort::Kind::Product) {
    return *a.parts_ == *b.parts_;
  }
  return a.name_ == b.name_;
}

}  // namespace parsivc
