#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ra {

// Two relation schemas come builtin and never carry explicit extensions:
// membership In(member, subset) over a subset-valued sort, and application
// R(f, i[, v]) over a function-valued sort. The binary application form
// designates one value of the function's value sort as "success".
enum class BuiltinKind : std::uint8_t {
  None,
  Membership,
  Application,
};

struct RelationDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  BuiltinKind builtin = BuiltinKind::None;
  // Binary application only: the value-sort element id that counts as true.
  std::string success_value;

  bool operator==(const RelationDecl&) const = default;
};

struct ConstantDecl {
  std::string name;
  std::string sort;

  bool operator==(const ConstantDecl&) const = default;
};

struct Vocabulary {
  std::vector<std::string> sorts;
  std::vector<RelationDecl> relations;
  std::vector<ConstantDecl> constants;

  bool operator==(const Vocabulary&) const = default;

  bool has_sort(const std::string& name) const {
    for (const auto& s : sorts)
      if (s == name) return true;
    return false;
  }

  const RelationDecl* find_relation(const std::string& name) const {
    for (const auto& r : relations)
      if (r.name == name) return &r;
    return nullptr;
  }

  const ConstantDecl* find_constant(const std::string& name) const {
    for (const auto& c : constants)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool has_name(const std::string& name) const {
    return has_sort(name) || find_relation(name) != nullptr ||
           find_constant(name) != nullptr;
  }
};

}  // namespace ra
