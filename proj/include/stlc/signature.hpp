#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "stlc/type.hpp"

namespace stlc {

// The constant vocabulary.  Besides the declared constants, every type has
// a canonical constant that can be requested on demand, so grounding never
// runs out of symbols of the right type.
struct Signature {
  std::map<std::string, TypePtr> constants;
  std::string default_base = "a";

  // "c_a" for the base type a, "c_(a->a)" for arrows.
  static std::string canonical_constant_name(const TypePtr& ty) {
    if (ty->is_base()) return "c_" + ty->base;
    return "c_(" + show(ty) + ")";
  }

  void declare(const std::string& name, const TypePtr& ty) {
    if (name.empty()) throw Error("empty constant name");
    if (std::isupper(static_cast<unsigned char>(name[0])))
      throw Error("constant names must not start uppercase: " + name);
    auto it = constants.find(name);
    if (it != constants.end() && !type_eq(it->second, ty))
      throw Error("constant " + name + " redeclared at a different type");
    // A declared name of canonical shape must agree with the canonical type.
    if (auto canon = canonical_type_of(name); canon && !type_eq(*canon, ty))
      throw Error("constant " + name + " conflicts with a canonical constant");
    constants[name] = ty;
  }

  bool is_constant(const std::string& name) const {
    return lookup(name).has_value();
  }

  std::optional<TypePtr> lookup(const std::string& name) const {
    auto it = constants.find(name);
    if (it != constants.end()) return it->second;
    return canonical_type_of(name);
  }

  // The same name is returned for every request at a given type.
  std::string canonical_by_type(const TypePtr& ty) const {
    return canonical_constant_name(ty);
  }

 private:
  static std::optional<TypePtr> canonical_type_of(const std::string& name) {
    if (name.rfind("c_", 0) != 0) return std::nullopt;
    std::string rest = name.substr(2);
    if (rest.empty()) return std::nullopt;
    try {
      TypePtr ty;
      if (rest.front() == '(' && rest.back() == ')')
        ty = parse_type(rest.substr(1, rest.size() - 2));
      else
        ty = parse_type(rest);
      if (canonical_constant_name(ty) == name) return ty;
    } catch (const Error&) {
    }
    return std::nullopt;
  }
};

// One "name : type" declaration per line; '#' starts a comment.
inline Signature parse_signature(const std::string& text) {
  Signature sig;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("signature line " + std::to_string(lineno) +
                           ": expected 'name : type'",
                       0);
    std::string name = line.substr(0, colon);
    auto ne = name.find_last_not_of(" \t");
    name = name.substr(0, ne == std::string::npos ? 0 : ne + 1);
    if (name.empty())
      throw ParseError("signature line " + std::to_string(lineno) +
                           ": missing constant name",
                       0);
    sig.declare(name, parse_type(line.substr(colon + 1)));
  }
  return sig;
}

// The running problem needs exactly f : a->a and a : a.
inline Signature default_signature() {
  Signature sig;
  sig.declare("a", base_type("a"));
  sig.declare("f", arrow(base_type("a"), base_type("a")));
  return sig;
}

}  // namespace stlc
