#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "stlc/errors.hpp"

namespace stlc {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

// Simple types over named base types: either a base type or an arrow.
// Every type can be viewed as g1 -> ... -> gm -> a with a a base type.
struct Type {
  std::string base;  // nonempty iff this is a base type
  TypePtr from, to;  // set iff this is an arrow

  bool is_base() const { return !base.empty(); }
  bool is_arrow() const { return static_cast<bool>(from); }
};

inline TypePtr base_type(std::string name) {
  auto t = std::make_shared<Type>();
  t->base = std::move(name);
  return t;
}

inline TypePtr arrow(TypePtr from, TypePtr to) {
  auto t = std::make_shared<Type>();
  t->from = std::move(from);
  t->to = std::move(to);
  return t;
}

inline bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->is_base() != b->is_base()) return false;
  if (a->is_base()) return a->base == b->base;
  return type_eq(a->from, b->from) && type_eq(a->to, b->to);
}

// Argument types g1..gm of the arrow chain.
inline std::vector<TypePtr> param_types(const TypePtr& t) {
  std::vector<TypePtr> out;
  for (const Type* c = t.get(); c->is_arrow(); c = c->to.get())
    out.push_back(c->from);
  return out;
}

// The unique base type at the end of the arrow chain.
inline TypePtr target_type(TypePtr t) {
  while (t->is_arrow()) t = t->to;
  return t;
}

inline int type_arity(const TypePtr& t) {
  int n = 0;
  for (const Type* c = t.get(); c->is_arrow(); c = c->to.get()) ++n;
  return n;
}

// Drops the first n parameters: the type of a head after n applications.
inline TypePtr drop_params(TypePtr t, int n) {
  for (int i = 0; i < n; ++i) {
    if (!t->is_arrow()) throw TypeCheckError("arity overflow while consuming parameters");
    t = t->to;
  }
  return t;
}

// Right-associative rendering with minimal parentheses: "a->a", "(a->a)->a".
inline std::string show(const TypePtr& t) {
  if (t->is_base()) return t->base;
  std::string lhs = show(t->from);
  if (t->from->is_arrow()) lhs = "(" + lhs + ")";
  return lhs + "->" + show(t->to);
}

namespace detail {

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

struct TypeCursor {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
};

inline TypePtr parse_type_at(TypeCursor& c);

inline TypePtr parse_type_primary(TypeCursor& c) {
  c.skip_ws();
  if (c.i >= c.s.size()) throw ParseError("expected type", c.i);
  if (c.s[c.i] == '(') {
    ++c.i;
    TypePtr t = parse_type_at(c);
    c.skip_ws();
    if (c.i >= c.s.size() || c.s[c.i] != ')') throw ParseError("expected ')'", c.i);
    ++c.i;
    return t;
  }
  if (!std::isalpha(static_cast<unsigned char>(c.s[c.i])) && c.s[c.i] != '_')
    throw ParseError("expected type identifier", c.i);
  std::size_t start = c.i;
  while (c.i < c.s.size() && is_ident_char(c.s[c.i])) ++c.i;
  return base_type(c.s.substr(start, c.i - start));
}

inline TypePtr parse_type_at(TypeCursor& c) {
  TypePtr lhs = parse_type_primary(c);
  c.skip_ws();
  if (c.i + 1 < c.s.size() && c.s[c.i] == '-' && c.s[c.i + 1] == '>') {
    c.i += 2;
    return arrow(lhs, parse_type_at(c));
  }
  return lhs;
}

}  // namespace detail

// Parses "a", "a->a->a", "(a->a)->a". The whole string must be consumed.
inline TypePtr parse_type(const std::string& text) {
  detail::TypeCursor c{text};
  TypePtr t = detail::parse_type_at(c);
  if (!c.eof()) throw ParseError("trailing characters after type", c.i);
  return t;
}

}  // namespace stlc
