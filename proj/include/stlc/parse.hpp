#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stlc/normalize.hpp"
#include "stlc/signature.hpp"
#include "stlc/subst.hpp"

namespace stlc {
namespace detail {

// ---------------------------------------------------------------------------
// Tokenizer / recursive-descent parser for the term grammar
//
//   term := "\" IDENT ":" type "." term
//         | IDENT | IDENT "(" term {"," term} ")" | "(" term ")"
//         | term term                (juxtaposition application)
//
// "λ" is accepted as a synonym for "\".
// ---------------------------------------------------------------------------

struct Lexer {
  const std::string& s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool at_lambda() {
    skip_ws();
    if (i < s.size() && s[i] == '\\') return true;
    return i + 1 < s.size() && static_cast<unsigned char>(s[i]) == 0xCE &&
           static_cast<unsigned char>(s[i + 1]) == 0xBB;
  }
  void eat_lambda() {
    skip_ws();
    i += (s[i] == '\\') ? 1 : 2;
  }
  bool at_ident() {
    skip_ws();
    return i < s.size() &&
           (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_');
  }
  std::string ident() {
    skip_ws();
    if (!at_ident()) throw ParseError("expected identifier", i);
    std::size_t start = i;
    while (i < s.size() && is_ident_char(s[i])) ++i;
    std::string name = s.substr(start, i - start);
    // Canonical constant names embed a parenthesized type: c_(a->a).
    if (name == "c_" && i < s.size() && s[i] == '(') {
      int depth = 0;
      std::size_t j = i;
      do {
        if (s[j] == '(') ++depth;
        if (s[j] == ')') --depth;
        ++j;
      } while (j < s.size() && depth > 0);
      if (depth != 0) throw ParseError("unterminated canonical constant", i);
      name += s.substr(i, j - i);
      i = j;
    }
    return name;
  }
  void expect(char c) {
    skip_ws();
    if (i >= s.size() || s[i] != c)
      throw ParseError(std::string("expected '") + c + "'", i);
    ++i;
  }
  bool accept(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  TypePtr type() {
    TypePtr lhs = type_primary();
    skip_ws();
    if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == '>') {
      i += 2;
      return arrow(lhs, type());
    }
    return lhs;
  }
  TypePtr type_primary() {
    skip_ws();
    if (accept('(')) {
      TypePtr t = type();
      expect(')');
      return t;
    }
    return base_type(ident());
  }
};

struct TermParser {
  Lexer lex;

  PrePtr parse() {
    PrePtr t = term();
    if (!lex.eof()) throw ParseError("trailing characters after term", lex.i);
    return t;
  }

  PrePtr term() {
    PrePtr t = atom();
    while (!lex.eof() && lex.peek() != ')' && lex.peek() != ',') {
      PrePtr a = atom();
      t = pre_app(t, a);
    }
    return t;
  }

  PrePtr atom() {
    if (lex.at_lambda()) {
      lex.eat_lambda();
      std::string binder = lex.ident();
      lex.expect(':');
      TypePtr ty = lex.type();
      lex.expect('.');
      return pre_lam(binder, ty, term());
    }
    if (lex.accept('(')) {
      PrePtr t = term();
      lex.expect(')');
      return t;
    }
    std::string name = lex.ident();
    PrePtr head = pre_name(name);
    if (lex.accept('(')) {
      head = pre_app(head, term());
      while (lex.accept(',')) head = pre_app(head, term());
      lex.expect(')');
    }
    return head;
  }
};

// ---------------------------------------------------------------------------
// Bidirectional resolution and type inference on pre-terms.
//
// Identifier resolution: in-scope binders bind, declared (or canonical)
// signature names are constants, leading-uppercase names are free
// variables.  Free-variable types are inferred from use; when the result
// type of a free-variable occurrence is not determined by its context it
// defaults to the signature's base type.
// ---------------------------------------------------------------------------

struct Inferencer {
  const Signature& sig;
  std::map<std::string, TypePtr>& free_types;
  std::vector<std::pair<std::string, TypePtr>> scope;

  std::optional<TypePtr> scope_lookup(const std::string& n) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == n) return it->second;
    return std::nullopt;
  }

  static void flatten(const PrePtr& e, PrePtr& head, std::vector<PrePtr>& args) {
    if (e->k == PreTerm::K::App) {
      flatten(e->fn, head, args);
      args.push_back(e->arg);
    } else {
      head = e;
    }
  }

  void validate_binder(const std::string& b) {
    if (std::isupper(static_cast<unsigned char>(b[0])))
      throw TypeCheckError("binder '" + b + "' must not start uppercase");
    if (sig.is_constant(b))
      throw TypeCheckError("binder '" + b + "' collides with a constant");
    if (scope_lookup(b))
      throw TypeCheckError("binder '" + b + "' rebinds a name already in scope");
  }

  std::pair<PrePtr, TypePtr> synth(const PrePtr& e) {
    if (e->k == PreTerm::K::Lam) {
      validate_binder(e->binder);
      scope.emplace_back(e->binder, e->binder_ty);
      auto [body, body_ty] = synth(e->body);
      scope.pop_back();
      return {pre_lam(e->binder, e->binder_ty, body),
              arrow(e->binder_ty, body_ty)};
    }
    return spine(e, nullptr);
  }

  PrePtr check(const PrePtr& e, const TypePtr& expected) {
    if (e->k == PreTerm::K::Lam) {
      if (!expected->is_arrow())
        throw TypeCheckError("abstraction where " + show(expected) +
                             " was expected");
      if (!type_eq(e->binder_ty, expected->from))
        throw TypeCheckError("binder '" + e->binder + "' annotated " +
                             show(e->binder_ty) + " where " +
                             show(expected->from) + " was expected");
      validate_binder(e->binder);
      scope.emplace_back(e->binder, e->binder_ty);
      PrePtr body = check(e->body, expected->to);
      scope.pop_back();
      return pre_lam(e->binder, e->binder_ty, body);
    }
    auto [r, ty] = spine(e, &expected);
    if (!type_eq(ty, expected))
      throw TypeCheckError("term has type " + show(ty) + ", expected " +
                           show(expected));
    return r;
  }

  // Handles an application chain; `expected` is non-null in checking mode.
  std::pair<PrePtr, TypePtr> spine(const PrePtr& e, const TypePtr* expected) {
    PrePtr head;
    std::vector<PrePtr> args;
    flatten(e, head, args);

    PrePtr rhead;
    TypePtr hty;
    if (head->k == PreTerm::K::Lam) {
      auto [rh, t] = synth(head);
      rhead = rh;
      hty = t;
    } else if (head->k == PreTerm::K::Leaf) {
      rhead = head;
      hty = head->leaf.type;
    } else if (head->k == PreTerm::K::Name) {
      const std::string& n = head->name;
      if (auto bty = scope_lookup(n)) {
        rhead = pre_leaf(Head{HeadKind::Bound, n, *bty});
        hty = *bty;
      } else if (auto cty = sig.lookup(n)) {
        rhead = pre_leaf(Head{HeadKind::Const, n, *cty});
        hty = *cty;
      } else if (std::isupper(static_cast<unsigned char>(n[0]))) {
        auto it = free_types.find(n);
        if (it != free_types.end()) {
          hty = it->second;
        } else {
          // New free variable: synthesize argument types, then take the
          // expected result type when the context provides one.
          std::vector<PrePtr> rargs;
          TypePtr ty = expected && args.empty()
                           ? *expected
                           : base_type(sig.default_base);
          if (!args.empty()) {
            std::vector<TypePtr> arg_tys;
            for (const auto& a : args) {
              auto [ra, t] = synth(a);
              rargs.push_back(ra);
              arg_tys.push_back(t);
            }
            ty = expected ? *expected : base_type(sig.default_base);
            for (auto at = arg_tys.rbegin(); at != arg_tys.rend(); ++at)
              ty = arrow(*at, ty);
          }
          free_types[n] = ty;
          PrePtr out = pre_leaf(Head{HeadKind::Free, n, ty});
          for (const auto& ra : rargs) out = pre_app(out, ra);
          return {out, expected ? *expected : target_type(ty)};
        }
        rhead = pre_leaf(Head{HeadKind::Free, n, hty});
      } else {
        throw TypeCheckError(
            "unknown identifier '" + n +
            "' (not bound, not a declared constant, not uppercase)");
      }
    } else {
      throw InternalError("unexpected pre-term during inference");
    }

    PrePtr out = rhead;
    TypePtr ty = hty;
    for (const auto& a : args) {
      if (!ty->is_arrow())
        throw TypeCheckError("arity overflow: term of type " + show(hty) +
                             " applied to too many arguments");
      out = pre_app(out, check(a, ty->from));
      ty = ty->to;
    }
    return {out, ty};
  }
};

}  // namespace detail

// Parses, resolves, infers, and returns the eta-long beta-normal form.
// `free_ctx`, when given, seeds (and receives) the free-variable typing.
inline TermPtr parse_term(const std::string& text, const Signature& sig,
                          std::map<std::string, TypePtr>* free_ctx = nullptr) {
  detail::TermParser parser{detail::Lexer{text}};
  detail::PrePtr raw = parser.parse();
  std::map<std::string, TypePtr> local;
  std::map<std::string, TypePtr>& frees = free_ctx ? *free_ctx : local;
  detail::Inferencer inf{sig, frees, {}};
  auto [resolved, ty] = inf.synth(raw);
  std::set<std::string> avoid;
  for (const auto& [n, t] : sig.constants) avoid.insert(n);
  for (const auto& [n, t] : frees) avoid.insert(n);
  return detail::normalize_pre(resolved, ty, std::move(avoid));
}

// Re-derives the type of a kernel term against explicit contexts, checking
// every annotation on the way.  Unabstracted bound variables must be
// resolvable through `bound_ctx`.
inline TypePtr infer_type(const TermPtr& t,
                          const std::map<std::string, TypePtr>& bound_ctx,
                          const std::map<std::string, TypePtr>& free_ctx,
                          const Signature& sig) {
  std::vector<std::pair<std::string, TypePtr>> scope;
  std::function<TypePtr(const TermPtr&)> go = [&](const TermPtr& u) -> TypePtr {
    if (u->is_abs) {
      scope.emplace_back(u->binder, u->binder_type);
      TypePtr body_ty = go(u->body);
      scope.pop_back();
      TypePtr ty = arrow(u->binder_type, body_ty);
      if (!type_eq(ty, u->type))
        throw TypeCheckError("cached type annotation disagrees at binder " +
                             u->binder);
      return ty;
    }
    TypePtr hty;
    switch (u->head.kind) {
      case HeadKind::Bound: {
        bool found = false;
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == u->head.name) {
            hty = it->second;
            found = true;
            break;
          }
        if (!found) {
          auto it = bound_ctx.find(u->head.name);
          if (it == bound_ctx.end())
            throw TypeCheckError("unabstracted bound variable " + u->head.name);
          hty = it->second;
        }
        break;
      }
      case HeadKind::Free: {
        auto it = free_ctx.find(u->head.name);
        if (it == free_ctx.end())
          throw TypeCheckError("free variable " + u->head.name +
                               " not in context");
        hty = it->second;
        break;
      }
      case HeadKind::Const: {
        auto c = sig.lookup(u->head.name);
        if (!c) throw TypeCheckError("undeclared constant " + u->head.name);
        hty = *c;
        break;
      }
    }
    if (!type_eq(hty, u->head.type))
      throw TypeCheckError("head " + u->head.name +
                           " annotated with a different type than its context");
    auto params = param_types(hty);
    if (u->args.size() > params.size())
      throw TypeCheckError("arity overflow at " + u->head.name);
    for (std::size_t i = 0; i < u->args.size(); ++i) {
      TypePtr at = go(u->args[i]);
      if (!type_eq(at, params[i]))
        throw TypeCheckError("argument " + std::to_string(i + 1) + " of " +
                             u->head.name + " has type " + show(at) +
                             ", expected " + show(params[i]));
    }
    return drop_params(hty, static_cast<int>(u->args.size()));
  };
  return go(t);
}

// Self-consistency variant: free variables are taken from the term's own
// annotations.
inline TypePtr infer_type(const TermPtr& t, const Signature& sig) {
  return infer_type(t, {}, free_vars(t), sig);
}

}  // namespace stlc
