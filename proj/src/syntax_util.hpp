#pragma once

#include <optional>
#include <string_view>

#include "codeviews/syntax.hpp"

namespace codeviews::syntax_util {

inline bool is_identifier_kind(std::string_view kind) {
  return kind == "identifier" || kind == "field_identifier" || kind == "type_identifier" ||
         kind == "statement_identifier" || kind == "namespace_identifier";
}

inline bool is_declarator_kind(std::string_view kind) {
  return kind.ends_with("declarator") && kind != "init_declarator";
}

inline NodeId strip_parens(const SyntaxTree& t, NodeId id) {
  while (t.node(id).kind == "parenthesized_expression") {
    auto inner = t.named_children(id);
    if (inner.empty()) break;
    id = inner.front();
  }
  return id;
}

// The declarator nested inside a wrapping declarator, if any.
inline std::optional<NodeId> inner_declarator(const SyntaxTree& t, NodeId d) {
  if (auto c = t.child(d, "declarator")) return c;
  for (NodeId c : t.node(d).children) {
    const auto& k = t.node(c).kind;
    if (is_declarator_kind(k) && k != "parameter_list") return c;
  }
  return std::nullopt;
}

// Name node introduced by a declarator chain: an identifier-kind leaf, a
// qualified_identifier, a destructor_name or an operator_name.
inline std::optional<NodeId> declarator_name(const SyntaxTree& t, NodeId d) {
  while (true) {
    const auto& n = t.node(d);
    if (is_identifier_kind(n.kind) || n.kind == "qualified_identifier" || n.kind == "destructor_name" ||
        n.kind == "operator_name") {
      return d;
    }
    if (n.kind == "init_declarator") {
      auto c = t.child(d, "declarator");
      if (!c) return std::nullopt;
      d = *c;
      continue;
    }
    auto inner = inner_declarator(t, d);
    if (!inner) {
      for (NodeId c : n.children) {
        const auto& k = t.node(c).kind;
        if (is_identifier_kind(k) || k == "qualified_identifier" || k == "destructor_name" || k == "operator_name") {
          return c;
        }
      }
      return std::nullopt;
    }
    d = *inner;
  }
}

// Innermost identifier leaf of a (possibly qualified) name node.
inline NodeId innermost_name(const SyntaxTree& t, NodeId n) {
  while (t.node(n).kind == "qualified_identifier") {
    auto name = t.child(n, "name");
    if (!name) break;
    n = *name;
  }
  return n;
}

// The function_declarator of a declarator chain, following pointer and
// reference wrappers but not parentheses (those make it a function pointer).
inline std::optional<NodeId> function_declarator(const SyntaxTree& t, NodeId d) {
  while (true) {
    const auto& k = t.node(d).kind;
    if (k == "function_declarator") {
      auto inner = t.child(d, "declarator");
      if (inner && t.node(*inner).kind == "parenthesized_declarator") return std::nullopt;
      return d;
    }
    if (k != "pointer_declarator" && k != "reference_declarator" && k != "init_declarator") return std::nullopt;
    auto c = t.child(d, "declarator");
    if (!c) return std::nullopt;
    d = *c;
  }
}

}  // namespace codeviews::syntax_util
