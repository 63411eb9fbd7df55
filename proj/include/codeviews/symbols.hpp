#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "codeviews/diagnostic.hpp"
#include "codeviews/syntax.hpp"

namespace codeviews {

enum class SymbolKind : std::uint8_t {
  Variable,
  Parameter,
  Function,
  Struct,
  Enum,
  Union,
  Typedef,
  Class,
  MemberVariable,
  MemberFunction,
  Namespace,
  Label,
  Enumerator,
};

std::string_view symbol_kind_name(SymbolKind k);

using ScopeId = std::uint32_t;
using SymbolId = std::uint32_t;

enum class ScopeKind : std::uint8_t { Global, Namespace, Class, Function, Block };

struct ParamInfo {
  std::string name;
  std::string type_text;
  bool is_reference = false;
  bool is_pointer = false;
  bool is_const = false;  // const-qualified pointee / referent
};

struct Signature {
  std::string return_type;
  std::vector<ParamInfo> params;
  bool variadic = false;
};

struct Symbol {
  SymbolId id = 0;
  std::string name;
  std::string qualified_name;  // "A::f", "ns::g"; equals name at global scope
  SymbolKind kind = SymbolKind::Variable;
  std::string type_text;  // after typedef resolution; "external" when unknown
  NodeId decl_node;       // identifier-kind node; for externals the first use
  std::vector<NodeId> use_nodes;
  std::vector<NodeId> redeclarations;  // prototypes, out-of-line definition names
  ScopeId scope = 0;

  // functions and member functions
  std::vector<ParamInfo> params;
  std::vector<SymbolId> param_symbols;
  std::optional<NodeId> definition;  // function_definition node
  std::optional<ScopeId> body_scope;
  bool address_taken = false;
  bool variadic = false;

  // variables, parameters, members
  bool is_pointer = false;
  bool is_reference = false;
  bool is_array = false;
  bool is_static_local = false;
  std::optional<Signature> fn_pointer;  // for function-pointer typed objects

  // records (struct/union/class)
  std::optional<ScopeId> member_scope;
  std::optional<SymbolId> owner;  // enclosing class of a member

  bool is_external = false;

  bool is_function() const { return kind == SymbolKind::Function || kind == SymbolKind::MemberFunction; }
  bool is_object() const {
    return kind == SymbolKind::Variable || kind == SymbolKind::Parameter || kind == SymbolKind::MemberVariable;
  }
};

struct Scope {
  ScopeId id = 0;
  std::optional<ScopeId> parent;
  ScopeKind kind = ScopeKind::Global;
  std::string name;
  NodeId node;
  std::optional<SymbolId> owner;  // function or class that owns this scope
  std::map<std::string, std::vector<SymbolId>, std::less<>> names;
};

class SymbolTable {
 public:
  const std::vector<Scope>& scopes() const { return scopes_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  const Scope& scope(ScopeId id) const { return scopes_.at(id); }
  const std::map<std::string, std::string, std::less<>>& typedefs() const { return typedefs_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }

  // Symbol an identifier-kind node was bound to (declaration or use).
  std::optional<SymbolId> binding(NodeId id) const;
  // Nearest visible declaration of name from scope.
  std::optional<SymbolId> lookup(ScopeId from, std::string_view name) const;
  std::optional<SymbolId> find_function(std::string_view qualified_name) const;
  // Function symbol whose definition is the given function_definition node.
  std::optional<SymbolId> function_for_definition(NodeId def) const;
  // Defined functions in definition order.
  std::vector<SymbolId> defined_functions() const;
  std::vector<SymbolId> symbols_named(std::string_view name) const;

  // Call targets recorded for a call_expression node. Empty for external calls.
  const std::vector<SymbolId>& call_targets(NodeId call) const;
  bool is_indirect_call(NodeId call) const { return indirect_calls_.contains(call); }

  // Same arity and per-parameter type equality after resolution (arrays decay
  // to pointers), or either side external.
  static bool compatible(const std::vector<ParamInfo>& a, const std::vector<ParamInfo>& b);

 private:
  friend class SymbolBuilder;
  std::vector<Scope> scopes_;
  std::vector<Symbol> symbols_;
  std::map<std::string, std::string, std::less<>> typedefs_;
  std::unordered_map<NodeId, SymbolId> bindings_;
  std::unordered_map<NodeId, SymbolId> definitions_;
  std::unordered_map<NodeId, std::vector<SymbolId>> call_targets_;
  std::unordered_map<NodeId, bool> indirect_calls_;
  Diagnostics diagnostics_;
};

SymbolTable build_symbol_table(const SyntaxTree& tree);

}  // namespace codeviews
