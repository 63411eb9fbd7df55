#include "codeviews/symbols.hpp"

#include <algorithm>
#include <set>

#include "syntax_util.hpp"
#include "text_util.hpp"

namespace codeviews {

namespace su = syntax_util;

std::string_view symbol_kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::Variable: return "variable";
    case SymbolKind::Parameter: return "parameter";
    case SymbolKind::Function: return "function";
    case SymbolKind::Struct: return "struct";
    case SymbolKind::Enum: return "enum";
    case SymbolKind::Union: return "union";
    case SymbolKind::Typedef: return "typedef";
    case SymbolKind::Class: return "class";
    case SymbolKind::MemberVariable: return "member_variable";
    case SymbolKind::MemberFunction: return "member_function";
    case SymbolKind::Namespace: return "namespace";
    case SymbolKind::Label: return "label";
    case SymbolKind::Enumerator: return "enumerator";
  }
  return "variable";
}

std::optional<SymbolId> SymbolTable::binding(NodeId id) const {
  auto it = bindings_.find(id);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymbolId> SymbolTable::lookup(ScopeId from, std::string_view name) const {
  std::optional<ScopeId> s = from;
  while (s) {
    const Scope& sc = scopes_[*s];
    auto it = sc.names.find(name);
    if (it != sc.names.end() && !it->second.empty()) return it->second.front();
    s = sc.parent;
  }
  return std::nullopt;
}

std::optional<SymbolId> SymbolTable::find_function(std::string_view qualified_name) const {
  std::optional<SymbolId> fallback;
  for (const Symbol& s : symbols_) {
    if (!s.is_function() || s.is_external) continue;
    if (s.qualified_name == qualified_name) {
      if (s.definition) return s.id;
      if (!fallback) fallback = s.id;
    }
  }
  if (fallback) return fallback;
  for (const Symbol& s : symbols_) {
    if (s.is_function() && !s.is_external && s.definition && s.name == qualified_name) return s.id;
  }
  return std::nullopt;
}

std::optional<SymbolId> SymbolTable::function_for_definition(NodeId def) const {
  auto it = definitions_.find(def);
  if (it == definitions_.end()) return std::nullopt;
  return it->second;
}

std::vector<SymbolId> SymbolTable::defined_functions() const {
  std::vector<SymbolId> out;
  for (const Symbol& s : symbols_) {
    if (s.is_function() && s.definition) out.push_back(s.id);
  }
  std::sort(out.begin(), out.end(),
            [&](SymbolId a, SymbolId b) { return *symbols_[a].definition < *symbols_[b].definition; });
  return out;
}

std::vector<SymbolId> SymbolTable::symbols_named(std::string_view name) const {
  std::vector<SymbolId> out;
  for (const Symbol& s : symbols_) {
    if (s.name == name) out.push_back(s.id);
  }
  return out;
}

const std::vector<SymbolId>& SymbolTable::call_targets(NodeId call) const {
  static const std::vector<SymbolId> kNone;
  auto it = call_targets_.find(call);
  return it == call_targets_.end() ? kNone : it->second;
}

namespace {

std::string normalize_param_type(std::string t) {
  std::string out;
  for (std::size_t i = 0; i < t.size();) {
    if (t.compare(i, 6, "const ") == 0) {
      i += 6;
      continue;
    }
    if (t.compare(i, 2, "[]") == 0) {
      out += '*';
      i += 2;
      continue;
    }
    if (t[i] != ' ') out += t[i];
    ++i;
  }
  return out;
}

}  // namespace

bool SymbolTable::compatible(const std::vector<ParamInfo>& a, const std::vector<ParamInfo>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].type_text == "external" || b[i].type_text == "external") continue;
    if (normalize_param_type(a[i].type_text) != normalize_param_type(b[i].type_text)) return false;
  }
  return true;
}

class SymbolBuilder {
 public:
  SymbolBuilder(const SyntaxTree& tree, SymbolTable& table) : t_(tree), st_(table) {}

  void run() {
    new_scope(ScopeKind::Global, std::nullopt, "", t_.root().id, std::nullopt);
    for (NodeId item : t_.root().children) declare_item(item, 0);
    for (const auto& [node, scope] : pending_bodies_) walk_function(node, scope);
    for (const auto& [node, scope] : pending_global_inits_) walk_expr(node, scope);
    resolve_indirect_calls();
  }

 private:
  // ---- bookkeeping --------------------------------------------------------

  ScopeId new_scope(ScopeKind kind, std::optional<ScopeId> parent, std::string name, NodeId node,
                    std::optional<SymbolId> owner) {
    Scope s;
    s.id = static_cast<ScopeId>(st_.scopes_.size());
    s.parent = parent;
    s.kind = kind;
    s.name = std::move(name);
    s.node = node;
    s.owner = owner;
    st_.scopes_.push_back(std::move(s));
    return st_.scopes_.back().id;
  }

  SymbolId add_symbol(Symbol s, ScopeId scope, const std::string& key_prefix = {}) {
    s.id = static_cast<SymbolId>(st_.symbols_.size());
    s.scope = scope;
    if (s.qualified_name.empty()) s.qualified_name = qualify(scope, s.name);
    st_.scopes_[scope].names[key_prefix + s.name].push_back(s.id);
    if (su::is_identifier_kind(t_.node(s.decl_node).kind) || !s.is_external) st_.bindings_[s.decl_node] = s.id;
    st_.symbols_.push_back(std::move(s));
    return st_.symbols_.back().id;
  }

  std::string qualify(ScopeId scope, const std::string& name) const {
    std::string prefix;
    std::optional<ScopeId> s = scope;
    while (s) {
      const Scope& sc = st_.scopes_[*s];
      if ((sc.kind == ScopeKind::Namespace || sc.kind == ScopeKind::Class) && !sc.name.empty()) {
        prefix = sc.name + "::" + prefix;
      }
      if (sc.kind == ScopeKind::Function || sc.kind == ScopeKind::Block) return name;
      s = sc.parent;
    }
    return prefix + name;
  }

  Symbol& sym(SymbolId id) { return st_.symbols_[id]; }

  void bind_use(NodeId node, SymbolId id) {
    if (st_.bindings_.contains(node)) return;
    st_.bindings_[node] = id;
    sym(id).use_nodes.push_back(node);
  }

  void bind_redecl(NodeId node, SymbolId id) {
    if (st_.bindings_.contains(node)) return;
    st_.bindings_[node] = id;
    sym(id).redeclarations.push_back(node);
  }

  void diag(DiagnosticCategory c, NodeId at, std::string message) {
    const LineOrigin o = t_.origin_start(at);
    st_.diagnostics_.push_back(make_diagnostic(c, o.file, o.line, std::move(message)));
  }

  std::string text(NodeId id) const { return text_util::collapse_whitespace(t_.text(id)); }
  const std::string& kind(NodeId id) const { return t_.node(id).kind; }
  bool cpp() const { return t_.unit().lang == Lang::Cpp; }

  std::vector<SymbolId> scope_names(ScopeId scope, std::string_view name) const {
    const auto& names = st_.scopes_[scope].names;
    auto it = names.find(name);
    return it == names.end() ? std::vector<SymbolId>{} : it->second;
  }

  // All same-named candidates in the nearest scope that declares the name.
  std::vector<SymbolId> lookup_all(ScopeId from, std::string_view name) const {
    std::optional<ScopeId> s = from;
    while (s) {
      auto found = scope_names(*s, name);
      if (!found.empty()) return found;
      // members of base classes
      if (auto owner = st_.scopes_[*s].owner; owner && st_.scopes_[*s].kind == ScopeKind::Class) {
        auto inherited = lookup_in_bases(*owner, name);
        if (!inherited.empty()) return inherited;
      }
      s = st_.scopes_[*s].parent;
    }
    return {};
  }

  std::vector<SymbolId> lookup_in_bases(SymbolId record, std::string_view name, int depth = 0) const {
    if (depth > 16) return {};
    auto it = bases_.find(record);
    if (it == bases_.end()) return {};
    for (SymbolId base : it->second) {
      if (auto ms = st_.symbols_[base].member_scope) {
        auto found = scope_names(*ms, name);
        if (!found.empty()) return found;
      }
      auto deeper = lookup_in_bases(base, name, depth + 1);
      if (!deeper.empty()) return deeper;
    }
    return {};
  }

  std::vector<SymbolId> members_named(SymbolId record, std::string_view name) const {
    const Symbol& r = st_.symbols_[record];
    if (r.member_scope) {
      auto found = scope_names(*r.member_scope, name);
      if (!found.empty()) return found;
    }
    return lookup_in_bases(record, name);
  }

  // ---- types --------------------------------------------------------------

  std::string resolve_typedef(const std::string& name) const {
    auto it = st_.typedefs_.find(name);
    return it == st_.typedefs_.end() ? name : it->second;
  }

  std::string record_type_text(NodeId spec, ScopeId scope) {
    const SymbolId rec = declare_record(spec, scope);
    const Symbol& r = sym(rec);
    if (cpp()) return r.name;
    const std::string& k = kind(spec);
    const std::string keyword = k == "union_specifier" ? "union " : k == "enum_specifier" ? "enum " : "struct ";
    return keyword + r.name;
  }

  // Base type of a declaration-like node (declaration, parameter_declaration,
  // field_declaration, type_definition, type_descriptor).
  std::string base_type(NodeId decl, ScopeId scope, std::optional<Signature>* typedef_sig = nullptr) {
    std::string qualifiers;
    std::string base;
    for (NodeId c : t_.node(decl).children) {
      if (t_.node(c).field == "declarator") continue;
      const std::string& k = kind(c);
      if (k == "type_qualifier") {
        qualifiers += text(c) + " ";
      } else if (k == "primitive_type" || k == "sized_type_specifier") {
        base = text(c);
      } else if (k == "type_identifier") {
        const std::string name = text(c);
        base = resolve_typedef(name);
        if (typedef_sig) {
          auto it = typedef_sigs_.find(name);
          if (it != typedef_sigs_.end()) *typedef_sig = it->second;
        }
        // a C++ class name used as a type
        if (auto rec = find_record(scope, name)) bind_use(c, *rec);
      } else if (k == "qualified_identifier" || k == "template_type") {
        base = text(c);
      } else if (k == "struct_specifier" || k == "union_specifier" || k == "class_specifier" ||
                 k == "enum_specifier") {
        base = record_type_text(c, scope);
      }
    }
    if (base.empty()) base = "int";
    return qualifiers + base;
  }

  struct DeclaratorInfo {
    std::string suffix;
    bool pointer = false;
    bool reference = false;
    bool array = false;
    std::optional<NodeId> fn_pointer_params;  // parameter_list of a function pointer
  };

  DeclaratorInfo declarator_info(NodeId d) const {
    DeclaratorInfo info;
    std::optional<NodeId> cur = d;
    while (cur) {
      const std::string& k = kind(*cur);
      if (k == "pointer_declarator" || k == "abstract_pointer_declarator") {
        info.suffix += "*";
        info.pointer = true;
      } else if (k == "reference_declarator" || k == "abstract_reference_declarator") {
        info.suffix += "&";
        info.reference = true;
      } else if (k == "array_declarator" || k == "abstract_array_declarator") {
        info.suffix += "[]";
        info.array = true;
      } else if (k == "function_declarator" || k == "abstract_function_declarator") {
        auto inner = su::inner_declarator(t_, *cur);
        if (inner && kind(*inner).find("parenthesized_declarator") != std::string::npos) {
          info.fn_pointer_params = t_.first_child_of_kind(*cur, "parameter_list");
          info.suffix += "(" + std::to_string(count_params(*info.fn_pointer_params)) + ")";
        }
      } else if (su::is_identifier_kind(k) || k == "qualified_identifier") {
        break;
      }
      cur = su::inner_declarator(t_, *cur);
    }
    return info;
  }

  std::size_t count_params(NodeId list) const {
    std::size_t n = 0;
    for (NodeId c : t_.node(list).children) {
      const auto& k = kind(c);
      if (k == "parameter_declaration" || k == "optional_parameter_declaration") ++n;
    }
    if (n == 1) {
      for (NodeId c : t_.node(list).children) {
        if (kind(c) == "parameter_declaration" && t_.named_children(c).size() == 1 && text(c) == "void") return 0;
      }
    }
    return n;
  }

  Signature signature_from(NodeId param_list, const std::string& return_type, ScopeId scope) {
    Signature sig;
    sig.return_type = return_type;
    for (NodeId c : t_.node(param_list).children) {
      const auto& k = kind(c);
      if (k == "variadic_parameter") {
        sig.variadic = true;
        continue;
      }
      if (k != "parameter_declaration" && k != "optional_parameter_declaration") continue;
      ParamInfo p = param_info(c, scope);
      if (p.type_text == "void" && p.name.empty() && !p.is_pointer) continue;
      sig.params.push_back(std::move(p));
    }
    return sig;
  }

  ParamInfo param_info(NodeId param, ScopeId scope) {
    ParamInfo p;
    std::optional<Signature> tsig;
    const std::string base = base_type(param, scope, &tsig);
    auto d = t_.child(param, "declarator");
    DeclaratorInfo info;
    if (d) {
      info = declarator_info(*d);
      if (auto name = su::declarator_name(t_, *d)) p.name = text(*name);
    }
    p.type_text = base + info.suffix;
    p.is_reference = info.reference;
    p.is_pointer = info.pointer || info.array || base.ends_with("*") || info.fn_pointer_params.has_value();
    p.is_const = base.starts_with("const ") || base.find(" const") != std::string::npos;
    return p;
  }

  std::optional<SymbolId> find_record(ScopeId scope, std::string_view name) const {
    for (SymbolId id : lookup_all(scope, name)) {
      const auto k = st_.symbols_[id].kind;
      if (k == SymbolKind::Struct || k == SymbolKind::Class || k == SymbolKind::Union || k == SymbolKind::Enum) {
        return id;
      }
    }
    auto tag = lookup_all(scope, "struct " + std::string(name));
    if (!tag.empty()) return tag.front();
    return std::nullopt;
  }

  // Record symbol named by a type text such as "const struct Node*".
  std::optional<SymbolId> record_of_type(std::string type, ScopeId scope) const {
    for (const char* prefix : {"const ", "volatile ", "struct ", "class ", "union ", "enum "}) {
      const std::string p(prefix);
      while (type.starts_with(p)) type = type.substr(p.size());
    }
    while (!type.empty() && (type.back() == '*' || type.back() == '&' || type.back() == ' ' || type.back() == ']' ||
                             type.back() == '[')) {
      type.pop_back();
    }
    if (type.ends_with(" const")) type.resize(type.size() - 6);
    if (auto pos = type.rfind("::"); pos != std::string::npos) type = type.substr(pos + 2);
    if (type.empty()) return std::nullopt;
    if (auto r = find_record(scope, type)) return r;
    for (const Symbol& s : st_.symbols_) {
      if ((s.kind == SymbolKind::Struct || s.kind == SymbolKind::Class || s.kind == SymbolKind::Union) &&
          s.name == type && s.member_scope) {
        return s.id;
      }
    }
    return std::nullopt;
  }

  // ---- pass 1: declarations ----------------------------------------------

  void declare_item(NodeId item, ScopeId scope) {
    const std::string& k = kind(item);
    if (k == "function_definition") {
      declare_function_definition(item, scope);
    } else if (k == "declaration" || k == "field_declaration") {
      declare_declaration(item, scope, /*local=*/false);
    } else if (k == "type_definition") {
      declare_typedef(item, scope);
    } else if (k == "alias_declaration") {
      if (auto name = t_.child(item, "name")) {
        std::string target = "external";
        if (auto ty = t_.child(item, "type")) target = base_type(*ty, scope);
        st_.typedefs_[text(*name)] = target;
        Symbol s;
        s.name = text(*name);
        s.kind = SymbolKind::Typedef;
        s.type_text = target;
        s.decl_node = *name;
        add_symbol(std::move(s), scope);
      }
    } else if (k == "namespace_definition") {
      std::string name;
      std::optional<NodeId> name_node;
      for (NodeId c : t_.children_with_field(item, "name")) {
        name_node = c;
        name += (name.empty() ? "" : "::") + text(c);
      }
      ScopeId ns = namespace_scope(scope, name, item, name_node);
      if (auto body = t_.child(item, "body")) {
        for (NodeId c : t_.node(*body).children) declare_item(c, ns);
      }
    } else if (k == "linkage_specification") {
      if (auto body = t_.child(item, "body")) {
        if (kind(*body) == "declaration_list") {
          for (NodeId c : t_.node(*body).children) declare_item(c, scope);
        } else {
          declare_item(*body, scope);
        }
      }
    }
  }

  ScopeId namespace_scope(ScopeId parent, const std::string& name, NodeId node, std::optional<NodeId> name_node) {
    for (SymbolId id : scope_names(parent, name)) {
      const Symbol& s = sym(id);
      if (s.kind == SymbolKind::Namespace && s.member_scope) {
        if (name_node) bind_redecl(*name_node, id);
        return *s.member_scope;
      }
    }
    Symbol s;
    s.name = name;
    s.kind = SymbolKind::Namespace;
    s.type_text = "namespace";
    s.decl_node = name_node ? *name_node : node;
    const SymbolId id = add_symbol(std::move(s), parent);
    const ScopeId ns = new_scope(ScopeKind::Namespace, parent, name, node, id);
    sym(id).member_scope = ns;
    return ns;
  }

  SymbolId declare_record(NodeId spec, ScopeId scope) {
    if (auto it = record_of_spec_.find(spec); it != record_of_spec_.end()) return it->second;
    const std::string& k = kind(spec);
    SymbolKind sk = k == "class_specifier"   ? SymbolKind::Class
                    : k == "union_specifier" ? SymbolKind::Union
                    : k == "enum_specifier"  ? SymbolKind::Enum
                                             : SymbolKind::Struct;
    if (cpp() && sk == SymbolKind::Struct) sk = SymbolKind::Class;
    auto name_node = t_.child(spec, "name");
    auto body = t_.child(spec, "body");
    std::string name = name_node ? text(*name_node) : "anon$" + std::to_string(spec.value);
    if (name_node && kind(*name_node) == "qualified_identifier") name = text(su::innermost_name(t_, *name_node));

    // C tags live in their own namespace; C++ class names are ordinary names.
    const std::string key_prefix = cpp() ? "" : (sk == SymbolKind::Enum ? "enum " : "struct ");
    std::optional<SymbolId> existing;
    if (name_node) {
      for (SymbolId id : body ? scope_names(scope, key_prefix + name) : lookup_all(scope, key_prefix + name)) {
        const auto ek = sym(id).kind;
        if (ek == SymbolKind::Struct || ek == SymbolKind::Class || ek == SymbolKind::Union || ek == SymbolKind::Enum) {
          existing = id;
        }
      }
    }
    SymbolId id;
    if (existing) {
      id = *existing;
      if (name_node) {
        if (body && !sym(id).member_scope) {
          // forward declaration completed here
          bind_redecl(*name_node, id);
        } else {
          bind_use(su::innermost_name(t_, *name_node), id);
        }
      }
    } else {
      Symbol s;
      s.name = name;
      s.kind = sk;
      s.type_text = (cpp() ? "" : std::string(key_prefix)) + name;
      s.decl_node = name_node ? su::innermost_name(t_, *name_node) : spec;
      id = add_symbol(std::move(s), scope, key_prefix);
    }
    record_of_spec_[spec] = id;
    if (!body) return id;

    if (sk == SymbolKind::Enum) {
      for (NodeId e : t_.node(*body).children) {
        if (kind(e) != "enumerator") continue;
        auto en = t_.child(e, "name");
        if (!en) continue;
        Symbol s;
        s.name = text(*en);
        s.kind = SymbolKind::Enumerator;
        s.type_text = sym(id).type_text;
        s.decl_node = *en;
        add_symbol(std::move(s), scope);
        if (auto v = t_.child(e, "value")) pending_global_inits_.emplace_back(*v, scope);
      }
      return id;
    }

    if (auto bases = t_.first_child_of_kind(spec, "base_class_clause")) {
      for (NodeId b : t_.named_children(*bases)) {
        const auto& bk = kind(b);
        if (bk == "type_identifier" || bk == "qualified_identifier" || bk == "template_type") {
          const NodeId leaf = su::innermost_name(t_, b);
          if (auto r = find_record(scope, text(leaf))) {
            bases_[id].push_back(*r);
            bind_use(leaf, *r);
          }
        }
      }
    }
    const ScopeId members = new_scope(ScopeKind::Class, scope, name, spec, id);
    sym(id).member_scope = members;
    for (NodeId m : t_.node(*body).children) {
      const auto& mk = kind(m);
      if (mk == "field_declaration" || mk == "declaration") {
        declare_declaration(m, members, false);
      } else if (mk == "function_definition") {
        declare_function_definition(m, members);
      } else if (mk == "type_definition") {
        declare_typedef(m, members);
      } else if (mk == "alias_declaration") {
        declare_item(m, members);
      }
    }
    return id;
  }

  bool in_class(ScopeId scope) const { return st_.scopes_[scope].kind == ScopeKind::Class; }

  std::optional<SymbolId> class_of_scope(ScopeId scope) const {
    std::optional<ScopeId> s = scope;
    while (s) {
      if (st_.scopes_[*s].kind == ScopeKind::Class) return st_.scopes_[*s].owner;
      s = st_.scopes_[*s].parent;
    }
    return std::nullopt;
  }

  void declare_typedef(NodeId def, ScopeId scope) {
    std::optional<Signature> tsig;
    const std::string base = base_type(def, scope, &tsig);
    for (NodeId d : t_.children_with_field(def, "declarator")) {
      auto name = su::declarator_name(t_, d);
      if (!name) continue;
      DeclaratorInfo info = declarator_info(d);
      const std::string n = text(*name);
      st_.typedefs_[n] = base + info.suffix;
      if (info.fn_pointer_params) {
        typedef_sigs_[n] = signature_from(*info.fn_pointer_params, base, scope);
      } else if (auto fd = su::function_declarator(t_, d)) {
        // function type typedef: `typedef int fn(int);`
        if (auto pl = t_.first_child_of_kind(*fd, "parameter_list")) {
          typedef_sigs_[n] = signature_from(*pl, base, scope);
        }
      } else if (tsig && info.suffix.empty()) {
        typedef_sigs_[n] = *tsig;
      }
      Symbol s;
      s.name = n;
      s.kind = SymbolKind::Typedef;
      s.type_text = base + info.suffix;
      s.decl_node = *name;
      add_symbol(std::move(s), scope);
    }
  }

  static bool has_storage(const SyntaxTree& t, NodeId decl, std::string_view word) {
    for (NodeId c : t.node(decl).children) {
      if (t.node(c).kind == "storage_class_specifier" && t.text(c) == word) return true;
    }
    return false;
  }

  // Declarations at any level. Block-level (local) declarations are walked
  // in order by pass 2 so that initializers see the new name.
  void declare_declaration(NodeId decl, ScopeId scope, bool local) {
    std::optional<Signature> tsig;
    const std::string base = base_type(decl, scope, &tsig);
    if (base.find("thread") != std::string::npos || base.find("mutex") != std::string::npos ||
        base.starts_with("pthread_") || base.starts_with("mtx_")) {
      diag(DiagnosticCategory::Multithreading, decl, "thread or lock object of type '" + base + "'");
    }
    const bool is_static = has_storage(t_, decl, "static");
    const bool member = in_class(scope);
    for (NodeId c : t_.node(decl).children) {
      const std::string& ck = kind(c);
      NodeId d = c;
      std::optional<NodeId> value;
      if (ck == "init_declarator") {
        auto inner = t_.child(c, "declarator");
        if (!inner) continue;
        d = *inner;
        value = t_.child(c, "value");
      } else if (t_.node(c).field != "declarator") {
        continue;
      }
      if (auto fd = su::function_declarator(t_, d)) {
        declare_prototype(d, *fd, base, scope);
        continue;
      }
      auto name = su::declarator_name(t_, d);
      if (!name) continue;
      DeclaratorInfo info = declarator_info(d);
      if (local) {
        // array sizes are expressions in the enclosing scope
        walk_declarator_sizes(d, scope);
      }
      Symbol s;
      s.name = text(su::innermost_name(t_, *name));
      s.kind = member ? SymbolKind::MemberVariable : SymbolKind::Variable;
      s.type_text = base + info.suffix;
      s.decl_node = su::innermost_name(t_, *name);
      s.is_pointer = info.pointer || base.ends_with("*") || info.fn_pointer_params.has_value();
      s.is_reference = info.reference;
      s.is_array = info.array;
      if (info.fn_pointer_params) {
        s.fn_pointer = signature_from(*info.fn_pointer_params, base, scope);
      } else if (tsig && info.suffix.empty()) {
        s.fn_pointer = tsig;
      } else if (tsig && info.array) {
        s.fn_pointer = tsig;  // array of function pointers
      }
      if (member) s.owner = st_.scopes_[scope].owner;
      if (local && is_static) {
        s.is_static_local = true;
        diag(DiagnosticCategory::StaticVariables, decl,
             "function-local static '" + s.name + "' keeps state across calls; lifetime not modeled");
      }
      SymbolId id;
      std::optional<SymbolId> prior;
      if (!local) {
        for (SymbolId p : scope_names(scope, s.name)) {
          if (sym(p).is_object()) prior = p;
        }
      }
      if (prior) {
        id = *prior;
        bind_redecl(s.decl_node, id);
      } else {
        id = add_symbol(std::move(s), scope);
      }
      if (value) {
        if (local) {
          walk_expr(*value, scope);
        } else {
          pending_global_inits_.emplace_back(*value, scope);
        }
        record_constructor_call(c, *value, id, scope);
      } else if (local && !member) {
        record_constructor_call(c, std::nullopt, id, scope);
      }
    }
  }

  void walk_declarator_sizes(NodeId d, ScopeId scope) {
    std::optional<NodeId> cur = d;
    while (cur) {
      if (auto size = t_.child(*cur, "size")) walk_expr(*size, scope);
      cur = su::inner_declarator(t_, *cur);
    }
  }

  // `A obj(args);` / `A obj;` / `A obj{...}` call a constructor when one is declared.
  void record_constructor_call(NodeId site, std::optional<NodeId> value, SymbolId var, ScopeId scope) {
    if (!cpp()) return;
    const Symbol& v = sym(var);
    if (v.is_pointer || v.is_reference) return;
    auto rec = record_of_type(v.type_text, scope);
    if (!rec) return;
    std::size_t arity = 0;
    if (value) {
      const auto& vk = kind(*value);
      if (vk != "argument_list" && vk != "initializer_list") return;
      arity = t_.named_children(*value).size();
    }
    auto ctors = members_named(*rec, sym(*rec).name);
    auto chosen = pick_by_arity(ctors, arity);
    if (chosen) st_.call_targets_[site] = {*chosen};
  }

  std::optional<SymbolId> pick_by_arity(const std::vector<SymbolId>& candidates, std::size_t arity) const {
    std::optional<SymbolId> first_fn;
    for (SymbolId id : candidates) {
      const Symbol& s = st_.symbols_[id];
      if (!s.is_function()) continue;
      if (!first_fn) first_fn = id;
      if (s.params.size() == arity || (s.variadic && arity >= s.params.size())) return id;
    }
    return first_fn;
  }

  void declare_prototype(NodeId declarator, NodeId fd, const std::string& base, ScopeId scope) {
    auto name = su::declarator_name(t_, declarator);
    if (!name) return;
    auto params = t_.first_child_of_kind(fd, "parameter_list");
    DeclaratorInfo outer = declarator_info(declarator);
    Signature sig = params ? signature_from(*params, base + outer.suffix, scope) : Signature{};
    find_or_add_function(*name, sig, scope, std::nullopt);
  }

  // Finds the function a declaration or definition name refers to, merging
  // prototypes with definitions; creates it when new.
  SymbolId find_or_add_function(NodeId name_node, const Signature& sig, ScopeId scope,
                                std::optional<NodeId> definition) {
    ScopeId owner_scope = scope;
    NodeId leaf = name_node;
    if (kind(name_node) == "qualified_identifier") {
      // A::f or ns::f: find the scope named by the qualifier chain.
      std::optional<ScopeId> target = scope;
      NodeId cur = name_node;
      while (kind(cur) == "qualified_identifier") {
        auto sc = t_.child(cur, "scope");
        auto nm = t_.child(cur, "name");
        if (!nm) break;
        if (sc && target) {
          std::optional<ScopeId> next;
          for (SymbolId id : lookup_all(*target, text(*sc))) {
            if (sym(id).member_scope) {
              next = sym(id).member_scope;
              bind_use(*sc, id);
              break;
            }
          }
          target = next;
        }
        cur = *nm;
      }
      leaf = cur;
      if (target) owner_scope = *target;
    }
    const std::string name = kind(leaf) == "destructor_name" || kind(leaf) == "operator_name"
                                 ? text(leaf)
                                 : text(su::innermost_name(t_, leaf));
    const bool member = in_class(owner_scope);
    for (SymbolId id : scope_names(owner_scope, name)) {
      Symbol& s = sym(id);
      if (!s.is_function()) continue;
      if (cpp() && s.params.size() != sig.params.size() && !(s.variadic || sig.variadic)) continue;
      if (definition && s.definition) continue;  // distinct overload with a body
      if (definition) {
        s.definition = definition;
        s.params = sig.params;
        s.type_text = sig.return_type;
        st_.definitions_[*definition] = id;
      }
      bind_redecl(leaf, id);
      return id;
    }
    Symbol s;
    s.name = name;
    s.kind = member ? SymbolKind::MemberFunction : SymbolKind::Function;
    s.type_text = sig.return_type;
    s.decl_node = leaf;
    s.params = sig.params;
    s.variadic = sig.variadic;
    s.definition = definition;
    if (member) s.owner = st_.scopes_[owner_scope].owner;
    const SymbolId id = add_symbol(std::move(s), owner_scope);
    if (definition) st_.definitions_[*definition] = id;
    return id;
  }

  void declare_function_definition(NodeId def, ScopeId scope) {
    auto declarator = t_.child(def, "declarator");
    if (!declarator) return;
    auto fd = su::function_declarator(t_, *declarator);
    if (!fd) return;
    auto name = su::declarator_name(t_, *declarator);
    if (!name) return;
    const std::string base = base_type(def, scope);
    DeclaratorInfo outer = declarator_info(*declarator);
    auto params = t_.first_child_of_kind(*fd, "parameter_list");
    Signature sig = params ? signature_from(*params, base + outer.suffix, scope) : Signature{};
    const SymbolId fn = find_or_add_function(*name, sig, scope, def);

    // Member bodies see the class scope; out-of-line ones too.
    const ScopeId parent = sym(fn).scope;
    const ScopeId body = new_scope(ScopeKind::Function, parent, sym(fn).name, def, fn);
    sym(fn).body_scope = body;
    sym(fn).param_symbols.clear();
    if (params) {
      for (NodeId p : t_.node(*params).children) {
        const auto& pk = kind(p);
        if (pk != "parameter_declaration" && pk != "optional_parameter_declaration") continue;
        auto pd = t_.child(p, "declarator");
        if (!pd) continue;
        auto pname = su::declarator_name(t_, *pd);
        if (!pname) continue;
        ParamInfo info = param_info(p, body);
        Symbol s;
        s.name = info.name;
        s.kind = SymbolKind::Parameter;
        s.type_text = info.type_text;
        s.decl_node = *pname;
        s.is_pointer = info.is_pointer;
        s.is_reference = info.is_reference;
        DeclaratorInfo di = declarator_info(*pd);
        s.is_array = di.array;
        if (di.fn_pointer_params) {
          s.fn_pointer = signature_from(*di.fn_pointer_params, "external", body);
        } else {
          std::optional<Signature> tsig;
          base_type(p, body, &tsig);
          if (tsig && di.suffix.empty()) s.fn_pointer = tsig;
        }
        const SymbolId pid = add_symbol(std::move(s), body);
        sym(fn).param_symbols.push_back(pid);
      }
    }
    pending_bodies_.emplace_back(def, body);
  }

  // ---- pass 2: bodies -----------------------------------------------------

  void walk_function(NodeId def, ScopeId body_scope) {
    // labels are function-scoped and may be used before their definition
    if (auto body = t_.child(def, "body")) {
      t_.walk(*body, [&](const SyntaxNode& n) {
        if (n.kind == "labeled_statement") {
          if (auto label = t_.child(n.id, "label")) {
            Symbol s;
            s.name = text(*label);
            s.kind = SymbolKind::Label;
            s.type_text = "label";
            s.decl_node = *label;
            add_symbol(std::move(s), body_scope, "label:");
          }
        }
        return n.kind != "unsupported_construct";
      });
    }
    if (auto inits = t_.first_child_of_kind(def, "field_initializer_list")) {
      const auto cls = class_of_scope(body_scope);
      for (NodeId fi : t_.node(*inits).children) {
        if (kind(fi) != "field_initializer") continue;
        for (NodeId c : t_.node(fi).children) {
          const auto& ck = kind(c);
          if (ck == "field_identifier" && cls) {
            auto members = members_named(*cls, text(c));
            if (!members.empty()) bind_use(c, members.front());
            else if (auto base = find_record(body_scope, text(c))) bind_use(c, *base);
          } else if (ck == "argument_list" || ck == "initializer_list") {
            walk_expr(c, body_scope);
          }
        }
      }
    }
    if (auto body = t_.child(def, "body")) walk_block_items(*body, body_scope);
  }

  void walk_block_items(NodeId block, ScopeId scope) {
    for (NodeId c : t_.node(block).children) walk_stmt(c, scope);
  }

  void walk_stmt(NodeId s, ScopeId scope) {
    const std::string& k = kind(s);
    if (!t_.node(s).named) return;
    if (k == "compound_statement") {
      const ScopeId inner = new_scope(ScopeKind::Block, scope, "", s, std::nullopt);
      walk_block_items(s, inner);
      return;
    }
    if (k == "for_statement" || k == "for_range_loop") {
      const ScopeId inner = new_scope(ScopeKind::Block, scope, "", s, std::nullopt);
      for (NodeId c : t_.node(s).children) {
        const auto& ck = kind(c);
        if (ck == "declaration") {
          declare_declaration(c, inner, true);
        } else if (t_.node(c).field == "body") {
          walk_stmt(c, inner);
        } else if (k == "for_range_loop" && t_.node(c).field == "declarator") {
          declare_range_variable(s, c, inner);
        } else if (t_.node(c).named && ck != "primitive_type" && ck != "type_qualifier" &&
                   ck != "type_identifier" && ck != "sized_type_specifier" && ck != "storage_class_specifier") {
          walk_expr(c, inner);
        }
      }
      return;
    }
    if (k == "declaration") {
      declare_declaration(s, scope, true);
      return;
    }
    if (k == "type_definition") {
      declare_typedef(s, scope);
      return;
    }
    if (k == "alias_declaration") {
      declare_item(s, scope);
      return;
    }
    if (k == "unsupported_construct" || k == "using_declaration") return;
    if (k == "goto_statement") {
      if (auto label = t_.child(s, "label")) {
        if (kind(*label) == "statement_identifier") {
          for (SymbolId id : lookup_all(scope, "label:" + text(*label))) {
            bind_use(*label, id);
            break;
          }
        } else {
          walk_expr(*label, scope);
        }
      }
      return;
    }
    if (k == "labeled_statement") {
      for (NodeId c : t_.node(s).children) {
        if (t_.node(c).field != "label") walk_stmt(c, scope);
      }
      return;
    }
    if (k == "if_statement" || k == "while_statement" || k == "switch_statement") {
      // condition declarations are scoped to the statement
      const ScopeId inner = new_scope(ScopeKind::Block, scope, "", s, std::nullopt);
      for (NodeId c : t_.node(s).children) {
        if (t_.node(c).field == "condition") {
          walk_condition(c, inner);
        } else {
          walk_stmt(c, inner);
        }
      }
      return;
    }
    if (k == "do_statement" || k == "case_statement") {
      for (NodeId c : t_.node(s).children) {
        if (t_.node(c).field == "condition" || t_.node(c).field == "value") {
          walk_expr(c, scope);
        } else {
          walk_stmt(c, scope);
        }
      }
      return;
    }
    if (k == "expression_statement" || k == "return_statement") {
      for (NodeId c : t_.node(s).children) walk_expr(c, scope);
      return;
    }
    if (k == "break_statement" || k == "continue_statement") return;
    walk_expr(s, scope);
  }

  void walk_condition(NodeId cond, ScopeId scope) {
    if (kind(cond) == "condition_clause") {
      for (NodeId c : t_.node(cond).children) {
        if (kind(c) == "condition_declaration") {
          declare_declaration(c, scope, true);
        } else {
          walk_expr(c, scope);
        }
      }
      return;
    }
    walk_expr(cond, scope);
  }

  void declare_range_variable(NodeId loop, NodeId d, ScopeId scope) {
    std::optional<Signature> tsig;
    const std::string base = base_type(loop, scope, &tsig);
    auto name = su::declarator_name(t_, d);
    if (!name) return;
    DeclaratorInfo info = declarator_info(d);
    Symbol s;
    s.name = text(*name);
    s.kind = SymbolKind::Variable;
    s.type_text = base + info.suffix;
    s.decl_node = *name;
    s.is_reference = info.reference;
    s.is_pointer = info.pointer;
    add_symbol(std::move(s), scope);
  }

  bool is_thread_name(std::string_view name) const {
    return name.starts_with("pthread_") || name.starts_with("thrd_") || name.starts_with("mtx_") ||
           name.starts_with("cnd_") || name == "std::thread" || name == "std::mutex" || name == "std::async" ||
           name == "std::jthread" || name == "std::lock_guard" || name == "std::unique_lock";
  }

  // name is the spelled (possibly qualified) name; the symbol's own name is
  // the identifier text at use.
  SymbolId external(NodeId use, const std::string& name, bool as_function) {
    if (auto it = externals_.find(name); it != externals_.end()) return it->second;
    Symbol s;
    s.name = text(use);
    s.qualified_name = name;
    s.kind = as_function ? SymbolKind::Function : SymbolKind::Variable;
    s.type_text = "external";
    s.decl_node = use;
    s.is_external = true;
    const SymbolId id = static_cast<SymbolId>(st_.symbols_.size());
    s.id = id;
    s.scope = 0;
    st_.symbols_.push_back(std::move(s));
    externals_[name] = id;
    if (is_thread_name(name)) {
      diag(DiagnosticCategory::Multithreading, use, "threading primitive '" + name + "' is not modeled");
    } else {
      diag(DiagnosticCategory::Other, use, "unresolved identifier '" + name + "' treated as external");
    }
    return id;
  }

  // Binds an identifier or qualified name in an expression. Returns the symbol.
  std::optional<SymbolId> bind_name(NodeId n, ScopeId scope, bool callee, std::size_t arity) {
    const std::string& k = kind(n);
    if (k == "identifier") {
      const std::string name = text(n);
      auto cands = lookup_all(scope, name);
      std::optional<SymbolId> chosen;
      if (callee) chosen = pick_by_arity(cands, arity);
      if (!chosen) {
        for (SymbolId id : cands) {
          if (sym(id).kind != SymbolKind::Label) {
            chosen = id;
            break;
          }
        }
      }
      if (!chosen) chosen = external(n, name, callee);
      if (sym(*chosen).is_external && sym(*chosen).decl_node == n) {
        st_.bindings_[n] = *chosen;
      } else {
        bind_use(n, *chosen);
      }
      if (is_thread_name(name) && !sym(*chosen).is_external) {
        diag(DiagnosticCategory::Multithreading, n, "threading primitive '" + name + "' is not modeled");
      }
      return chosen;
    }
    if (k == "qualified_identifier") {
      // walk scopes named by the qualifier; fall back to an external
      std::optional<ScopeId> target = 0;
      NodeId cur = n;
      bool global = t_.node(n).children.size() > 0 && kind(t_.node(n).children.front()) == "::";
      std::optional<ScopeId> start = global ? std::optional<ScopeId>(0) : std::optional<ScopeId>(scope);
      target = start;
      while (kind(cur) == "qualified_identifier") {
        auto sc = t_.child(cur, "scope");
        auto nm = t_.child(cur, "name");
        if (!nm) break;
        if (sc && target) {
          std::optional<ScopeId> next;
          for (SymbolId id : lookup_all(*target, text(*sc))) {
            if (sym(id).member_scope) {
              next = sym(id).member_scope;
              bind_use(*sc, id);
              break;
            }
          }
          target = next;
        }
        cur = *nm;
      }
      if (kind(cur) != "identifier") return std::nullopt;
      if (target) {
        auto cands = scope_names(*target, text(cur));
        std::optional<SymbolId> chosen = callee ? pick_by_arity(cands, arity) : std::nullopt;
        if (!chosen && !cands.empty()) chosen = cands.front();
        if (chosen) {
          bind_use(cur, *chosen);
          return chosen;
        }
      }
      const SymbolId ext = external(cur, text(n), callee);
      if (sym(ext).decl_node == cur) {
        st_.bindings_[cur] = ext;
      } else {
        bind_use(cur, ext);
      }
      return ext;
    }
    return std::nullopt;
  }

  // Static type text of an expression, best effort.
  std::string type_of(NodeId e, ScopeId scope) {
    e = su::strip_parens(t_, e);
    const std::string& k = kind(e);
    if (k == "identifier" || k == "qualified_identifier" || k == "field_identifier") {
      NodeId leaf = su::innermost_name(t_, e);
      if (auto b = st_.binding(leaf)) return sym(*b).type_text;
      return "external";
    }
    if (k == "this") {
      if (auto cls = class_of_scope(scope)) return sym(*cls).name + "*";
      return "external";
    }
    if (k == "field_expression") {
      if (auto f = t_.child(e, "field")) {
        if (auto b = st_.binding(*f)) return sym(*b).type_text;
      }
      return "external";
    }
    if (k == "subscript_expression" || (k == "pointer_expression" && text(t_.node(e).children.front()) == "*")) {
      auto arg = t_.child(e, "argument");
      if (!arg) return "external";
      std::string t = type_of(*arg, scope);
      if (t.ends_with("[]")) return t.substr(0, t.size() - 2);
      if (t.ends_with("*")) return t.substr(0, t.size() - 1);
      return t;
    }
    if (k == "pointer_expression") {
      if (auto arg = t_.child(e, "argument")) return type_of(*arg, scope) + "*";
    }
    if (k == "call_expression") {
      const auto& targets = st_.call_targets(e);
      if (!targets.empty()) return sym(targets.front()).type_text;
      return "external";
    }
    if (k == "cast_expression") {
      if (auto ty = t_.child(e, "type")) return text(*ty);
    }
    if (k == "new_expression") {
      for (NodeId c : t_.node(e).children) {
        if (t_.node(c).field == "type") return text(c) + "*";
      }
    }
    return "external";
  }

  std::optional<SymbolId> bind_field(NodeId fe, ScopeId scope, bool callee, std::size_t arity) {
    auto arg = t_.child(fe, "argument");
    auto field = t_.child(fe, "field");
    if (!arg || !field || kind(*field) != "field_identifier") return std::nullopt;
    const std::string name = text(*field);
    auto rec = record_of_type(type_of(*arg, scope), scope);
    std::vector<SymbolId> cands;
    if (rec) cands = members_named(*rec, name);
    if (cands.empty()) {
      // unknown object type: fall back to a unique member of that name
      std::vector<SymbolId> all;
      for (const Symbol& s : st_.symbols_) {
        if ((s.kind == SymbolKind::MemberVariable || s.kind == SymbolKind::MemberFunction) && s.name == name) {
          all.push_back(s.id);
        }
      }
      if (!all.empty() && std::all_of(all.begin(), all.end(), [&](SymbolId id) {
            return sym(id).owner == sym(all.front()).owner;
          })) {
        cands = all;
      }
    }
    if (cands.empty()) return std::nullopt;
    std::optional<SymbolId> chosen = callee ? pick_by_arity(cands, arity) : std::nullopt;
    if (!chosen) {
      for (SymbolId id : cands) {
        if (sym(id).kind == SymbolKind::MemberVariable) {
          chosen = id;
          break;
        }
      }
    }
    if (!chosen) chosen = cands.front();
    bind_use(*field, *chosen);
    return chosen;
  }

  void mark_address_taken(std::optional<SymbolId> id) {
    if (id && sym(*id).is_function() && !sym(*id).is_external) sym(*id).address_taken = true;
  }

  void walk_expr(NodeId e, ScopeId scope) {
    const SyntaxNode& n = t_.node(e);
    const std::string& k = n.kind;
    if (!n.named) return;
    if (k == "identifier" || k == "qualified_identifier") {
      mark_address_taken(bind_name(e, scope, false, 0));
      return;
    }
    if (k == "field_expression") {
      if (auto arg = t_.child(e, "argument")) walk_expr(*arg, scope);
      mark_address_taken(bind_field(e, scope, false, 0));
      return;
    }
    if (k == "call_expression") {
      walk_call(e, scope);
      return;
    }
    if (k == "new_expression") {
      std::optional<std::string> type_name;
      for (NodeId c : n.children) {
        if (t_.node(c).field == "type") type_name = text(c);
        if (t_.node(c).field == "arguments" || t_.node(c).field == "placement" || kind(c) == "new_declarator") {
          walk_expr(c, scope);
        }
      }
      if (type_name && cpp()) {
        if (auto rec = record_of_type(*type_name, scope)) {
          std::size_t arity = 0;
          if (auto args = t_.child(e, "arguments")) arity = t_.named_children(*args).size();
          if (auto ctor = pick_by_arity(members_named(*rec, sym(*rec).name), arity)) {
            st_.call_targets_[e] = {*ctor};
          }
        }
      }
      return;
    }
    if (k == "sizeof_expression" || k == "alignof_expression" || k == "cast_expression" ||
        k == "compound_literal_expression") {
      for (NodeId c : n.children) {
        if (t_.node(c).field != "type") walk_expr(c, scope);
      }
      return;
    }
    if (k == "initializer_pair") {
      if (auto v = t_.child(e, "value")) walk_expr(*v, scope);
      return;
    }
    if (k == "unsupported_construct" || k == "type_descriptor" || k == "template_argument_list" ||
        k == "primitive_type" || k == "type_identifier" || k == "field_identifier") {
      return;
    }
    for (NodeId c : n.children) walk_expr(c, scope);
  }

  // Resolves a callee expression to function symbols. Sets indirect when the
  // call goes through an object (function pointer) rather than a name.
  void resolve_callee(NodeId callee, ScopeId scope, std::size_t arity, std::vector<SymbolId>& direct,
                      std::vector<std::pair<std::optional<Signature>, std::size_t>>& indirect) {
    callee = su::strip_parens(t_, callee);
    const std::string& k = kind(callee);
    if (k == "identifier" || k == "qualified_identifier") {
      auto id = bind_name(callee, scope, true, arity);
      if (!id) return;
      const Symbol& s = sym(*id);
      if (s.is_function()) {
        if (!s.is_external) direct.push_back(*id);
        return;
      }
      if (s.is_object() && !s.is_external) indirect.emplace_back(s.fn_pointer, arity);
      return;
    }
    if (k == "field_expression") {
      if (auto arg = t_.child(callee, "argument")) walk_expr(*arg, scope);
      auto id = bind_field(callee, scope, true, arity);
      if (!id) return;
      const Symbol& s = sym(*id);
      if (s.is_function()) {
        direct.push_back(*id);
      } else if (s.is_object()) {
        indirect.emplace_back(s.fn_pointer, arity);
      }
      return;
    }
    if (k == "conditional_expression") {
      if (auto c = t_.child(callee, "condition")) walk_expr(*c, scope);
      for (const char* f : {"consequence", "alternative"}) {
        if (auto b = t_.child(callee, f)) {
          resolve_callee(*b, scope, arity, direct, indirect);
          // a function named as a value is address-taken
          for (SymbolId id : direct) sym(id).address_taken = true;
        }
      }
      return;
    }
    if (k == "pointer_expression" || k == "subscript_expression") {
      auto arg = t_.child(callee, "argument");
      if (k == "subscript_expression") {
        if (auto idx = t_.child(callee, "index")) walk_expr(*idx, scope);
      }
      if (arg) {
        const NodeId base = su::strip_parens(t_, *arg);
        if (kind(base) == "identifier" || kind(base) == "field_expression" || kind(base) == "qualified_identifier") {
          std::optional<SymbolId> id = kind(base) == "field_expression" ? (walk_base(base, scope), bind_field(base, scope, false, 0))
                                                                         : bind_name(base, scope, false, 0);
          if (id && sym(*id).is_function() && !sym(*id).is_external) {
            direct.push_back(*id);  // (*f)(x) with f a function
          } else if (id && sym(*id).is_object() && !sym(*id).is_external) {
            indirect.emplace_back(sym(*id).fn_pointer, arity);
          }
          return;
        }
        walk_expr(*arg, scope);
      }
      indirect.emplace_back(std::nullopt, arity);
      return;
    }
    // any other callee expression (call result, cast, ...): treat as pointer
    walk_expr(callee, scope);
    indirect.emplace_back(std::nullopt, arity);
  }

  void walk_base(NodeId fe, ScopeId scope) {
    if (auto arg = t_.child(fe, "argument")) walk_expr(*arg, scope);
  }

  void walk_call(NodeId call, ScopeId scope) {
    auto fn = t_.child(call, "function");
    auto args = t_.child(call, "arguments");
    std::size_t arity = args ? t_.named_children(*args).size() : 0;
    if (args) walk_expr(*args, scope);
    if (!fn) return;
    if (kind(*fn) == "primitive_type") return;  // functional cast
    std::vector<SymbolId> direct;
    std::vector<std::pair<std::optional<Signature>, std::size_t>> indirect;
    resolve_callee(*fn, scope, arity, direct, indirect);
    auto& targets = st_.call_targets_[call];
    targets = direct;
    if (!indirect.empty()) {
      st_.indirect_calls_[call] = true;
      pending_indirect_.push_back({call, indirect});
    }
    if (targets.empty() && indirect.empty()) st_.call_targets_.erase(call);
  }

  void resolve_indirect_calls() {
    std::vector<SymbolId> taken;
    for (const Symbol& s : st_.symbols_) {
      if (s.is_function() && s.address_taken && s.definition) taken.push_back(s.id);
    }
    for (const auto& [call, reqs] : pending_indirect_) {
      std::set<SymbolId> targets(st_.call_targets_[call].begin(), st_.call_targets_[call].end());
      for (const auto& [sig, arity] : reqs) {
        for (SymbolId f : taken) {
          const Symbol& fs = sym(f);
          const bool ok = sig ? SymbolTable::compatible(sig->params, fs.params)
                              : (fs.params.size() == arity || (fs.variadic && arity >= fs.params.size()));
          if (ok) targets.insert(f);
        }
      }
      auto& out = st_.call_targets_[call];
      out.assign(targets.begin(), targets.end());
      std::sort(out.begin(), out.end(), [&](SymbolId a, SymbolId b) {
        return sym(a).definition.value_or(NodeId{}) < sym(b).definition.value_or(NodeId{});
      });
      if (out.empty()) {
        diag(DiagnosticCategory::UnresolvedPointerCall, call,
             "indirect call '" + text(call) + "' has no compatible address-taken target");
      }
    }
  }

  const SyntaxTree& t_;
  SymbolTable& st_;
  std::map<std::string, Signature, std::less<>> typedef_sigs_;
  std::unordered_map<NodeId, SymbolId> record_of_spec_;
  std::map<SymbolId, std::vector<SymbolId>> bases_;
  std::map<std::string, SymbolId, std::less<>> externals_;
  std::vector<std::pair<NodeId, ScopeId>> pending_bodies_;
  std::vector<std::pair<NodeId, ScopeId>> pending_global_inits_;
  struct PendingIndirect {
    NodeId call;
    std::vector<std::pair<std::optional<Signature>, std::size_t>> reqs;
  };
  std::vector<PendingIndirect> pending_indirect_;
};

SymbolTable build_symbol_table(const SyntaxTree& tree) {
  SymbolTable table;
  if (tree.size() == 0) return table;
  SymbolBuilder builder(tree, table);
  builder.run();
  return table;
}

}  // namespace codeviews
