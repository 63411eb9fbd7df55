#include "codeviews/ast_view.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "codeviews/error.hpp"

namespace codeviews {

CodeGraph build_ast(const SyntaxTree& tree, bool full_cst) {
  CodeGraph g;
  g.add_view(View::Ast);
  if (tree.size() == 0) return g;
  tree.walk(tree.root().id, [&](const SyntaxNode& n) {
    if (!n.named && !full_cst) return false;
    g.upsert(graph_node_for(tree, n.id, View::Ast));
    if (n.parent) g.add_edge({*n.parent, n.id, View::Ast, "child"});
    return true;
  });
  g.canonicalize();
  return g;
}

NodeId collapsed_id(const Symbol& s) { return NodeId{kCollapsedBase + s.decl_node.value}; }

CodeGraph collapse_variables(const CodeGraph& g, const SymbolTable& table,
                             const std::optional<std::vector<std::string>>& names) {
  std::vector<SymbolId> targets;
  if (!names) {
    for (const Symbol& s : table.symbols()) {
      if ((s.kind == SymbolKind::Variable || s.kind == SymbolKind::Parameter) && !s.is_external) targets.push_back(s.id);
    }
  } else {
    for (const std::string& name : *names) {
      bool found = false;
      for (SymbolId id : table.symbols_named(name)) {
        const Symbol& s = table.symbol(id);
        if (!s.is_object() || s.is_external) continue;
        targets.push_back(id);
        found = true;
      }
      if (!found) throw Error(ErrorCode::UnknownVariable, "no variable named '" + name + "'");
    }
  }
  std::sort(targets.begin(), targets.end(),
            [&](SymbolId a, SymbolId b) { return table.symbol(a).decl_node < table.symbol(b).decl_node; });
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::map<NodeId, NodeId> replace;
  std::map<NodeId, GraphNode> merged;
  for (SymbolId id : targets) {
    const Symbol& s = table.symbol(id);
    std::vector<NodeId> occ{s.decl_node};
    occ.insert(occ.end(), s.use_nodes.begin(), s.use_nodes.end());
    const NodeId syn = collapsed_id(s);
    for (NodeId o : occ) {
      if (!g.has_node(o) || replace.contains(o)) continue;
      const GraphNode& orig = g.node(o);
      auto [it, fresh] = merged.try_emplace(syn);
      GraphNode& m = it->second;
      if (fresh) {
        m = orig;
        m.id = syn;
        m.kind = "identifier";
        m.label = s.name;
      }
      m.views = m.views | orig.views;
      replace[o] = syn;
    }
  }
  if (replace.empty()) return g;

  CodeGraph out;
  out.meta = g.meta;
  out.set_views(g.views());
  for (const auto& [id, n] : g.nodes()) {
    if (!replace.contains(id)) out.upsert(n);
  }
  for (const auto& [id, n] : merged) out.upsert(n);
  auto mapped = [&](NodeId n) {
    auto it = replace.find(n);
    return it == replace.end() ? n : it->second;
  };
  for (const GraphEdge& e : g.edges()) out.add_edge({mapped(e.src), mapped(e.dst), e.view, e.label});
  out.canonicalize();
  return out;
}

CodeGraph blacklist_nodes(const CodeGraph& g, const std::vector<std::string>& kinds, Diagnostics* diagnostics,
                          const SyntaxTree* tree) {
  std::set<std::string, std::less<>> listed;
  const auto& known = known_node_kinds();
  for (const std::string& k : kinds) {
    if (k.empty()) continue;
    const bool is_known = std::find(known.begin(), known.end(), k) != known.end() || k == "entry" || k == "exit";
    if (!is_known && diagnostics) {
      diagnostics->push_back(
          make_diagnostic(DiagnosticCategory::Other, "", 0, "unknown node kind '" + k + "' in blacklist ignored"));
    }
    listed.insert(k);
  }
  if (listed.empty()) return g;

  std::map<NodeId, std::vector<NodeId>> ast_parents;
  for (const GraphEdge& e : g.edges()) {
    if (e.view == View::Ast) ast_parents[e.dst].push_back(e.src);
  }
  std::set<NodeId> removed;
  // Ascending ids visit parents before children: pre-order numbering, and
  // synthetic ids sort after every CST node.
  for (const auto& [id, n] : g.nodes()) {
    bool drop = listed.contains(n.kind);
    if (!drop && tree && !is_synthetic(id) && tree->contains(id)) {
      for (auto p = tree->node(id).parent; p && !drop; p = tree->node(*p).parent) {
        drop = listed.contains(tree->node(*p).kind);
      }
    } else if (!drop) {
      auto it = ast_parents.find(id);
      if (it != ast_parents.end()) {
        drop = std::all_of(it->second.begin(), it->second.end(), [&](NodeId p) { return removed.contains(p); });
      }
    }
    if (drop) removed.insert(id);
  }
  CodeGraph out = g;
  out.remove_nodes({removed.begin(), removed.end()});
  return out;
}

}  // namespace codeviews
