#include "codeviews/graph.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "codeviews/error.hpp"
#include "text_util.hpp"

namespace codeviews {

bool edge_less(const GraphEdge& a, const GraphEdge& b) {
  return std::forward_as_tuple(view_name(a.view), a.src, a.dst, a.label) <
         std::forward_as_tuple(view_name(b.view), b.src, b.dst, b.label);
}

GraphNode* CodeGraph::find(NodeId id) {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

GraphNode& CodeGraph::upsert(GraphNode n) {
  auto [it, inserted] = nodes_.try_emplace(n.id, n);
  if (!inserted) it->second.views = it->second.views | n.views;
  return it->second;
}

void CodeGraph::add_edge(GraphEdge e) {
  views_.insert(e.view);
  edges_.push_back(std::move(e));
}

void CodeGraph::remove_nodes(const std::vector<NodeId>& ids) {
  std::set<NodeId> gone(ids.begin(), ids.end());
  for (NodeId id : gone) nodes_.erase(id);
  std::erase_if(edges_, [&](const GraphEdge& e) { return gone.contains(e.src) || gone.contains(e.dst); });
}

void CodeGraph::canonicalize() {
  std::sort(edges_.begin(), edges_.end(), edge_less);
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<GraphEdge> CodeGraph::edges_of(View v) const {
  std::vector<GraphEdge> out;
  for (const auto& e : edges_) {
    if (e.view == v) out.push_back(e);
  }
  return out;
}

std::vector<GraphEdge> CodeGraph::out_edges(NodeId id, View v) const {
  std::vector<GraphEdge> out;
  for (const auto& e : edges_) {
    if (e.view == v && e.src == id) out.push_back(e);
  }
  return out;
}

std::size_t CodeGraph::edge_count(View v) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
    return e.view == v;
  }));
}

void CodeGraph::validate() const {
  for (const auto& e : edges_) {
    auto s = nodes_.find(e.src);
    auto d = nodes_.find(e.dst);
    if (s == nodes_.end() || d == nodes_.end()) {
      throw Error(ErrorCode::InvalidGraph, "edge " + std::to_string(e.src.value) + "->" +
                                               std::to_string(e.dst.value) + " has a missing endpoint");
    }
    if (!s->second.views.contains(e.view) || !d->second.views.contains(e.view)) {
      throw Error(ErrorCode::InvalidGraph, "edge endpoint not tagged with view " + std::string(view_name(e.view)));
    }
    if (e.view == View::Ast && e.label != "child") {
      throw Error(ErrorCode::InvalidGraph, "AST edge label must be 'child'");
    }
  }
  for (const auto& [id, n] : nodes_) {
    if (n.id != id) throw Error(ErrorCode::InvalidGraph, "node key mismatch");
    if (n.views.empty()) throw Error(ErrorCode::InvalidGraph, "node " + std::to_string(id.value) + " has no view");
  }
}

namespace {

// Compound constructs are labeled by their header: "if (x > 0)", "case 1:",
// "int main()". Everything else keeps its full source text.
std::string_view header_text(const SyntaxTree& tree, NodeId id) {
  const SyntaxNode& n = tree.node(id);
  const std::string_view full = tree.text(id);
  std::optional<std::uint32_t> cut;
  if (n.kind == "case_statement" || n.kind == "labeled_statement") {
    for (NodeId c : n.children) {
      if (tree.node(c).kind == ":") {
        cut = tree.node(c).end;
        break;
      }
    }
  } else if (n.kind != "do_statement") {
    for (NodeId c : n.children) {
      const auto& f = tree.node(c).field;
      if (f == "body" || f == "consequence") {
        cut = tree.node(c).begin;
        break;
      }
    }
  }
  if (!cut || *cut <= n.begin) return full;
  return text_util::rtrim(full.substr(0, *cut - n.begin));
}

}  // namespace

GraphNode graph_node_for(const SyntaxTree& tree, NodeId id, View view) {
  const SyntaxNode& n = tree.node(id);
  GraphNode g;
  g.id = id;
  g.kind = n.kind;
  if (!n.parent) {
    g.label = n.kind;
  } else {
    g.label = text_util::collapse_whitespace(header_text(tree, id));
  }
  if (tree.unit().files.empty()) {
    g.file = tree.unit().name;
  } else {
    const LineOrigin a = tree.origin_start(id);
    const LineOrigin b = tree.origin_end(id);
    g.file = a.file;
    g.line_start = a.line;
    g.line_end = b.file == a.file ? b.line : a.line;
    g.col_start = n.span.col_start;
    g.col_end = n.span.col_end;
  }
  g.views.insert(view);
  return g;
}

}  // namespace codeviews
