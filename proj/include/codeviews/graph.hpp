#pragma once

#include <map>
#include <string>
#include <vector>

#include "codeviews/diagnostic.hpp"
#include "codeviews/preprocessor.hpp"
#include "codeviews/syntax.hpp"

namespace codeviews {

struct GraphNode {
  NodeId id;
  std::string kind;
  std::string label;
  std::string file;  // original file, relative to the project root
  int line_start = 0;
  int col_start = 0;
  int line_end = 0;
  int col_end = 0;
  ViewSet views;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  NodeId src;
  NodeId dst;
  View view = View::Ast;
  std::string label;

  bool operator==(const GraphEdge&) const = default;
};

// Canonical edge order: (view name, src, dst, label).
bool edge_less(const GraphEdge& a, const GraphEdge& b);

struct GraphMeta {
  std::string project;
  Lang lang = Lang::C;
  std::map<std::string, std::string> options;

  bool operator==(const GraphMeta&) const = default;
};

class CodeGraph {
 public:
  GraphMeta meta;

  const std::map<NodeId, GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  ViewSet views() const { return views_; }
  void add_view(View v) { views_.insert(v); }
  void set_views(ViewSet v) { views_ = v; }

  bool has_node(NodeId id) const { return nodes_.contains(id); }
  const GraphNode& node(NodeId id) const { return nodes_.at(id); }
  GraphNode* find(NodeId id);

  // Inserts the node or merges its view set into an existing one.
  GraphNode& upsert(GraphNode n);
  void add_edge(GraphEdge e);
  void remove_nodes(const std::vector<NodeId>& ids);  // drops incident edges too
  void replace_edges(std::vector<GraphEdge> edges) { edges_ = std::move(edges); }

  // Sorts and deduplicates edges. Called by every builder before returning.
  void canonicalize();

  std::vector<GraphEdge> edges_of(View v) const;
  std::vector<GraphEdge> out_edges(NodeId id, View v) const;
  std::size_t edge_count(View v) const;

  // Checks the structural invariants; throws Error{InvalidGraph}.
  void validate() const;

  bool operator==(const CodeGraph& o) const {
    return meta == o.meta && views_ == o.views_ && nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  std::map<NodeId, GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  ViewSet views_;
};

// GraphNode for a CST node, with original positions and a whitespace-collapsed
// source label (the node kind for the root).
GraphNode graph_node_for(const SyntaxTree& tree, NodeId id, View view);

}  // namespace codeviews
