#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codeviews/graph.hpp"
#include "codeviews/symbols.hpp"

namespace codeviews {

inline constexpr std::string_view kCallLabel = "function_call";
inline constexpr std::string_view kReturnLabel = "function_return";
inline constexpr std::string_view kLoopUpdateLabel = "loop_update";

struct CfgFunction {
  SymbolId symbol = 0;
  std::string name;  // qualified
  NodeId definition;
  NodeId entry;
  NodeId exit;
  std::vector<NodeId> statement_nodes;  // in construction order
};

NodeId entry_id(std::size_t function_index);
NodeId exit_id(std::size_t function_index);

// Subtrees whose evaluation belongs to a CFG statement node. For control
// statements this is only the condition (or the range expression); for
// labeled statements it is empty; otherwise the statement itself.
std::vector<NodeId> statement_region(const SyntaxTree& tree, NodeId stmt);

// Call-carrying nodes (call_expression, constructor-initialized declarators,
// new_expression) of a statement region grouped in evaluation order. Calls in
// the two arms of a conditional expression share one group. Only defined
// callees are kept; empty groups are dropped.
std::vector<std::vector<SymbolId>> call_groups(const SyntaxTree& tree, const SymbolTable& table, NodeId stmt);

// Adds ENTRY/EXIT and statement nodes plus intra-procedural edges for one
// function_definition. Throws Error{DanglingGoto}.
CfgFunction build_intraprocedural_cfg(const SyntaxTree& tree, const SymbolTable& table, NodeId function_definition,
                                      std::size_t function_index, CodeGraph& out, Diagnostics& diagnostics);

// Call/return edges between already-built functions. Returns the call chain
// of every statement that calls a defined function.
std::map<NodeId, std::vector<std::vector<NodeId>>> link_interprocedural(const SyntaxTree& tree,
                                                                       const SymbolTable& table,
                                                                       const std::vector<CfgFunction>& fns,
                                                                       CodeGraph& g);

struct CfgResult {
  CodeGraph graph;
  std::vector<CfgFunction> functions;
  // call-carrying statement -> groups of callee ENTRY ids in evaluation order
  std::map<NodeId, std::vector<std::vector<NodeId>>> call_chains;
  Diagnostics diagnostics;
};

// Every defined function, then inter-procedural links. A function whose goto
// has no label is skipped and reported instead of aborting the build.
CfgResult build_cfg(const SyntaxTree& tree, const SymbolTable& table);

struct PathBounds {
  int loop_iterations_max = 1;
  int recursion_depth_max = 1;
  std::size_t max_paths = 10'000;
};

struct PathBundle {
  std::string function;
  std::vector<std::vector<NodeId>> paths;
  PathBounds bounds;
  bool truncated = false;
  Diagnostics diagnostics;
};

// Depth-first entry-to-exit enumeration over the CFG with matched call/return
// pairs: a return leaves a callee only toward the call site that entered it.
// Throws Error{UnknownFunction}.
PathBundle enumerate_paths(const CfgResult& cfg, std::string_view function, const PathBounds& bounds = {});

}  // namespace codeviews
