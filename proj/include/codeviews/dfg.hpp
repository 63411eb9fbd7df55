#pragma once

#include <compare>
#include <map>
#include <vector>

#include "codeviews/cfg.hpp"

namespace codeviews {

enum class DefKind : std::uint8_t {
  Statement,    // assignment, initializer, increment, member initializer
  CallByRef,    // &v or non-const reference argument to a defined function
  ParamEntry,   // parameter value on function entry
  GlobalInit,   // global declaration, at the virtual global-init node
  EntryState,   // global or member value on function entry (resolved across calls)
  CallGlobal,   // global possibly written by a callee (no kill)
};

struct Definition {
  SymbolId symbol = 0;
  NodeId site;        // CFG node (or kGlobalInitId)
  NodeId occurrence;  // identifier node written
  DefKind kind = DefKind::Statement;

  auto operator<=>(const Definition&) const = default;

  // Shown as a DFG node and used directly as an edge source.
  bool materialized() const {
    return kind == DefKind::Statement || kind == DefKind::CallByRef || kind == DefKind::ParamEntry ||
           kind == DefKind::GlobalInit;
  }
  bool kills() const { return kind != DefKind::CallGlobal; }
};

struct Use {
  SymbolId symbol = 0;
  NodeId occurrence;

  auto operator<=>(const Use&) const = default;
};

struct StatementFacts {
  std::vector<std::size_t> gen;   // indices into DefUseFacts::defs
  std::vector<std::size_t> kill;  // every other definition of a killed symbol
  std::vector<Use> uses;
};

struct DefUseFacts {
  std::vector<Definition> defs;
  std::map<NodeId, StatementFacts> nodes;  // CFG node -> facts
  // Definition index -> right-hand side subtree that produced it, for return flow.
  std::map<std::size_t, NodeId> def_value;
  // CallByRef definition index -> callee parameters aliasing the argument.
  std::map<std::size_t, std::vector<SymbolId>> ref_params;
  Diagnostics diagnostics;

  std::vector<Definition> gen_of(NodeId n) const;
};

DefUseFacts compute_gen_kill(const CfgResult& cfg, const SyntaxTree& tree, const SymbolTable& table);

// IN set per CFG node, as sorted indices into facts.defs. Worklist fixpoint over
// intra-procedural CFG edges (call and return edges are ignored).
struct ReachingDefs {
  std::map<NodeId, std::vector<std::size_t>> in;

  const std::vector<std::size_t>& at(NodeId n) const;
};

ReachingDefs reaching_definitions(const CodeGraph& cfg, const DefUseFacts& facts);

// Def-use edges over identifier occurrences, including argument-to-parameter,
// reference aliasing, return-value and class-member flows.
CodeGraph build_dfg(const CfgResult& cfg, const ReachingDefs& rd, const DefUseFacts& facts, const SyntaxTree& tree,
                    const SymbolTable& table);

}  // namespace codeviews
