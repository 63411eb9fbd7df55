#pragma once

#include <optional>
#include <string>
#include <vector>

#include "codeviews/graph.hpp"
#include "codeviews/symbols.hpp"

namespace codeviews {

// Named CST nodes with parent->child edges labeled "child". With full_cst every
// token is kept as well.
CodeGraph build_ast(const SyntaxTree& tree, bool full_cst = false);

// Id of the node that replaces every occurrence of a collapsed symbol.
NodeId collapsed_id(const Symbol& s);

// Replaces each targeted variable's identifier occurrences by one node. An
// empty optional targets every variable and parameter; names are matched per
// symbol, so shadowed declarations stay apart. Throws Error{UnknownVariable}.
CodeGraph collapse_variables(const CodeGraph& g, const SymbolTable& table,
                             const std::optional<std::vector<std::string>>& names);

// Drops nodes of the listed kinds and everything beneath them, with all
// incident edges. Descendants come from the CST when a tree is given,
// otherwise from AST edges. Unknown kinds are reported, not rejected.
CodeGraph blacklist_nodes(const CodeGraph& g, const std::vector<std::string>& kinds, Diagnostics* diagnostics = nullptr,
                          const SyntaxTree* tree = nullptr);

}  // namespace codeviews
