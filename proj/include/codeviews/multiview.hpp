#pragma once

#include <optional>
#include <string>
#include <vector>

#include "codeviews/ast_view.hpp"

namespace codeviews {

struct BuiltViews {
  std::optional<CodeGraph> ast;
  std::optional<CodeGraph> cfg;
  std::optional<CodeGraph> dfg;
};

enum class CollapseMode { None, All, Names };

struct CombineOptions {
  CollapseMode collapse = CollapseMode::None;
  std::vector<std::string> collapse_names;  // for CollapseMode::Names
  std::vector<std::string> blacklist;
};

// Union of the requested views over shared node ids; edges keep their view
// tag. Collapsing and blacklisting run after the union. Throws
// Error{ViewNotBuilt}.
CodeGraph combine(const BuiltViews& built, ViewSet requested, const CombineOptions& options, const SymbolTable& table,
                  const SyntaxTree* tree = nullptr, Diagnostics* diagnostics = nullptr);

struct Variant {
  std::string name;  // "ast", "cfg+dfg", "ast+cfg+dfg/collapsed", "cst", ...
  ViewSet views;
  bool collapsed = false;
  bool full_cst = false;
};

// 7 view subsets, each with and without collapsing, plus the unpruned CST.
const std::vector<Variant>& variant_catalog();

}  // namespace codeviews
