#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "codeviews/dfg.hpp"
#include "codeviews/multiview.hpp"

namespace codeviews {

struct AnalysisOptions {
  ViewSet views{View::Cfg};
  CombineOptions combine;
  bool full_cst = false;
};

// Everything derived from one SourceUnit. Later stages are present only when
// a requested view needs them (the DFG needs the CFG).
struct Analysis {
  std::shared_ptr<const SourceUnit> unit;
  SyntaxTree tree;
  std::unique_ptr<SymbolTable> table;
  std::optional<CfgResult> cfg;
  std::optional<DefUseFacts> facts;
  std::optional<ReachingDefs> reaching;
  BuiltViews views;
  CodeGraph graph;  // requested views combined, options applied
  Diagnostics diagnostics;
  std::size_t failed_files = 0;  // files excluded for syntax errors

  // True when some diagnostic makes a requested view incomplete.
  bool partial(ViewSet requested) const;
};

Analysis analyze(SourceUnit unit, const AnalysisOptions& options);
Analysis analyze_file(const std::filesystem::path& file, Lang lang, const AnalysisOptions& options);
Analysis analyze_folder(const std::filesystem::path& folder, Lang lang, std::string combined_name,
                        const AnalysisOptions& options);

}  // namespace codeviews
