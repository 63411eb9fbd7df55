#include "codeviews/pipeline.hpp"

#include <algorithm>

namespace codeviews {

bool Analysis::partial(ViewSet requested) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) { return !(d.fatal_for & requested).empty(); });
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ",";
    out += p;
  }
  return out;
}

void append(Diagnostics& to, const Diagnostics& from) { to.insert(to.end(), from.begin(), from.end()); }

}  // namespace

Analysis analyze(SourceUnit raw, const AnalysisOptions& options) {
  Analysis a;
  auto unit = std::make_shared<SourceUnit>(expand_macros(std::move(raw)));
  a.unit = unit;
  append(a.diagnostics, unit->diagnostics);

  ParseResult parsed = parse(a.unit);
  a.tree = std::move(parsed.tree);
  append(a.diagnostics, parsed.diagnostics);
  a.failed_files = static_cast<std::size_t>(std::count_if(
      parsed.diagnostics.begin(), parsed.diagnostics.end(),
      [](const Diagnostic& d) { return d.category == DiagnosticCategory::SyntaxError; }));

  a.table = std::make_unique<SymbolTable>(build_symbol_table(a.tree));
  append(a.diagnostics, a.table->diagnostics());

  GraphMeta meta;
  meta.project = unit->name;
  meta.lang = unit->lang;
  meta.options["views"] = join(options.views.names());
  meta.options["collapse"] = options.combine.collapse == CollapseMode::None ? "none"
                             : options.combine.collapse == CollapseMode::All
                                 ? "all"
                                 : join(options.combine.collapse_names);
  meta.options["blacklist"] = join(options.combine.blacklist);
  if (options.full_cst) meta.options["full_cst"] = "true";

  if (options.views.contains(View::Ast)) {
    a.views.ast = build_ast(a.tree, options.full_cst);
    a.views.ast->meta = meta;
  }
  if (options.views.contains(View::Cfg) || options.views.contains(View::Dfg)) {
    a.cfg = build_cfg(a.tree, *a.table);
    append(a.diagnostics, a.cfg->diagnostics);
    if (options.views.contains(View::Cfg)) {
      a.views.cfg = a.cfg->graph;
      a.views.cfg->meta = meta;
    }
  }
  if (options.views.contains(View::Dfg)) {
    a.facts = compute_gen_kill(*a.cfg, a.tree, *a.table);
    append(a.diagnostics, a.facts->diagnostics);
    a.reaching = reaching_definitions(a.cfg->graph, *a.facts);
    a.views.dfg = build_dfg(*a.cfg, *a.reaching, *a.facts, a.tree, *a.table);
    a.views.dfg->meta = meta;
  }
  a.graph = combine(a.views, options.views, options.combine, *a.table, &a.tree, &a.diagnostics);
  a.graph.meta = meta;
  std::stable_sort(a.diagnostics.begin(), a.diagnostics.end(), [](const Diagnostic& x, const Diagnostic& y) {
    return std::tie(x.file, x.line) < std::tie(y.file, y.line);
  });
  return a;
}

Analysis analyze_file(const std::filesystem::path& file, Lang lang, const AnalysisOptions& options) {
  return analyze(consolidate_file(file, lang), options);
}

Analysis analyze_folder(const std::filesystem::path& folder, Lang lang, std::string combined_name,
                        const AnalysisOptions& options) {
  SourceUnit unit = consolidate_project(folder, lang);
  unit.name = std::move(combined_name);
  return analyze(std::move(unit), options);
}

}  // namespace codeviews
