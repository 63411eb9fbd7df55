#include "codeviews/multiview.hpp"

#include "codeviews/error.hpp"

namespace codeviews {

CodeGraph combine(const BuiltViews& built, ViewSet requested, const CombineOptions& options, const SymbolTable& table,
                  const SyntaxTree* tree, Diagnostics* diagnostics) {
  if (requested.empty()) throw Error(ErrorCode::BadArguments, "no view requested");
  CodeGraph out;
  for (View v : requested.members()) {
    const std::optional<CodeGraph>& src = v == View::Ast ? built.ast : v == View::Cfg ? built.cfg : built.dfg;
    if (!src) throw Error(ErrorCode::ViewNotBuilt, std::string(view_name(v)) + " view was not built");
    if (out.nodes().empty() && out.edges().empty()) out.meta = src->meta;
    out.add_view(v);
    for (const auto& [id, n] : src->nodes()) out.upsert(n);
    for (const GraphEdge& e : src->edges()) out.add_edge(e);
  }
  out.canonicalize();
  if (options.collapse == CollapseMode::All) {
    out = collapse_variables(out, table, std::nullopt);
  } else if (options.collapse == CollapseMode::Names) {
    out = collapse_variables(out, table, options.collapse_names);
  }
  if (!options.blacklist.empty()) out = blacklist_nodes(out, options.blacklist, diagnostics, tree);
  return out;
}

const std::vector<Variant>& variant_catalog() {
  static const std::vector<Variant> catalog = [] {
    std::vector<Variant> out;
    for (unsigned bits = 1; bits < 8; ++bits) {
      ViewSet views;
      std::string name;
      for (View v : {View::Ast, View::Cfg, View::Dfg}) {
        if (bits & (1u << static_cast<unsigned>(v))) {
          views.insert(v);
          if (!name.empty()) name += "+";
          name += view_name(v);
        }
      }
      out.push_back({name, views, false, false});
      out.push_back({name + "/collapsed", views, true, false});
    }
    out.push_back({"cst", {View::Ast}, false, true});
    return out;
  }();
  return catalog;
}

}  // namespace codeviews
