#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codeviews/pipeline.hpp"

namespace cvt {

using namespace codeviews;

inline std::filesystem::path data_dir() { return CV_TEST_DATA; }

inline std::filesystem::path scratch(const std::string& sub) {
  auto p = std::filesystem::path(CV_SCRATCH) / sub;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << text;
}

inline Analysis run(const std::string& code, ViewSet views = ViewSet::all(), Lang lang = Lang::C,
                    CombineOptions combine = {}) {
  AnalysisOptions o;
  o.views = views;
  o.combine = std::move(combine);
  return analyze(preprocess_text(code, lang, lang == Lang::C ? "t.c" : "t.cpp"), o);
}

// Graph nodes starting on a line (original numbering) with a given kind.
inline std::vector<NodeId> nodes_at(const CodeGraph& g, int line, const std::string& kind = "") {
  std::vector<NodeId> out;
  for (const auto& [id, n] : g.nodes()) {
    if (n.line_start == line && (kind.empty() || n.kind == kind)) out.push_back(id);
  }
  return out;
}

// Identifier occurrences of a name on a line.
inline std::vector<NodeId> idents(const CodeGraph& g, const std::string& name, int line) {
  std::vector<NodeId> out;
  for (const auto& [id, n] : g.nodes()) {
    if (n.line_start == line && n.label == name &&
        (n.kind == "identifier" || n.kind == "field_identifier")) {
      out.push_back(id);
    }
  }
  return out;
}

// CFG statement node on a line: the one with the smallest id, skipping ENTRY/EXIT.
inline NodeId stmt_at(const CodeGraph& g, int line) {
  for (const auto& [id, n] : g.nodes()) {
    if (!is_synthetic(id) && n.line_start == line && n.views.contains(View::Cfg)) return id;
  }
  return NodeId{0};
}

inline bool has_edge(const CodeGraph& g, NodeId s, NodeId d, View v, const std::string& label = "") {
  return std::any_of(g.edges().begin(), g.edges().end(), [&](const GraphEdge& e) {
    return e.src == s && e.dst == d && e.view == v && (label.empty() || e.label == label);
  });
}

// DFG edge between some occurrence of a on line la and some occurrence of b on line lb.
inline bool dfg_link(const CodeGraph& g, const std::string& a, int la, const std::string& b, int lb) {
  for (NodeId s : idents(g, a, la)) {
    for (NodeId d : idents(g, b, lb)) {
      if (has_edge(g, s, d, View::Dfg)) return true;
    }
  }
  return false;
}

inline bool has_category(const Diagnostics& ds, DiagnosticCategory c) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.category == c; });
}

inline std::size_t fatal_count(const Diagnostics& ds) {
  return static_cast<std::size_t>(std::count_if(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.is_fatal(); }));
}

}  // namespace cvt
