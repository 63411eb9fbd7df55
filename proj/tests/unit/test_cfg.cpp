#include <map>
#include <queue>

#include "codeviews/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace codeviews;
using cvt::has_edge;
using cvt::stmt_at;

namespace {

Analysis cfg_of(const std::string& code, Lang lang = Lang::C) { return cvt::run(code, ViewSet{View::Cfg}, lang); }

Analysis cfg_file(const std::string& rel, Lang lang) {
  AnalysisOptions o;
  o.views = ViewSet{View::Cfg};
  return analyze_file(cvt::data_dir() / rel, lang, o);
}

const CfgFunction& fn(const Analysis& a, const std::string& name) {
  for (const auto& f : a.cfg->functions) {
    if (f.name == name) return f;
  }
  FAIL("no function " << name);
  throw 0;
}

bool is_interprocedural(const GraphEdge& e) {
  return e.label == kCallLabel || e.label == kReturnLabel;
}

std::set<NodeId> reachable(const CodeGraph& g, NodeId from) {
  std::set<NodeId> seen{from};
  std::queue<NodeId> q;
  q.push(from);
  while (!q.empty()) {
    const NodeId n = q.front();
    q.pop();
    for (const auto& e : g.out_edges(n, View::Cfg)) {
      if (seen.insert(e.dst).second) q.push(e.dst);
    }
  }
  return seen;
}

void check_structure(const Analysis& a) {
  const CodeGraph& g = a.cfg->graph;
  std::set<NodeId> exits;
  for (const auto& f : a.cfg->functions) exits.insert(f.exit);
  for (const auto& [id, n] : g.nodes()) {
    const auto out = g.out_edges(id, View::Cfg);
    if (exits.contains(id)) {
      for (const auto& e : out) CHECK(e.label == kReturnLabel);
      continue;
    }
    CAPTURE(n.label);
    CHECK(!out.empty());
    std::size_t t = 0, f = 0;
    for (const auto& e : out) {
      t += e.label == "true";
      f += e.label == "false";
    }
    CHECK(t == f);
    CHECK(t <= 1);
  }
  // call/return pairing
  for (const auto& e : g.edges()) {
    if (e.label != kCallLabel) continue;
    std::set<NodeId> succ;
    for (const auto& o : g.out_edges(e.src, View::Cfg)) {
      if (!is_interprocedural(o)) succ.insert(o.dst);
    }
    NodeId exit{};
    for (const auto& f : a.cfg->functions) {
      if (f.entry == e.dst) exit = f.exit;
    }
    bool paired = false;
    for (const auto& r : g.out_edges(exit, View::Cfg)) {
      paired |= r.label == kReturnLabel && (succ.contains(r.dst) || a.cfg->call_chains.contains(e.src));
    }
    CHECK(paired);
  }
}

}  // namespace

TEST_SUITE("cfg") {

TEST_CASE("empty body links entry to exit") {
  const auto a = cfg_of("void f(void) {}");
  const auto& f = fn(a, "f");
  CHECK(f.statement_nodes.empty());
  CHECK(a.cfg->graph.edge_count(View::Cfg) == 1);
  CHECK(has_edge(a.cfg->graph, f.entry, f.exit, View::Cfg));
}

TEST_CASE("for loops decompose into init, condition and update") {
  const auto a = cfg_file("appendix/factorial.cpp", Lang::Cpp);
  const CodeGraph& g = a.cfg->graph;
  const NodeId init = *cvt::nodes_at(g, 8, "declaration").begin();
  const auto conds = cvt::nodes_at(g, 8, "binary_expression");
  const auto upds = cvt::nodes_at(g, 8, "update_expression");
  REQUIRE(conds.size() == 1);
  REQUIRE(upds.size() == 1);
  const NodeId body = stmt_at(g, 9);
  const NodeId after = stmt_at(g, 11);
  CHECK(has_edge(g, init, conds[0], View::Cfg));
  CHECK(has_edge(g, conds[0], body, View::Cfg, "true"));
  CHECK(has_edge(g, conds[0], after, View::Cfg, "false"));
  CHECK(has_edge(g, body, upds[0], View::Cfg, std::string(kLoopUpdateLabel)));
  CHECK(has_edge(g, upds[0], conds[0], View::Cfg));
  check_structure(a);
}

TEST_CASE("switch fans out per case with fall-through") {
  const auto a = cfg_of(R"(void a(void) {}
void b(void) {}
void d(void) {}
void f(int x) {
  switch (x) {
    case 1: a();
    case 2: b();
      break;
    default: d();
  }
  x = 0;
})");
  const CodeGraph& g = a.cfg->graph;
  const NodeId sw = stmt_at(g, 5);
  std::size_t intra = 0;
  for (const auto& e : g.out_edges(sw, View::Cfg)) intra += !is_interprocedural(e);
  CHECK(intra == 3);
  CHECK(has_edge(g, sw, stmt_at(g, 6), View::Cfg, "case 1"));
  CHECK(has_edge(g, sw, stmt_at(g, 7), View::Cfg, "case 2"));
  CHECK(has_edge(g, sw, stmt_at(g, 9), View::Cfg, "default"));
  CHECK(has_edge(g, stmt_at(g, 6), stmt_at(g, 7), View::Cfg));
  CHECK(has_edge(g, stmt_at(g, 7), stmt_at(g, 8), View::Cfg));
  CHECK(has_edge(g, stmt_at(g, 8), stmt_at(g, 11), View::Cfg));
  check_structure(a);
}

TEST_CASE("switch without default falls out on an implicit edge") {
  const auto a = cfg_of("void f(int x) {\n  switch (x) {\n    case 1: x = 2;\n  }\n  x = 3;\n}");
  const CodeGraph& g = a.cfg->graph;
  CHECK(has_edge(g, stmt_at(g, 2), stmt_at(g, 5), View::Cfg, "default"));
}

TEST_CASE("do-while runs the body first") {
  const auto a = cfg_of("void f(void) {\n  int x = 0;\n  do {\n    x++;\n  } while (x < 3);\n}");
  const CodeGraph& g = a.cfg->graph;
  const NodeId body = stmt_at(g, 4);
  CHECK(has_edge(g, stmt_at(g, 2), body, View::Cfg));
  const auto cond = cvt::nodes_at(g, 5, "parenthesized_expression");
  REQUIRE(cond.size() == 1);
  CHECK(has_edge(g, cond[0], body, View::Cfg, "true"));
}

TEST_CASE("break and continue") {
  const auto a = cfg_of(R"(void f(int n) {
  for (int i = 0; i < n; i++) {
    if (i == 2) continue;
    if (i == 4) break;
    n--;
  }
  n = 0;
})");
  const CodeGraph& g = a.cfg->graph;
  const auto upd = cvt::nodes_at(g, 2, "update_expression");
  REQUIRE(upd.size() == 1);
  const auto cont = cvt::nodes_at(g, 3, "continue_statement");
  const auto brk = cvt::nodes_at(g, 4, "break_statement");
  REQUIRE(cont.size() == 1);
  REQUIRE(brk.size() == 1);
  CHECK(has_edge(g, cont[0], upd[0], View::Cfg));
  CHECK(has_edge(g, brk[0], stmt_at(g, 7), View::Cfg));
  check_structure(a);
}

TEST_CASE("goto jumps to its label") {
  const auto a = cfg_of("int f(int x) {\n  if (x) goto out;\n  x = 1;\nout:\n  return x;\n}");
  const CodeGraph& g = a.cfg->graph;
  const auto gt = cvt::nodes_at(g, 2, "goto_statement");
  REQUIRE(gt.size() == 1);
  const auto targets = g.out_edges(gt[0], View::Cfg);
  REQUIRE(targets.size() == 1);
  CHECK(reachable(g, targets[0].dst).contains(stmt_at(g, 5)));
  CHECK(targets[0].dst != stmt_at(g, 3));
}

TEST_CASE("goto without a label skips the function") {
  Diagnostics d;
  const auto unit = std::make_shared<SourceUnit>(preprocess_text("void f(void) { goto nowhere; }\nvoid g(void) {}", Lang::C));
  const auto tree = parse(unit).tree;
  const auto table = build_symbol_table(tree);
  const auto def = tree.named_children(tree.root().id).front();
  CodeGraph out;
  CHECK_THROWS_AS(build_intraprocedural_cfg(tree, table, def, 0, out, d), Error);
  const CfgResult r = build_cfg(tree, table);
  CHECK(r.functions.size() == 1);
  CHECK(cvt::has_category(r.diagnostics, DiagnosticCategory::GotoUnsupportedPattern));
}

TEST_CASE("unreachable code is kept and flagged") {
  const auto a = cfg_of("int f(void) {\n  return 1;\n  f();\n}");
  const NodeId dead = stmt_at(a.cfg->graph, 3);
  CHECK(a.cfg->graph.has_node(dead));
  bool incoming = false;
  for (const auto& e : a.cfg->graph.edges()) incoming |= e.dst == dead;
  CHECK_FALSE(incoming);
  CHECK(cvt::has_category(a.diagnostics, DiagnosticCategory::Other));
}

TEST_CASE("function pointer dispatch reaches both targets") {
  const auto a = cfg_file("fig2/dispatch.c", Lang::C);
  const CodeGraph& g = a.cfg->graph;
  const NodeId s = stmt_at(g, 20);
  std::set<NodeId> called;
  std::size_t calls = 0;
  for (const auto& e : g.out_edges(s, View::Cfg)) {
    if (e.label == kCallLabel) {
      ++calls;
      called.insert(e.dst);
    }
  }
  CHECK(calls == 2);
  CHECK(called == std::set<NodeId>{fn(a, "f1").entry, fn(a, "f2").entry});
  const NodeId next = stmt_at(g, 21);
  CHECK(has_edge(g, fn(a, "f1").exit, next, View::Cfg, std::string(kReturnLabel)));
  CHECK(has_edge(g, fn(a, "f2").exit, next, View::Cfg, std::string(kReturnLabel)));
  check_structure(a);
}

TEST_CASE("recursion closes a cycle through the entry") {
  const auto a = cfg_file("fig2/dispatch.c", Lang::C);
  const auto& f1 = fn(a, "f1");
  const NodeId rec = stmt_at(a.cfg->graph, 7);
  CHECK(has_edge(a.cfg->graph, rec, f1.entry, View::Cfg, std::string(kCallLabel)));
  CHECK(reachable(a.cfg->graph, f1.entry).contains(rec));
}

TEST_CASE("calls in one statement chain left to right") {
  const auto a = cfg_of(R"(int f(int v) { return v; }
int g(int v) { return v + 1; }
int main(void) {
  int x = f(1) + g(2);
  return x;
})");
  const CodeGraph& g = a.cfg->graph;
  const NodeId s = stmt_at(g, 4);
  CHECK(has_edge(g, s, fn(a, "f").entry, View::Cfg, std::string(kCallLabel)));
  CHECK(has_edge(g, fn(a, "f").exit, fn(a, "g").entry, View::Cfg));
  CHECK(has_edge(g, fn(a, "g").exit, stmt_at(g, 5), View::Cfg, std::string(kReturnLabel)));
}

TEST_CASE("no calls means no interprocedural edges") {
  const auto a = cfg_of("int f(int x) { if (x) x = 2; return x; }\nint g(void) { return 3; }");
  for (const auto& e : a.cfg->graph.edges()) CHECK_FALSE(is_interprocedural(e));
  CHECK(a.cfg->call_chains.empty());
}

TEST_CASE("main reaches every statement when it calls everything") {
  const auto a = cfg_file("appendix/math_project/main.c", Lang::C);
  AnalysisOptions o;
  o.views = ViewSet{View::Cfg};
  const Analysis p = analyze_folder(cvt::data_dir() / "appendix" / "math_project", Lang::C, "m", o);
  const auto seen = reachable(p.cfg->graph, fn(p, "main").entry);
  for (const auto& f : p.cfg->functions) {
    for (NodeId s : f.statement_nodes) CHECK(seen.contains(s));
  }
  check_structure(p);
  CHECK(a.failed_files == 0);
}

TEST_CASE("structure holds across the bundled programs") {
  for (const char* rel : {"appendix/bubble_sort.c", "fig2/dispatch.c"}) {
    CAPTURE(rel);
    check_structure(cfg_file(rel, Lang::C));
  }
  check_structure(cfg_file("fig2/members.cpp", Lang::Cpp));
}

}  // TEST_SUITE
