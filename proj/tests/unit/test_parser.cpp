#include "doctest.h"
#include "support.hpp"

using namespace codeviews;

namespace {

ParseResult parse_text(const std::string& code, Lang lang = Lang::C) {
  return parse(std::make_shared<SourceUnit>(preprocess_text(code, lang, lang == Lang::C ? "p.c" : "p.cpp")));
}

ParseResult parse_path(const std::filesystem::path& p, Lang lang) {
  return parse(std::make_shared<SourceUnit>(expand_macros(consolidate_file(p, lang))));
}

std::pair<int, int> start(const SyntaxNode& n) { return {n.span.line_start, n.span.col_start}; }
std::pair<int, int> end(const SyntaxNode& n) { return {n.span.line_end, n.span.col_end}; }

void check_tree_shape(const SyntaxTree& t) {
  std::size_t roots = 0;
  for (const SyntaxNode& n : t.nodes()) {
    if (!n.parent) ++roots;
    std::uint64_t prev = n.id.value;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const SyntaxNode& c = t.node(n.children[i]);
      CHECK(c.parent == n.id);
      CHECK(c.id.value > prev);
      prev = c.id.value;
      if (n.parent && c.span.file == n.span.file) {
        CHECK(c.begin >= n.begin);
        CHECK(c.end <= n.end);
        CHECK(start(c) >= start(n));
        CHECK(end(c) <= end(n));
      }
      if (i > 0) {
        const SyntaxNode& p = t.node(n.children[i - 1]);
        if (p.span.file == c.span.file) CHECK(p.end <= c.begin);
      }
    }
  }
  CHECK(roots == 1);
  // pre-order: a node's subtree occupies the contiguous id range after it
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.nodes()[i].id.value == i);
}

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("empty unit gives a bare root") {
  const auto r = parse_text("");
  CHECK(r.tree.size() == 1);
  CHECK(r.tree.root().kind == "translation_unit");
  CHECK(r.tree.root().children.empty());
  CHECK(r.diagnostics.empty());
}

TEST_CASE("factorial has two function definitions at the top") {
  const auto r = parse_path(cvt::data_dir() / "appendix" / "factorial.cpp", Lang::Cpp);
  std::vector<std::string> kinds;
  for (NodeId c : r.tree.named_children(r.tree.root().id)) kinds.push_back(r.tree.node(c).kind);
  CHECK(kinds == std::vector<std::string>{"function_definition", "function_definition"});
  check_tree_shape(r.tree);
}

TEST_CASE("structural invariants hold on every bundled source") {
  for (const auto& entry : std::filesystem::recursive_directory_iterator(cvt::data_dir())) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext != ".c" && ext != ".cpp") continue;
    CAPTURE(entry.path().string());
    const auto r = parse_path(entry.path(), ext == ".c" ? Lang::C : Lang::Cpp);
    check_tree_shape(r.tree);
  }
}

TEST_CASE("ids are stable across parses") {
  const std::string code = "int f(int a) { if (a) return 1; return f(a - 1); }";
  const auto a = parse_text(code);
  const auto b = parse_text(code);
  REQUIRE(a.tree.size() == b.tree.size());
  for (std::size_t i = 0; i < a.tree.size(); ++i) {
    CHECK(a.tree.nodes()[i].kind == b.tree.nodes()[i].kind);
    CHECK(a.tree.nodes()[i].span == b.tree.nodes()[i].span);
  }
}

TEST_CASE("C construct coverage") {
  const std::string code = R"(struct P { int x; int y; };
union U { int i; float f; };
enum Color { RED, GREEN = 3 };
typedef int (*op)(int);
int twice(int v) { return v * 2; }
int main(void) {
  struct P p = {1, 2};
  op f = twice;
  int s = 0;
  for (int i = 0; i < 3; i++) { s += f(i); }
  while (s > 10) s--;
  do { s++; } while (s < 5);
  switch (s) { case 1: s = 0; break; default: s = 1; }
  if (s) goto done;
  s = p.x;
done:
  return s;
})";
  const auto r = parse_text(code);
  CHECK(r.diagnostics.empty());
  std::set<std::string> kinds;
  for (const auto& n : r.tree.nodes()) kinds.insert(n.kind);
  for (const char* k : {"struct_specifier", "union_specifier", "enum_specifier", "type_definition",
                        "function_declarator", "for_statement", "while_statement", "do_statement",
                        "switch_statement", "case_statement", "goto_statement", "labeled_statement",
                        "field_expression", "initializer_list", "break_statement"}) {
    CAPTURE(k);
    CHECK(kinds.contains(k));
  }
}

TEST_CASE("C++ classes and namespaces") {
  const std::string code = R"(namespace geo {
class Box {
 public:
  Box(int w) : w_(w) {}
  int area() const { return w_ * w_; }
 private:
  int w_;
};
}
int main() { geo::Box b(3); return b.area(); })";
  const auto r = parse_text(code, Lang::Cpp);
  CHECK(r.diagnostics.empty());
  std::set<std::string> kinds;
  for (const auto& n : r.tree.nodes()) kinds.insert(n.kind);
  for (const char* k : {"namespace_definition", "class_specifier", "field_declaration_list",
                        "field_initializer_list", "access_specifier", "qualified_identifier"}) {
    CAPTURE(k);
    CHECK(kinds.contains(k));
  }
}

TEST_CASE("thread creation parses and is reported") {
  const auto a = cvt::run(R"(void* work(void* p) { return p; }
int main() {
  pthread_t t;
  pthread_create(&t, 0, work, 0);
  return 0;
})");
  CHECK(cvt::has_category(a.diagnostics, DiagnosticCategory::Multithreading));
  CHECK(a.failed_files == 0);
}

TEST_CASE("a malformed file is excluded and the rest continues") {
  const auto dir = cvt::scratch("broken");
  cvt::spit(dir / "a.c", "int ok(void) { return 1; }");
  cvt::spit(dir / "b.c", "int bad( { return ; ");
  AnalysisOptions o;
  const Analysis a = analyze_folder(dir, Lang::C, "mixed", o);
  CHECK(a.failed_files == 1);
  CHECK(cvt::has_category(a.diagnostics, DiagnosticCategory::SyntaxError));
  bool ok_seen = false;
  for (const auto& f : a.cfg->functions) ok_seen |= f.name == "ok";
  CHECK(ok_seen);
  for (const auto& d : a.diagnostics) {
    if (d.category == DiagnosticCategory::SyntaxError) CHECK(d.file == "b.c");
  }
}

TEST_CASE("every produced kind is declared") {
  const auto r = parse_path(cvt::data_dir() / "fig2" / "members.cpp", Lang::Cpp);
  const auto& known = known_node_kinds();
  for (const auto& n : r.tree.nodes()) {
    CAPTURE(n.kind);
    if (n.named) CHECK(std::find(known.begin(), known.end(), n.kind) != known.end());
  }
}

}  // TEST_SUITE
