#include "codeviews/cfg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "codeviews/error.hpp"
#include "syntax_util.hpp"
#include "text_util.hpp"

namespace codeviews {

namespace su = syntax_util;

NodeId entry_id(std::size_t function_index) { return NodeId{kFunctionNodeBase + 2 * function_index}; }
NodeId exit_id(std::size_t function_index) { return NodeId{kFunctionNodeBase + 2 * function_index + 1}; }

std::vector<NodeId> statement_region(const SyntaxTree& tree, NodeId stmt) {
  const SyntaxNode& n = tree.node(stmt);
  if (n.kind == "if_statement" || n.kind == "while_statement" || n.kind == "switch_statement") {
    if (auto c = tree.child(stmt, "condition")) return {*c};
    return {};
  }
  if (n.kind == "for_range_loop") {
    std::vector<NodeId> out;
    for (NodeId c : n.children) {
      if (tree.node(c).field == "right" || tree.node(c).field == "declarator") out.push_back(c);
    }
    return out;
  }
  if (n.kind == "for_statement" || n.kind == "labeled_statement" || n.kind == "do_statement" ||
      n.kind == "compound_statement" || n.kind == "case_statement") {
    return {};
  }
  return {stmt};
}

namespace {

bool is_call_site(const SyntaxTree& tree, const SymbolTable& table, NodeId id) {
  const auto& k = tree.node(id).kind;
  if (k != "call_expression" && k != "init_declarator" && k != "new_expression" && !su::is_declarator_kind(k) &&
      !su::is_identifier_kind(k)) {
    return false;
  }
  return !table.call_targets(id).empty();
}

void collect_groups(const SyntaxTree& tree, const SymbolTable& table, NodeId id,
                    std::vector<std::vector<SymbolId>>& groups) {
  const SyntaxNode& n = tree.node(id);
  if (n.kind == "unsupported_construct") return;
  if (n.kind == "conditional_expression") {
    if (auto c = tree.child(id, "condition")) collect_groups(tree, table, *c, groups);
    std::vector<std::vector<SymbolId>> arms;
    for (const char* f : {"consequence", "alternative"}) {
      if (auto b = tree.child(id, f)) collect_groups(tree, table, *b, arms);
    }
    std::vector<SymbolId> merged;
    for (const auto& g : arms) merged.insert(merged.end(), g.begin(), g.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (!merged.empty()) groups.push_back(std::move(merged));
    return;
  }
  for (NodeId c : n.children) collect_groups(tree, table, c, groups);
  if (is_call_site(tree, table, id)) {
    std::vector<SymbolId> defined;
    for (SymbolId t : table.call_targets(id)) {
      if (table.symbol(t).definition) defined.push_back(t);
    }
    if (!defined.empty()) groups.push_back(std::move(defined));
  }
}

}  // namespace

std::vector<std::vector<SymbolId>> call_groups(const SyntaxTree& tree, const SymbolTable& table, NodeId stmt) {
  std::vector<std::vector<SymbolId>> groups;
  for (NodeId root : statement_region(tree, stmt)) collect_groups(tree, table, root, groups);
  return groups;
}

namespace {

struct Pending {
  NodeId from;
  std::string label;
};

using PendingList = std::vector<Pending>;

class IntraBuilder {
 public:
  IntraBuilder(const SyntaxTree& tree, const SymbolTable& table, CodeGraph& g, Diagnostics& diags)
      : t_(tree), st_(table), g_(g), diags_(diags) {}

  CfgFunction build(NodeId def, std::size_t index) {
    CfgFunction fn;
    fn.definition = def;
    fn.entry = entry_id(index);
    fn.exit = exit_id(index);
    if (auto sid = st_.function_for_definition(def)) {
      fn.symbol = *sid;
      fn.name = st_.symbol(*sid).qualified_name;
    } else {
      fn.name = "anon$" + std::to_string(def.value);
    }
    exit_ = fn.exit;
    add_virtual(fn.entry, "entry", "ENTRY:" + fn.name, def);
    add_virtual(fn.exit, "exit", "EXIT:" + fn.name, def);

    PendingList cur{{fn.entry, ""}};
    if (auto inits = t_.first_child_of_kind(def, "field_initializer_list")) {
      for (NodeId fi : t_.node(*inits).children) {
        if (t_.node(fi).kind != "field_initializer") continue;
        cur = simple(fi, cur);
      }
    }
    if (auto body = t_.child(def, "body")) cur = stmt(*body, cur);
    connect(cur, fn.exit);
    resolve_gotos(def);
    flag_unreachable(fn);
    fn.statement_nodes = statements_;
    return fn;
  }

 private:
  struct LoopCtx {
    bool is_loop = false;  // false for switch
    PendingList breaks;
    PendingList continues;
  };

  void add_virtual(NodeId id, std::string kind, std::string label, NodeId def) {
    GraphNode n = graph_node_for(t_, def, View::Cfg);
    n.id = id;
    n.kind = std::move(kind);
    n.label = std::move(label);
    g_.upsert(std::move(n));
  }

  void add_statement(NodeId id) {
    if (g_.has_node(id)) return;
    g_.upsert(graph_node_for(t_, id, View::Cfg));
    statements_.push_back(id);
  }

  void edge(NodeId from, NodeId to, std::string label) {
    g_.add_edge(GraphEdge{from, to, View::Cfg, std::move(label)});
    has_incoming_.insert(to);
  }

  void connect(const PendingList& pending, NodeId to) {
    for (const auto& p : pending) edge(p.from, to, p.label);
  }

  PendingList simple(NodeId s, const PendingList& in) {
    add_statement(s);
    connect(in, s);
    return {{s, ""}};
  }

  PendingList stmt(NodeId s, PendingList in) {
    const SyntaxNode& n = t_.node(s);
    const std::string& k = n.kind;
    if (!n.named) return in;
    if (k == "compound_statement") {
      for (NodeId c : n.children) in = stmt(c, std::move(in));
      return in;
    }
    if (k == "if_statement") {
      add_statement(s);
      connect(in, s);
      PendingList out;
      if (auto c = t_.child(s, "consequence")) {
        auto t = stmt(*c, {{s, "true"}});
        out.insert(out.end(), t.begin(), t.end());
      }
      if (auto a = t_.child(s, "alternative")) {
        auto f = stmt(*a, {{s, "false"}});
        out.insert(out.end(), f.begin(), f.end());
      } else {
        out.push_back({s, "false"});
      }
      return out;
    }
    if (k == "while_statement" || k == "for_range_loop") {
      add_statement(s);
      connect(in, s);
      loops_.push_back({true, {}, {}});
      PendingList body_out;
      if (auto b = t_.child(s, "body")) body_out = stmt(*b, {{s, "true"}});
      connect(body_out, s);
      LoopCtx ctx = std::move(loops_.back());
      loops_.pop_back();
      connect(ctx.continues, s);
      PendingList out{{s, "false"}};
      out.insert(out.end(), ctx.breaks.begin(), ctx.breaks.end());
      return out;
    }
    if (k == "do_statement") {
      auto cond = t_.child(s, "condition");
      if (!cond) return in;
      loops_.push_back({true, {}, {}});
      in.push_back({*cond, "true"});
      PendingList body_out = in;
      if (auto b = t_.child(s, "body")) body_out = stmt(*b, in);
      add_statement(*cond);
      connect(body_out, *cond);
      LoopCtx ctx = std::move(loops_.back());
      loops_.pop_back();
      connect(ctx.continues, *cond);
      PendingList out{{*cond, "false"}};
      out.insert(out.end(), ctx.breaks.begin(), ctx.breaks.end());
      return out;
    }
    if (k == "for_statement") return for_stmt(s, std::move(in));
    if (k == "switch_statement") return switch_stmt(s, std::move(in));
    if (k == "break_statement") {
      add_statement(s);
      connect(in, s);
      if (!loops_.empty()) loops_.back().breaks.push_back({s, ""});
      return {};
    }
    if (k == "continue_statement") {
      add_statement(s);
      connect(in, s);
      for (auto it = loops_.rbegin(); it != loops_.rend(); ++it) {
        if (it->is_loop) {
          it->continues.push_back({s, ""});
          break;
        }
      }
      return {};
    }
    if (k == "return_statement") {
      add_statement(s);
      connect(in, s);
      edge(s, exit_, "");
      return {};
    }
    if (k == "goto_statement") {
      add_statement(s);
      connect(in, s);
      gotos_.push_back(s);
      return {};
    }
    if (k == "labeled_statement") {
      add_statement(s);
      connect(in, s);
      if (auto label = t_.child(s, "label")) labels_[std::string(t_.text(*label))] = s;
      PendingList out{{s, ""}};
      for (NodeId c : n.children) {
        if (t_.node(c).field != "label") out = stmt(c, std::move(out));
      }
      return out;
    }
    if (k == "case_statement") {
      // only reachable when a case label appears outside a switch body
      PendingList out = in;
      for (NodeId c : n.children) {
        if (t_.node(c).field != "value") out = stmt(c, std::move(out));
      }
      return out;
    }
    return simple(s, in);
  }

  PendingList for_stmt(NodeId s, PendingList in) {
    std::optional<NodeId> init = t_.child(s, "initializer");
    std::optional<NodeId> cond = t_.child(s, "condition");
    std::optional<NodeId> update = t_.child(s, "update");
    if (init) in = simple(*init, in);
    const NodeId head = cond ? *cond : s;
    add_statement(head);
    connect(in, head);
    loops_.push_back({true, {}, {}});
    PendingList body_out{{head, "true"}};
    if (auto b = t_.child(s, "body")) body_out = stmt(*b, body_out);
    LoopCtx ctx = std::move(loops_.back());
    loops_.pop_back();
    if (update) {
      add_statement(*update);
      for (const auto& p : body_out) edge(p.from, *update, p.label.empty() ? std::string(kLoopUpdateLabel) : p.label);
      for (const auto& p : ctx.continues) edge(p.from, *update, std::string(kLoopUpdateLabel));
      edge(*update, head, "");
    } else {
      connect(body_out, head);
      connect(ctx.continues, head);
    }
    PendingList out;
    if (cond) out.push_back({head, "false"});
    out.insert(out.end(), ctx.breaks.begin(), ctx.breaks.end());
    return out;
  }

  PendingList switch_stmt(NodeId s, PendingList in) {
    add_statement(s);
    connect(in, s);
    loops_.push_back({false, {}, {}});
    PendingList fall;
    bool has_default = false;
    if (auto body = t_.child(s, "body")) {
      for (NodeId c : t_.node(*body).children) {
        const SyntaxNode& cn = t_.node(c);
        if (!cn.named) continue;
        if (cn.kind != "case_statement") {
          // statements before the first label are never executed
          fall = stmt(c, std::move(fall));
          continue;
        }
        std::string label = "default";
        if (auto v = t_.child(c, "value")) {
          label = "case " + text_util::collapse_whitespace(t_.text(*v));
        } else {
          has_default = true;
        }
        fall.push_back({s, label});
        for (NodeId sc : cn.children) {
          if (t_.node(sc).field == "value" || !t_.node(sc).named) continue;
          fall = stmt(sc, std::move(fall));
        }
      }
    }
    LoopCtx ctx = std::move(loops_.back());
    loops_.pop_back();
    PendingList out = fall;
    out.insert(out.end(), ctx.breaks.begin(), ctx.breaks.end());
    if (!has_default) out.push_back({s, "default"});
    return out;
  }

  static bool is_loop_kind(const std::string& k) {
    return k == "for_statement" || k == "while_statement" || k == "do_statement" || k == "for_range_loop";
  }

  void resolve_gotos(NodeId def) {
    for (NodeId gs : gotos_) {
      auto label = t_.child(gs, "label");
      const LineOrigin o = t_.origin_start(gs);
      if (!label || t_.node(*label).kind != "statement_identifier") {
        diags_.push_back(make_diagnostic(DiagnosticCategory::GotoUnsupportedPattern, o.file, o.line,
                                         "computed goto has no static target"));
        continue;
      }
      const std::string name(t_.text(*label));
      auto it = labels_.find(name);
      if (it == labels_.end()) {
        throw Error(ErrorCode::DanglingGoto,
                    "goto '" + name + "' at " + o.file + ":" + std::to_string(o.line) + " has no label in function");
      }
      edge(gs, it->second, "");
      // entering a loop body from outside skips its header
      for (std::optional<NodeId> p = t_.node(it->second).parent; p && *p != def; p = t_.node(*p).parent) {
        if (!is_loop_kind(t_.node(*p).kind)) continue;
        bool inside = false;
        for (std::optional<NodeId> q = t_.node(gs).parent; q && *q != def; q = t_.node(*q).parent) {
          if (*q == *p) inside = true;
        }
        if (!inside) {
          diags_.push_back(make_diagnostic(DiagnosticCategory::GotoUnsupportedPattern, o.file, o.line,
                                           "goto '" + name + "' jumps into a loop body"));
          break;
        }
      }
    }
  }

  void flag_unreachable(const CfgFunction& fn) {
    for (NodeId s : statements_) {
      if (has_incoming_.contains(s)) continue;
      const LineOrigin o = t_.origin_start(s);
      diags_.push_back(make_diagnostic(DiagnosticCategory::Other, o.file, o.line,
                                       "unreachable statement in " + fn.name));
    }
  }

  const SyntaxTree& t_;
  const SymbolTable& st_;
  CodeGraph& g_;
  Diagnostics& diags_;
  NodeId exit_;
  std::vector<LoopCtx> loops_;
  std::vector<NodeId> gotos_;
  std::map<std::string, NodeId> labels_;
  std::vector<NodeId> statements_;
  std::set<NodeId> has_incoming_;
};

}  // namespace

CfgFunction build_intraprocedural_cfg(const SyntaxTree& tree, const SymbolTable& table, NodeId function_definition,
                                      std::size_t function_index, CodeGraph& out, Diagnostics& diagnostics) {
  // Build into a scratch graph so a DanglingGoto leaves `out` untouched.
  CodeGraph scratch;
  Diagnostics local;
  IntraBuilder builder(tree, table, scratch, local);
  CfgFunction fn = builder.build(function_definition, function_index);
  for (const auto& [id, n] : scratch.nodes()) out.upsert(n);
  for (const auto& e : scratch.edges()) out.add_edge(e);
  out.add_view(View::Cfg);
  diagnostics.insert(diagnostics.end(), local.begin(), local.end());
  return fn;
}

std::map<NodeId, std::vector<std::vector<NodeId>>> link_interprocedural(const SyntaxTree& tree,
                                                                       const SymbolTable& table,
                                                                       const std::vector<CfgFunction>& fns,
                                                                       CodeGraph& g) {
  std::map<SymbolId, const CfgFunction*> by_symbol;
  for (const auto& f : fns) by_symbol[f.symbol] = &f;
  std::map<NodeId, std::vector<std::vector<NodeId>>> chains;

  std::map<NodeId, std::vector<GraphEdge>> intra_out;
  for (const auto& e : g.edges()) {
    if (e.view == View::Cfg && e.label != kCallLabel && e.label != kReturnLabel) intra_out[e.src].push_back(e);
  }

  for (const auto& f : fns) {
    for (NodeId s : f.statement_nodes) {
      std::vector<std::vector<NodeId>> groups;
      std::vector<std::vector<const CfgFunction*>> callees;
      for (const auto& grp : call_groups(tree, table, s)) {
        std::vector<const CfgFunction*> cs;
        std::vector<NodeId> entries;
        for (SymbolId t : grp) {
          auto it = by_symbol.find(t);
          if (it == by_symbol.end()) continue;
          cs.push_back(it->second);
          entries.push_back(it->second->entry);
        }
        if (cs.empty()) continue;
        callees.push_back(std::move(cs));
        groups.push_back(std::move(entries));
      }
      if (groups.empty()) continue;
      for (const auto* c : callees.front()) g.add_edge({s, c->entry, View::Cfg, std::string(kCallLabel)});
      for (std::size_t i = 0; i + 1 < callees.size(); ++i) {
        for (const auto* a : callees[i]) {
          for (const auto* b : callees[i + 1]) g.add_edge({a->exit, b->entry, View::Cfg, std::string(kReturnLabel)});
        }
      }
      for (const auto* c : callees.back()) {
        for (const auto& e : intra_out[s]) g.add_edge({c->exit, e.dst, View::Cfg, std::string(kReturnLabel)});
      }
      chains[s] = std::move(groups);
    }
  }
  g.canonicalize();
  return chains;
}

CfgResult build_cfg(const SyntaxTree& tree, const SymbolTable& table) {
  CfgResult r;
  r.graph.add_view(View::Cfg);
  const auto fns = table.defined_functions();
  for (std::size_t i = 0; i < fns.size(); ++i) {
    const Symbol& s = table.symbol(fns[i]);
    try {
      r.functions.push_back(build_intraprocedural_cfg(tree, table, *s.definition, i, r.graph, r.diagnostics));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DanglingGoto) throw;
      const LineOrigin o = tree.origin_start(*s.definition);
      r.diagnostics.push_back(
          make_diagnostic(DiagnosticCategory::GotoUnsupportedPattern, o.file, o.line, e.what()));
    }
  }
  r.graph.canonicalize();
  r.call_chains = link_interprocedural(tree, table, r.functions, r.graph);
  return r;
}

// ---------------------------------------------------------------------------
// Path enumeration

namespace {

struct Frame {
  NodeId site;
  std::size_t group = 0;
  NodeId callee_entry;
};

class PathWalker {
 public:
  PathWalker(const CfgResult& cfg, const CfgFunction& root, const PathBounds& bounds)
      : cfg_(cfg), root_(root), bounds_(bounds) {
    for (const auto& f : cfg.functions) {
      exit_to_entry_[f.exit] = f.entry;
      entries_.insert(f.entry);
    }
    for (const auto& e : cfg.graph.edges()) {
      if (e.view != View::Cfg || e.label == kCallLabel || e.label == kReturnLabel) continue;
      intra_[e.src].push_back(e.dst);
    }
    for (auto& [src, dsts] : intra_) {
      std::sort(dsts.begin(), dsts.end());
      dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
    }
    for (const auto& f : cfg.functions) find_back_edges(f.entry);
  }

  PathBundle run() {
    PathBundle out;
    out.function = root_.name;
    out.bounds = bounds_;
    path_.push_back(root_.entry);
    visit(root_.entry);
    out.paths = std::move(paths_);
    out.truncated = truncated_;
    if (truncated_) {
      out.diagnostics.push_back(make_diagnostic(
          DiagnosticCategory::PathExplosion, "", 0,
          "path enumeration for " + root_.name + " stopped at " + std::to_string(out.paths.size()) + " paths"));
    }
    return out;
  }

 private:
  void find_back_edges(NodeId entry) {
    std::set<NodeId> done;
    std::set<NodeId> on_stack;
    struct Item {
      NodeId node;
      std::size_t next = 0;
    };
    std::vector<Item> stack{{entry}};
    on_stack.insert(entry);
    while (!stack.empty()) {
      Item& top = stack.back();
      const auto& succ = intra_[top.node];
      if (top.next < succ.size()) {
        const NodeId d = succ[top.next++];
        if (on_stack.contains(d)) {
          back_edges_.insert({top.node, d});
        } else if (!done.contains(d)) {
          on_stack.insert(d);
          stack.push_back({d});
        }
        continue;
      }
      on_stack.erase(top.node);
      done.insert(top.node);
      stack.pop_back();
    }
  }

  int active(NodeId entry) const {
    int n = entry == root_.entry ? 1 : 0;
    for (const auto& f : frames_) n += f.callee_entry == entry ? 1 : 0;
    return n;
  }

  bool stop() {
    if (paths_.size() >= bounds_.max_paths || ++steps_ > kMaxSteps) {
      truncated_ = true;
      return true;
    }
    return false;
  }

  void step_to(NodeId next) {
    path_.push_back(next);
    visit(next);
    path_.pop_back();
  }

  void take_intra(NodeId n) {
    auto it = intra_.find(n);
    if (it == intra_.end()) return;
    for (NodeId d : it->second) {
      if (truncated_) return;
      const bool back = back_edges_.contains({n, d});
      if (back) {
        int& count = back_counts_[{n, d}];
        if (count >= bounds_.loop_iterations_max) continue;
        ++count;
        step_to(d);
        --count;
      } else {
        step_to(d);
      }
    }
  }

  // Calls into the first group at or after `from` that has a callable member.
  bool enter_group(NodeId site, std::size_t from) {
    auto it = cfg_.call_chains.find(site);
    if (it == cfg_.call_chains.end()) return false;
    for (std::size_t gi = from; gi < it->second.size(); ++gi) {
      bool any = false;
      for (NodeId callee : it->second[gi]) {
        if (active(callee) > bounds_.recursion_depth_max) continue;
        any = true;
        if (truncated_) return true;
        frames_.push_back({site, gi, callee});
        step_to(callee);
        frames_.pop_back();
      }
      if (any) return true;
    }
    return false;
  }

  void visit(NodeId n) {
    if (stop()) return;
    if (n == root_.exit && frames_.empty()) {
      if (seen_.insert(path_).second) paths_.push_back(path_);
      return;
    }
    if (auto ex = exit_to_entry_.find(n); ex != exit_to_entry_.end() && !frames_.empty() &&
                                           frames_.back().callee_entry == ex->second) {
      const Frame f = frames_.back();
      frames_.pop_back();
      if (!enter_group(f.site, f.group + 1)) take_intra(f.site);
      frames_.push_back(f);
      return;
    }
    if (!entries_.contains(n) && enter_group(n, 0)) return;
    take_intra(n);
  }

  static constexpr std::size_t kMaxSteps = 50'000'000;

  const CfgResult& cfg_;
  const CfgFunction& root_;
  PathBounds bounds_;
  std::map<NodeId, std::vector<NodeId>> intra_;
  std::set<std::pair<NodeId, NodeId>> back_edges_;
  std::map<std::pair<NodeId, NodeId>, int> back_counts_;
  std::map<NodeId, NodeId> exit_to_entry_;
  std::set<NodeId> entries_;
  std::vector<Frame> frames_;
  std::vector<NodeId> path_;
  std::vector<std::vector<NodeId>> paths_;
  std::set<std::vector<NodeId>> seen_;
  std::size_t steps_ = 0;
  bool truncated_ = false;
};

}  // namespace

PathBundle enumerate_paths(const CfgResult& cfg, std::string_view function, const PathBounds& bounds) {
  const CfgFunction* root = nullptr;
  for (const auto& f : cfg.functions) {
    if (f.name == function) root = &f;
  }
  if (!root) {
    for (const auto& f : cfg.functions) {
      const auto pos = f.name.rfind("::");
      if (pos != std::string::npos && std::string_view(f.name).substr(pos + 2) == function) {
        if (root) throw Error(ErrorCode::UnknownFunction, "'" + std::string(function) + "' is ambiguous");
        root = &f;
      }
    }
  }
  if (!root) throw Error(ErrorCode::UnknownFunction, "no defined function '" + std::string(function) + "'");
  PathWalker walker(cfg, *root, bounds);
  return walker.run();
}

}  // namespace codeviews
