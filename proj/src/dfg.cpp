#include "codeviews/dfg.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <boost/dynamic_bitset.hpp>

#include "syntax_util.hpp"

namespace codeviews {

namespace su = syntax_util;

std::vector<Definition> DefUseFacts::gen_of(NodeId n) const {
  std::vector<Definition> out;
  if (auto it = nodes.find(n); it != nodes.end()) {
    for (std::size_t i : it->second.gen) out.push_back(defs[i]);
  }
  return out;
}

const std::vector<std::size_t>& ReachingDefs::at(NodeId n) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = in.find(n);
  return it == in.end() ? kEmpty : it->second;
}

namespace {

bool is_global(const SymbolTable& table, const Symbol& s) {
  if (s.kind != SymbolKind::Variable || s.is_external || s.is_static_local) return false;
  const ScopeKind k = table.scope(s.scope).kind;
  return k == ScopeKind::Global || k == ScopeKind::Namespace;
}

bool is_within(const SyntaxTree& tree, NodeId node, NodeId ancestor) {
  std::optional<NodeId> cur = node;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = tree.node(*cur).parent;
  }
  return false;
}

// Call-carrying nodes under a subtree that reach at least one defined function.
std::vector<NodeId> calls_in(const SyntaxTree& tree, const SymbolTable& table, NodeId root) {
  std::vector<NodeId> out;
  tree.walk(root, [&](const SyntaxNode& n) {
    if (n.kind == "unsupported_construct") return false;
    for (SymbolId t : table.call_targets(n.id)) {
      if (table.symbol(t).definition) {
        out.push_back(n.id);
        break;
      }
    }
    return true;
  });
  return out;
}

// Argument expressions passed at a call-carrying node.
std::vector<NodeId> call_arguments(const SyntaxTree& tree, NodeId call) {
  const auto& k = tree.node(call).kind;
  std::optional<NodeId> args;
  if (k == "call_expression" || k == "new_expression") {
    args = tree.child(call, "arguments");
  } else if (k == "init_declarator") {
    args = tree.child(call, "value");
  }
  if (!args || tree.node(*args).kind != "argument_list") return {};
  return tree.named_children(*args);
}

struct Occurrence {
  SymbolId symbol;
  NodeId node;
  DefKind kind;
  std::optional<NodeId> value;
  std::vector<SymbolId> ref_params;
};

// Collects the definitions and uses of one statement region.
class RegionWalker {
 public:
  RegionWalker(const SyntaxTree& tree, const SymbolTable& table, Diagnostics& diags)
      : t_(tree), table_(table), diags_(diags) {}

  std::vector<Occurrence> defs;
  std::vector<Use> uses;

  void statement(NodeId root) {
    const auto& k = t_.node(root).kind;
    if (k == "declaration" || k == "condition_declaration") {
      declaration(root);
    } else if (k == "field_initializer") {
      field_initializer(root);
    } else if (k == "expression_statement" || k == "return_statement") {
      for (NodeId c : t_.node(root).children) use_expr(c);
    } else if (t_.node(root).field == "declarator" && t_.node(root).parent &&
               t_.node(*t_.node(root).parent).kind == "for_range_loop") {
      if (auto name = object_of(root)) {
        defs.push_back({*name->first, name->second, DefKind::Statement, t_.child(*t_.node(root).parent, "right"), {}});
      }
    } else {
      use_expr(root);
    }
  }

 private:
  const SyntaxTree& t_;
  const SymbolTable& table_;
  Diagnostics& diags_;

  const std::string& kind(NodeId n) const { return t_.node(n).kind; }

  // Object symbol bound to an identifier-kind or qualified node.
  std::optional<SymbolId> object(NodeId n) const {
    const NodeId leaf = su::innermost_name(t_, n);
    auto b = table_.binding(leaf);
    if (!b) return std::nullopt;
    const Symbol& s = table_.symbol(*b);
    if (!s.is_object() || s.is_external) return std::nullopt;
    return b;
  }

  // (symbol, occurrence) named by a declarator chain.
  std::optional<std::pair<std::optional<SymbolId>, NodeId>> object_of(NodeId declarator) const {
    auto name = su::declarator_name(t_, declarator);
    if (!name) return std::nullopt;
    const NodeId leaf = su::innermost_name(t_, *name);
    auto sym = object(leaf);
    if (!sym) return std::nullopt;
    return std::pair{sym, leaf};
  }

  void use(NodeId n) {
    if (auto s = object(n)) uses.push_back({*s, su::innermost_name(t_, n)});
  }

  void def(NodeId n, DefKind k, std::optional<NodeId> value, std::vector<SymbolId> params = {}) {
    if (auto s = object(n)) defs.push_back({*s, su::innermost_name(t_, n), k, value, std::move(params)});
  }

  bool pointer_like(NodeId e) const {
    e = su::strip_parens(t_, e);
    std::optional<NodeId> leaf;
    if (kind(e) == "identifier" || kind(e) == "qualified_identifier") leaf = e;
    if (kind(e) == "field_expression") leaf = t_.child(e, "field");
    if (!leaf) return false;
    auto s = object(*leaf);
    if (!s) return false;
    const Symbol& sym = table_.symbol(*s);
    return (sym.is_pointer || sym.is_array) && !sym.fn_pointer;
  }

  void pointer_arithmetic(NodeId at) {
    const LineOrigin o = t_.origin_start(at);
    diags_.push_back(make_diagnostic(DiagnosticCategory::PointerArithmetic, o.file, o.line,
                                     "pointer arithmetic '" + std::string(t_.text(at)) +
                                         "' treated as a use of the base pointer"));
  }

  void declaration(NodeId decl) {
    for (NodeId c : t_.node(decl).children) {
      const auto& k = kind(c);
      if (k == "init_declarator") {
        auto value = t_.child(c, "value");
        if (value) use_expr(*value);
        auto target = object_of(c);
        if (!target) continue;
        defs.push_back({*target->first, target->second, DefKind::Statement, value, {}});
      } else if (su::is_declarator_kind(k) || su::is_identifier_kind(k)) {
        // `A obj;` runs a constructor; a plain scalar stays undefined
        auto target = object_of(c);
        if (!target) continue;
        if (!table_.call_targets(c).empty() || !table_.call_targets(target->second).empty()) {
          defs.push_back({*target->first, target->second, DefKind::Statement, std::nullopt, {}});
        }
      }
    }
  }

  void field_initializer(NodeId fi) {
    std::optional<NodeId> args;
    std::optional<NodeId> name;
    for (NodeId c : t_.node(fi).children) {
      if (kind(c) == "argument_list" || kind(c) == "initializer_list") args = c;
      if (kind(c) == "field_identifier" || kind(c) == "qualified_identifier") name = c;
    }
    if (args) use_expr(*args);
    if (name) def(*name, DefKind::Statement, args);
  }

  void lvalue(NodeId l, bool compound, std::optional<NodeId> value) {
    l = su::strip_parens(t_, l);
    const auto& k = kind(l);
    if (k == "identifier" || k == "qualified_identifier") {
      if (compound) use(l);
      def(l, DefKind::Statement, value);
      return;
    }
    if (k == "field_expression") {
      auto field = t_.child(l, "field");
      auto arg = t_.child(l, "argument");
      const bool arrow = t_.text(t_.node(l).children.size() > 1 ? t_.node(l).children[1] : l) == "->";
      if (arg) {
        const NodeId base = su::strip_parens(t_, *arg);
        if (arrow || (kind(base) != "identifier" && kind(base) != "this")) use_expr(*arg);
      }
      if (field) {
        if (compound) use(*field);
        def(*field, DefKind::Statement, value);
      }
      return;
    }
    if (k == "subscript_expression") {
      if (auto idx = t_.child(l, "index")) use_expr(*idx);
      if (auto arg = t_.child(l, "argument")) lvalue(*arg, compound, value);
      return;
    }
    use_expr(l);
  }

  void call(NodeId e) {
    if (auto fn = t_.child(e, "function")) {
      const NodeId f = su::strip_parens(t_, *fn);
      if (kind(f) == "field_expression") {
        if (auto arg = t_.child(f, "argument")) use_expr(*arg);
        if (auto field = t_.child(f, "field")) use(*field);
      } else {
        use_expr(f);
      }
    }
    const auto args = call_arguments(t_, e);
    for (NodeId a : args) use_expr(a);
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::vector<SymbolId> aliased;
      bool by_address = false;
      NodeId target = su::strip_parens(t_, args[i]);
      if (kind(target) == "pointer_expression" && t_.text(t_.node(target).children.front()) == "&") {
        by_address = true;
        target = su::strip_parens(t_, *t_.child(target, "argument"));
      }
      for (SymbolId fn : table_.call_targets(e)) {
        const Symbol& s = table_.symbol(fn);
        if (!s.definition || i >= s.params.size() || i >= s.param_symbols.size()) continue;
        const ParamInfo& p = s.params[i];
        if (by_address || (p.is_reference && !p.is_const)) aliased.push_back(s.param_symbols[i]);
      }
      if (aliased.empty()) continue;
      NodeId name = target;
      while (kind(name) == "subscript_expression") name = su::strip_parens(t_, *t_.child(name, "argument"));
      if (kind(name) == "field_expression") {
        if (auto field = t_.child(name, "field")) name = *field;
      }
      def(name, DefKind::CallByRef, std::nullopt, std::move(aliased));
    }
  }

  void use_expr(NodeId e) {
    const SyntaxNode& n = t_.node(e);
    if (!n.named) return;
    const auto& k = n.kind;
    if (k == "unsupported_construct" || k == "sizeof_expression" || k == "alignof_expression" ||
        k == "type_descriptor") {
      return;
    }
    if (k == "identifier" || k == "qualified_identifier") {
      use(e);
      return;
    }
    if (k == "field_expression") {
      if (auto arg = t_.child(e, "argument")) use_expr(*arg);
      if (auto field = t_.child(e, "field")) use(*field);
      return;
    }
    if (k == "assignment_expression") {
      auto left = t_.child(e, "left");
      auto right = t_.child(e, "right");
      auto op = t_.child(e, "operator");
      const std::string_view opt = op ? t_.text(*op) : "=";
      if (right) use_expr(*right);
      if (left && (opt == "+=" || opt == "-=") && pointer_like(*left)) pointer_arithmetic(e);
      if (left) lvalue(*left, opt != "=", right);
      return;
    }
    if (k == "update_expression") {
      if (auto arg = t_.child(e, "argument")) lvalue(*arg, true, std::nullopt);
      return;
    }
    if (k == "call_expression") {
      call(e);
      return;
    }
    if (k == "condition_declaration" || k == "declaration") {
      declaration(e);
      return;
    }
    if (k == "binary_expression") {
      auto op = t_.child(e, "operator");
      auto left = t_.child(e, "left");
      auto right = t_.child(e, "right");
      if (op && left && right && (t_.text(*op) == "+" || t_.text(*op) == "-")) {
        const bool lp = pointer_like(*left);
        const bool rp = pointer_like(*right);
        if (lp != rp || (lp && t_.text(*op) == "+")) {
          pointer_arithmetic(e);
          use_expr(lp ? *left : *right);
          return;
        }
      }
    }
    for (NodeId c : n.children) {
      if (t_.node(c).kind == "field_identifier") continue;  // designators
      use_expr(c);
    }
  }
};

struct Context {
  const CfgResult& cfg;
  const SyntaxTree& tree;
  const SymbolTable& table;
  std::map<NodeId, std::size_t> function_of;  // CFG node -> function index
  std::map<NodeId, std::size_t> function_by_entry;
  std::map<SymbolId, std::size_t> function_by_symbol;

  Context(const CfgResult& c, const SyntaxTree& t, const SymbolTable& s) : cfg(c), tree(t), table(s) {
    for (std::size_t i = 0; i < cfg.functions.size(); ++i) {
      const CfgFunction& f = cfg.functions[i];
      function_of[f.entry] = i;
      function_of[f.exit] = i;
      function_by_entry[f.entry] = i;
      function_by_symbol[f.symbol] = i;
      for (NodeId n : f.statement_nodes) function_of[n] = i;
    }
  }

  std::optional<SymbolId> owner(std::size_t fi) const { return table.symbol(cfg.functions[fi].symbol).owner; }

  std::vector<std::size_t> callees(NodeId site) const {
    std::vector<std::size_t> out;
    auto it = cfg.call_chains.find(site);
    if (it == cfg.call_chains.end()) return out;
    for (const auto& group : it->second) {
      for (NodeId entry : group) {
        if (auto f = function_by_entry.find(entry); f != function_by_entry.end()) out.push_back(f->second);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

}  // namespace

DefUseFacts compute_gen_kill(const CfgResult& cfg, const SyntaxTree& tree, const SymbolTable& table) {
  DefUseFacts facts;
  Context ctx(cfg, tree, table);
  std::map<Definition, std::size_t> index;
  auto add = [&](NodeId site, const Definition& d) {
    auto [it, inserted] = index.try_emplace(d, facts.defs.size());
    if (inserted) facts.defs.push_back(d);
    auto& gen = facts.nodes[site].gen;
    if (std::find(gen.begin(), gen.end(), it->second) == gen.end()) gen.push_back(it->second);
    return it->second;
  };

  std::vector<SymbolId> globals;
  for (const Symbol& s : table.symbols()) {
    if (is_global(table, s)) globals.push_back(s.id);
  }
  facts.nodes[NodeId{kGlobalInitId}];
  for (SymbolId g : globals) {
    add(NodeId{kGlobalInitId}, {g, NodeId{kGlobalInitId}, table.symbol(g).decl_node, DefKind::GlobalInit});
  }

  std::vector<std::set<SymbolId>> modifies(cfg.functions.size());
  std::vector<std::set<SymbolId>> members_seen(cfg.functions.size());
  for (std::size_t fi = 0; fi < cfg.functions.size(); ++fi) {
    const CfgFunction& f = cfg.functions[fi];
    const Symbol& fs = table.symbol(f.symbol);
    facts.nodes[f.entry];
    facts.nodes[f.exit];
    for (SymbolId p : fs.param_symbols) {
      add(f.entry, {p, f.entry, table.symbol(p).decl_node, DefKind::ParamEntry});
    }
    for (NodeId stmt : f.statement_nodes) {
      RegionWalker w(tree, table, facts.diagnostics);
      for (NodeId root : statement_region(tree, stmt)) w.statement(root);
      auto& node = facts.nodes[stmt];
      std::sort(w.uses.begin(), w.uses.end());
      w.uses.erase(std::unique(w.uses.begin(), w.uses.end()), w.uses.end());
      node.uses = w.uses;
      for (const Use& u : w.uses) {
        if (table.symbol(u.symbol).kind == SymbolKind::MemberVariable) members_seen[fi].insert(u.symbol);
      }
      for (const Occurrence& o : w.defs) {
        const std::size_t di = add(stmt, {o.symbol, stmt, o.node, o.kind});
        if (o.value) facts.def_value[di] = *o.value;
        if (!o.ref_params.empty()) {
          auto& rp = facts.ref_params[di];
          rp.insert(rp.end(), o.ref_params.begin(), o.ref_params.end());
        }
        if (is_global(table, table.symbol(o.symbol))) modifies[fi].insert(o.symbol);
        if (table.symbol(o.symbol).kind == SymbolKind::MemberVariable) members_seen[fi].insert(o.symbol);
      }
    }
    if (fs.owner) {
      for (const Symbol& s : table.symbols()) {
        if (s.kind == SymbolKind::MemberVariable && s.owner == fs.owner) members_seen[fi].insert(s.id);
      }
    }
    for (SymbolId m : members_seen[fi]) {
      add(f.entry, {m, f.entry, table.symbol(m).decl_node, DefKind::EntryState});
    }
    for (SymbolId g : globals) add(f.entry, {g, f.entry, table.symbol(g).decl_node, DefKind::EntryState});
  }

  // Globals a call may write: the callee's own writes plus those of its callees.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [site, chain] : cfg.call_chains) {
      auto caller = ctx.function_of.find(site);
      if (caller == ctx.function_of.end()) continue;
      for (std::size_t callee : ctx.callees(site)) {
        for (SymbolId g : modifies[callee]) changed |= modifies[caller->second].insert(g).second;
      }
    }
  }
  for (const auto& [site, chain] : cfg.call_chains) {
    if (!ctx.function_of.contains(site)) continue;
    std::set<SymbolId> written;
    for (std::size_t callee : ctx.callees(site)) written.insert(modifies[callee].begin(), modifies[callee].end());
    for (SymbolId g : written) add(site, {g, site, table.symbol(g).decl_node, DefKind::CallGlobal});
  }

  std::map<SymbolId, std::vector<std::size_t>> by_symbol;
  for (std::size_t i = 0; i < facts.defs.size(); ++i) by_symbol[facts.defs[i].symbol].push_back(i);
  for (auto& [site, node] : facts.nodes) {
    std::sort(node.gen.begin(), node.gen.end());
    std::set<SymbolId> killed;
    for (std::size_t i : node.gen) {
      if (facts.defs[i].kills()) killed.insert(facts.defs[i].symbol);
    }
    for (SymbolId s : killed) {
      for (std::size_t i : by_symbol[s]) {
        if (!std::binary_search(node.gen.begin(), node.gen.end(), i)) node.kill.push_back(i);
      }
    }
    std::sort(node.kill.begin(), node.kill.end());
  }
  return facts;
}

ReachingDefs reaching_definitions(const CodeGraph& cfg, const DefUseFacts& facts) {
  using Bits = boost::dynamic_bitset<>;
  const std::size_t width = facts.defs.size();
  std::map<NodeId, std::size_t> slot;
  std::vector<NodeId> order;
  for (const auto& [id, n] : cfg.nodes()) {
    slot[id] = order.size();
    order.push_back(id);
  }
  const std::size_t count = order.size();
  std::vector<std::vector<std::size_t>> preds(count), succs(count);
  for (const GraphEdge& e : cfg.edges()) {
    if (e.view != View::Cfg || e.label == kCallLabel || e.label == kReturnLabel) continue;
    auto s = slot.find(e.src);
    auto d = slot.find(e.dst);
    if (s == slot.end() || d == slot.end()) continue;
    preds[d->second].push_back(s->second);
    succs[s->second].push_back(d->second);
  }
  std::vector<Bits> gen(count, Bits(width)), keep(count, Bits(width)), in(count, Bits(width)), out(count, Bits(width));
  for (std::size_t i = 0; i < count; ++i) {
    keep[i].set();
    if (auto it = facts.nodes.find(order[i]); it != facts.nodes.end()) {
      for (std::size_t d : it->second.gen) gen[i].set(d);
      for (std::size_t d : it->second.kill) keep[i].reset(d);
    }
    out[i] = gen[i];
  }

  std::deque<std::size_t> work;
  std::vector<char> queued(count, 1);
  for (std::size_t i = 0; i < count; ++i) work.push_back(i);
  while (!work.empty()) {
    const std::size_t n = work.front();
    work.pop_front();
    queued[n] = 0;
    Bits acc(width);
    for (std::size_t p : preds[n]) acc |= out[p];
    in[n] = acc;
    Bits next = (acc & keep[n]) | gen[n];
    if (next != out[n]) {
      out[n] = std::move(next);
      for (std::size_t s : succs[n]) {
        if (!queued[s]) {
          queued[s] = 1;
          work.push_back(s);
        }
      }
    }
  }

  ReachingDefs rd;
  for (std::size_t i = 0; i < count; ++i) {
    auto& v = rd.in[order[i]];
    for (auto b = in[i].find_first(); b != Bits::npos; b = in[i].find_next(b)) v.push_back(b);
  }
  return rd;
}

namespace {

class DfgBuilder {
 public:
  DfgBuilder(const CfgResult& cfg, const ReachingDefs& rd, const DefUseFacts& facts, const SyntaxTree& tree,
             const SymbolTable& table)
      : ctx_(cfg, tree, table), rd_(rd), facts_(facts) {
    for (std::size_t i = 0; i < facts.defs.size(); ++i) {
      const Definition& d = facts.defs[i];
      if (d.kind == DefKind::GlobalInit) global_init_[d.symbol] = i;
      if (d.kind == DefKind::ParamEntry) param_entry_[d.symbol] = i;
    }
    for (const auto& [site, chain] : cfg.call_chains) {
      for (std::size_t callee : ctx_.callees(site)) callers_[callee].push_back(site);
    }
  }

  CodeGraph build() {
    g_.add_view(View::Dfg);
    for (std::size_t i = 0; i < facts_.defs.size(); ++i) {
      if (facts_.defs[i].materialized()) node(facts_.defs[i].occurrence);
    }
    // def -> uses it reaches
    std::map<std::size_t, std::vector<Use>> reached;
    for (const auto& [site, n] : facts_.nodes) {
      for (const Use& u : n.uses) {
        node(u.occurrence);
        for (std::size_t d : rd_.at(site)) {
          if (facts_.defs[d].symbol == u.symbol) reached[d].push_back(u);
        }
      }
    }
    for (const auto& [d, uses] : reached) {
      const auto sources = resolve(d);
      for (const Use& u : uses) {
        for (std::size_t r : sources) edge(facts_.defs[r].occurrence, u.occurrence, facts_.defs[r].symbol);
        if (auto rp = facts_.ref_params.find(d); rp != facts_.ref_params.end()) {
          for (SymbolId p : rp->second) ref_back_flow(p, u);
        }
      }
    }
    arguments_to_parameters(reached);
    return_values();
    g_.canonicalize();
    return std::move(g_);
  }

 private:
  Context ctx_;
  const ReachingDefs& rd_;
  const DefUseFacts& facts_;
  CodeGraph g_;
  std::map<SymbolId, std::size_t> global_init_;
  std::map<SymbolId, std::size_t> param_entry_;
  std::map<std::size_t, std::vector<NodeId>> callers_;

  void node(NodeId occ) { g_.upsert(graph_node_for(ctx_.tree, occ, View::Dfg)); }

  void edge(NodeId from, NodeId to, SymbolId var) {
    node(from);
    node(to);
    g_.add_edge({from, to, View::Dfg, ctx_.table.symbol(var).name});
  }

  std::vector<std::size_t> defs_at(NodeId site, SymbolId s, bool skip_entry_state) const {
    std::vector<std::size_t> out;
    for (std::size_t d : rd_.at(site)) {
      const Definition& def = facts_.defs[d];
      if (def.symbol != s) continue;
      if (skip_entry_state && def.kind == DefKind::EntryState) continue;
      out.push_back(d);
    }
    return out;
  }

  // Materialized definitions a transfer definition stands for.
  std::set<std::size_t> resolve(std::size_t d) const {
    std::set<std::size_t> out;
    std::set<std::size_t> seen;
    resolve_into(d, out, seen);
    return out;
  }

  void resolve_into(std::size_t d, std::set<std::size_t>& out, std::set<std::size_t>& seen) const {
    if (!seen.insert(d).second) return;
    const Definition& def = facts_.defs[d];
    if (def.materialized()) {
      out.insert(d);
      return;
    }
    const Symbol& s = ctx_.table.symbol(def.symbol);
    if (def.kind == DefKind::CallGlobal) {
      for (std::size_t callee : ctx_.callees(def.site)) {
        for (std::size_t x : defs_at(ctx_.cfg.functions[callee].exit, def.symbol, true)) resolve_into(x, out, seen);
      }
      return;
    }
    // EntryState
    const std::size_t fi = ctx_.function_of.at(def.site);
    if (s.kind == SymbolKind::MemberVariable) {
      for (std::size_t other = 0; other < ctx_.cfg.functions.size(); ++other) {
        if (other == fi || ctx_.owner(other) != s.owner) continue;
        for (std::size_t x : defs_at(ctx_.cfg.functions[other].exit, def.symbol, true)) {
          if (facts_.defs[x].materialized()) out.insert(x);
        }
      }
      return;
    }
    auto callers = callers_.find(fi);
    if (callers == callers_.end() || ctx_.cfg.functions[fi].name == "main") {
      if (auto gi = global_init_.find(def.symbol); gi != global_init_.end()) out.insert(gi->second);
    }
    if (callers == callers_.end()) return;
    for (NodeId site : callers->second) {
      for (std::size_t x : defs_at(site, def.symbol, false)) resolve_into(x, out, seen);
    }
  }

  // A reference or pointer parameter written in the callee flows back to the
  // caller's later uses of the aliased variable.
  void ref_back_flow(SymbolId param, const Use& u) {
    for (std::size_t fi = 0; fi < ctx_.cfg.functions.size(); ++fi) {
      const auto& ps = ctx_.table.symbol(ctx_.cfg.functions[fi].symbol).param_symbols;
      if (std::find(ps.begin(), ps.end(), param) == ps.end()) continue;
      for (std::size_t x : defs_at(ctx_.cfg.functions[fi].exit, param, true)) {
        const Definition& d = facts_.defs[x];
        if (d.kind == DefKind::Statement || d.kind == DefKind::CallByRef) edge(d.occurrence, u.occurrence, param);
      }
    }
  }

  void arguments_to_parameters(const std::map<std::size_t, std::vector<Use>>& reached) {
    for (const auto& [site, n] : facts_.nodes) {
      if (!ctx_.function_of.contains(site) || !ctx_.cfg.call_chains.contains(site)) continue;
      for (NodeId root : statement_region(ctx_.tree, site)) {
        for (NodeId call : calls_in(ctx_.tree, ctx_.table, root)) {
          const auto args = call_arguments(ctx_.tree, call);
          for (SymbolId fn : ctx_.table.call_targets(call)) {
            const Symbol& callee = ctx_.table.symbol(fn);
            if (!callee.definition) continue;
            for (std::size_t i = 0; i < args.size() && i < callee.param_symbols.size(); ++i) {
              auto pe = param_entry_.find(callee.param_symbols[i]);
              if (pe == param_entry_.end()) continue;
              auto targets = reached.find(pe->second);
              if (targets == reached.end()) continue;
              for (const Use& arg_use : n.uses) {
                if (!is_within(ctx_.tree, arg_use.occurrence, args[i])) continue;
                for (std::size_t d : defs_at(site, arg_use.symbol, false)) {
                  for (std::size_t r : resolve(d)) {
                    for (const Use& u : targets->second) edge(facts_.defs[r].occurrence, u.occurrence, facts_.defs[r].symbol);
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  void return_values() {
    for (const auto& [d, value] : facts_.def_value) {
      const Definition& def = facts_.defs[d];
      for (NodeId call : calls_in(ctx_.tree, ctx_.table, value)) {
        for (SymbolId fn : ctx_.table.call_targets(call)) {
          auto f = ctx_.function_by_symbol.find(fn);
          if (f == ctx_.function_by_symbol.end()) continue;
          for (NodeId stmt : ctx_.cfg.functions[f->second].statement_nodes) {
            if (ctx_.tree.node(stmt).kind != "return_statement") continue;
            auto it = facts_.nodes.find(stmt);
            if (it == facts_.nodes.end()) continue;
            for (const Use& u : it->second.uses) edge(u.occurrence, def.occurrence, u.symbol);
          }
        }
      }
    }
  }
};

}  // namespace

CodeGraph build_dfg(const CfgResult& cfg, const ReachingDefs& rd, const DefUseFacts& facts, const SyntaxTree& tree,
                    const SymbolTable& table) {
  return DfgBuilder(cfg, rd, facts, tree, table).build();
}

}  // namespace codeviews
