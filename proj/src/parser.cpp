// Recursive-descent parser for the C subset and the C++ class/namespace
// subset the graph builders understand. Node kinds and field names follow
// the conventions of common incremental C grammars so that downstream code
// can match on familiar names (function_definition, if_statement, ...).

#include <algorithm>
#include <set>
#include <unordered_set>

#include "codeviews/error.hpp"
#include "codeviews/syntax.hpp"
#include "lexer.hpp"

namespace codeviews {

namespace {

using detail::Token;
using detail::TokenKind;

struct ParseError {
  int line = 0;
  std::string message;
};

struct TempNode {
  std::string kind;
  std::string field;
  bool named = true;
  std::uint32_t file = 0;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  int line_start = 0;
  int col_start = 0;
  int line_end = 0;
  int col_end = 0;
  std::vector<std::size_t> children;
};

enum class Context { TopLevel, Class, Block, Parameter, Typedef };

const std::unordered_set<std::string_view> kStorageKeywords = {
    "static",  "extern",   "register", "inline",       "virtual",   "explicit", "friend",
    "mutable", "constexpr", "thread_local", "_Thread_local", "__inline",
};
const std::unordered_set<std::string_view> kQualifierKeywords = {"const", "volatile", "restrict", "__restrict",
                                                                 "_Atomic"};
const std::unordered_set<std::string_view> kPrimitiveKeywords = {
    "void", "char", "short", "int", "long", "float", "double", "signed", "unsigned",
    "bool", "_Bool", "_Complex", "wchar_t", "char16_t", "char32_t",
};
const std::unordered_set<std::string_view> kSizeModifiers = {"signed", "unsigned", "short", "long"};

// Library type names that are treated as primitive types even though they are
// lexically identifiers (system headers are never read).
const std::unordered_set<std::string_view> kBuiltinTypeNames = {
    "size_t",   "ssize_t",   "ptrdiff_t", "intptr_t", "uintptr_t", "int8_t",   "int16_t",  "int32_t",
    "int64_t",  "uint8_t",   "uint16_t",  "uint32_t", "uint64_t",  "FILE",     "time_t",   "clock_t",
    "off_t",    "pid_t",     "va_list",   "wint_t",   "intmax_t",  "uintmax_t", "pthread_t", "pthread_mutex_t",
    "pthread_cond_t", "pthread_attr_t", "sem_t", "jmp_buf", "sig_atomic_t", "string", "thrd_t", "mtx_t",
};

const std::unordered_set<std::string_view> kAssignOps = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                                         "&=", "|=", "^=", "<<=", ">>="};

int binary_precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "|") return 3;
  if (op == "^") return 4;
  if (op == "&") return 5;
  if (op == "==" || op == "!=") return 6;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "<=>") return 7;
  if (op == "<<" || op == ">>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  return 0;
}

class Parser {
 public:
  Parser(const SourceUnit& unit, Diagnostics& diagnostics) : unit_(unit), diagnostics_(diagnostics) {}

  std::vector<SyntaxNode> run() {
    std::vector<std::size_t> items;
    for (std::uint32_t f = 0; f < unit_.files.size(); ++f) {
      const auto checkpoint_types = type_names_;
      try {
        tokens_ = detail::tokenize(unit_.files[f].text, unit_.lang);
        file_ = f;
        pos_ = 0;
        class_stack_.clear();
        std::vector<std::size_t> file_items;
        while (!at_end()) file_items.push_back(parse_top_level_item(Context::TopLevel));
        items.insert(items.end(), file_items.begin(), file_items.end());
        diagnostics_.insert(diagnostics_.end(), pending_.begin(), pending_.end());
      } catch (const ParseError& e) {
        report_syntax_error(f, e.line, e.message);
        type_names_ = checkpoint_types;
      } catch (const detail::LexError& e) {
        report_syntax_error(f, e.line, e.message);
        type_names_ = checkpoint_types;
      }
      pending_.clear();
    }
    TempNode root;
    root.kind = "translation_unit";
    root.children = std::move(items);
    if (!root.children.empty()) {
      const auto& first = arena_[root.children.front()];
      const auto& last = arena_[root.children.back()];
      root.file = first.file;
      root.line_start = first.line_start;
      root.col_start = first.col_start;
      root.line_end = last.line_end;
      root.col_end = last.col_end;
    }
    arena_.push_back(std::move(root));
    return number(arena_.size() - 1);
  }

 private:
  // ---- token cursor -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    const std::size_t i = std::min(pos_ + k, tokens_.size() - 1);
    return tokens_[i];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool at(std::string_view text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind != TokenKind::End && t.kind != TokenKind::String && t.kind != TokenKind::Char &&
           t.text == text;
  }
  bool at_ident(std::size_t k = 0) const { return peek(k).kind == TokenKind::Identifier; }
  bool cpp() const { return unit_.lang == Lang::Cpp; }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string got = t.kind == TokenKind::End ? "end of file" : "'" + std::string(t.text) + "'";
    throw ParseError{t.line, message + ", got " + got};
  }

  void report_syntax_error(std::uint32_t file, int line, const std::string& message) {
    const LineOrigin o = unit_.origin(file, line);
    diagnostics_.push_back(make_diagnostic(DiagnosticCategory::SyntaxError, o.file, o.line,
                                           message + "; file excluded from analysis"));
  }

  void note(DiagnosticCategory c, int line, const std::string& message) {
    const LineOrigin o = unit_.origin(file_, line);
    pending_.push_back(make_diagnostic(c, o.file, o.line, message));
  }

  // Constructs replaced by an unsupported_construct subtree leave holes in
  // control and data flow.
  void note_unsupported(int line, const std::string& what) {
    note(DiagnosticCategory::Other, line, what + " not modeled");
    pending_.back().fatal_for = ViewSet{View::Cfg, View::Dfg};
  }

  // ---- node construction --------------------------------------------------

  std::size_t leaf(std::string kind, bool named, std::string field = {}) {
    const Token& t = peek();
    if (t.kind == TokenKind::End) fail("unexpected end of input");
    TempNode n;
    n.kind = std::move(kind);
    n.field = std::move(field);
    n.named = named;
    n.file = file_;
    n.begin = t.begin;
    n.end = t.end;
    n.line_start = t.line;
    n.col_start = t.col;
    n.line_end = t.end_line;
    n.col_end = t.end_col;
    ++pos_;
    arena_.push_back(std::move(n));
    return arena_.size() - 1;
  }

  // Consumes the current token with its default classification.
  std::size_t take(std::string field = {}) {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Identifier: return leaf("identifier", true, std::move(field));
      case TokenKind::Number: return leaf("number_literal", true, std::move(field));
      case TokenKind::String: return leaf("string_literal", true, std::move(field));
      case TokenKind::Char: return leaf("char_literal", true, std::move(field));
      default: return leaf(std::string(t.text), false, std::move(field));
    }
  }

  std::size_t expect(std::string_view text, std::string field = {}) {
    if (!at(text)) fail("expected '" + std::string(text) + "'");
    return leaf(std::string(text), false, std::move(field));
  }

  std::size_t expect_ident(std::string kind, std::string field = {}) {
    if (!at_ident()) fail("expected identifier");
    return leaf(std::move(kind), true, std::move(field));
  }

  std::size_t make(std::string kind, std::vector<std::size_t> children, std::string field = {}) {
    TempNode n;
    n.kind = std::move(kind);
    n.field = std::move(field);
    n.file = file_;
    if (!children.empty()) {
      const TempNode& first = arena_[children.front()];
      const TempNode& last = arena_[children.back()];
      n.begin = first.begin;
      n.end = last.end;
      n.line_start = first.line_start;
      n.col_start = first.col_start;
      n.line_end = last.line_end;
      n.col_end = last.col_end;
    } else {
      const Token& t = peek();
      n.begin = n.end = t.begin;
      n.line_start = n.line_end = t.line;
      n.col_start = n.col_end = t.col;
    }
    n.children = std::move(children);
    arena_.push_back(std::move(n));
    return arena_.size() - 1;
  }

  std::size_t with_field(std::size_t node, std::string field) {
    arena_[node].field = std::move(field);
    return node;
  }

  std::string_view text_of(std::size_t node) const {
    const TempNode& n = arena_[node];
    return std::string_view(unit_.files[n.file].text).substr(n.begin, n.end - n.begin);
  }

  // Consumes tokens up to and including the first `;` at depth zero, or the
  // `}` that closes the first top-level brace group.
  std::size_t skip_unsupported(std::vector<std::size_t> children, const std::string& what, int line,
                               bool stop_after_block = true) {
    int depth = 0;
    bool saw_block = false;
    while (!at_end()) {
      if (depth == 0 && at(";")) {
        children.push_back(take());
        break;
      }
      if (depth == 0 && (at("}") || at(")") || at("]"))) break;
      const bool open = at("{") || at("(") || at("[");
      const bool close = at("}") || at(")") || at("]");
      const bool brace_close = at("}");
      children.push_back(take());
      if (open) ++depth;
      if (close) {
        --depth;
        if (depth == 0 && brace_close) saw_block = true;
      }
      if (saw_block && stop_after_block && depth == 0) {
        if (at(";")) children.push_back(take());
        if (!at("catch")) break;
        saw_block = false;
      }
    }
    note_unsupported(line, what);
    return make("unsupported_construct", std::move(children));
  }

  // ---- lookahead helpers --------------------------------------------------

  bool is_type_name(std::string_view name) const {
    return type_names_.contains(std::string(name)) || kBuiltinTypeNames.contains(name);
  }

  bool starts_type_keyword(std::size_t k = 0) const {
    const Token& t = peek(k);
    if (t.kind != TokenKind::Keyword) return false;
    return kStorageKeywords.contains(t.text) || kQualifierKeywords.contains(t.text) ||
           kPrimitiveKeywords.contains(t.text) || t.text == "struct" || t.text == "union" || t.text == "enum" ||
           t.text == "class" || t.text == "typename" || (cpp() && t.text == "auto") ||
           (!cpp() && t.text == "auto");
  }

  // Skips a balanced `<...>` starting at offset k. Returns offset after `>`.
  std::optional<std::size_t> skip_template_args(std::size_t k) const {
    if (!at("<", k)) return std::nullopt;
    int depth = 0;
    for (std::size_t i = k; i < k + 64; ++i) {
      const Token& t = peek(i);
      if (t.kind == TokenKind::End) return std::nullopt;
      if (t.text == "<") ++depth;
      else if (t.text == ">") --depth;
      else if (t.text == ">>") depth -= 2;
      else if (t.text == ";" || t.text == "{" || t.text == "}" || t.text == "&&" || t.text == "||") return std::nullopt;
      if (depth <= 0) return i + 1;
    }
    return std::nullopt;
  }

  // Scans a possibly qualified / templated type name starting at offset k.
  std::optional<std::size_t> scan_type_name(std::size_t k) const {
    if (at("::", k)) ++k;
    if (!at_ident(k)) return std::nullopt;
    ++k;
    while (true) {
      if (cpp() && at("<", k)) {
        auto after = skip_template_args(k);
        if (!after) return std::nullopt;
        k = *after;
      }
      if (at("::", k) && at_ident(k + 1)) {
        k += 2;
        continue;
      }
      break;
    }
    return k;
  }

  bool looks_like_declaration() const {
    if (starts_type_keyword()) return true;
    if (at("typedef") || at("using") || at("static_assert")) return true;
    if (!(at_ident() || at("::"))) return false;
    const auto after = scan_type_name(0);
    if (!after) return false;
    const std::size_t k = *after;
    const bool known = is_type_name(peek(at("::") ? 1 : 0).text) || *after > 1;
    if (at_ident(k)) return true;
    if (starts_type_keyword(k) && peek(k).text != "auto") return true;  // `T const x`
    if (at("*", k) || at("&", k) || at("&&", k)) {
      std::size_t j = k;
      while (at("*", j) || at("&", j) || at("&&", j) || at("const", j)) ++j;
      if (at_ident(j) && (at("=", j + 1) || at(";", j + 1) || at(",", j + 1) || at("[", j + 1) ||
                          at(")", j + 1) || (known && at("(", j + 1)))) {
        return true;
      }
      if (known && at("(", j)) return true;
    }
    return false;
  }

  // At '(' following a declarator name: parameters, or C++ constructor arguments?
  bool looks_like_parameters() const {
    if (!cpp()) return true;
    const Token& t = peek(1);
    if (at(")", 1)) return true;
    if (at("...", 1)) return true;
    if (t.kind == TokenKind::Keyword) {
      return starts_type_keyword(1) || t.text == "void";
    }
    if (t.kind != TokenKind::Identifier && !at("::", 1)) return false;
    if (is_type_name(t.text)) return true;
    const auto after = scan_type_name(1);
    if (!after) return false;
    const std::size_t k = *after;
    if (at_ident(k)) return true;
    if (at("*", k) || at("&", k) || at("&&", k)) {
      std::size_t j = k;
      while (at("*", j) || at("&", j) || at("&&", j) || at("const", j)) ++j;
      return at_ident(j) || at(",", j) || at(")", j);
    }
    return k > 2 && (at(",", k) || at(")", k));
  }

  bool looks_like_type_in_parens() const {
    // Called at '('; decides between cast/compound literal and expression.
    if (starts_type_keyword(1)) return peek(1).text != "auto" || cpp();
    if (!(at_ident(1) || at("::", 1))) return false;
    const auto after = scan_type_name(1);
    if (!after) return false;
    std::size_t k = *after;
    const bool known = is_type_name(peek(at("::", 1) ? 2 : 1).text) || k > 2;
    while (at("*", k) || at("&", k) || at("const", k)) ++k;
    if (!at(")", k)) return false;
    if (known) return true;
    // `(T) x` can only be a cast.
    const Token& next = peek(k + 1);
    return next.kind == TokenKind::Identifier || next.kind == TokenKind::Number ||
           next.kind == TokenKind::Char || next.kind == TokenKind::String;
  }

  // ---- top level ----------------------------------------------------------

  std::size_t parse_top_level_item(Context ctx) {
    const int line = peek().line;
    if (at(";")) return take();
    if (cpp() && at("namespace")) return parse_namespace();
    if (cpp() && at("using")) return parse_using();
    if (cpp() && at("template")) {
      std::vector<std::size_t> children{take()};
      return skip_unsupported(std::move(children), "template declaration", line);
    }
    if (at("static_assert") || at("_Static_assert")) {
      return skip_unsupported({}, "static assertion", line, false);
    }
    if (at("extern") && peek(1).kind == TokenKind::String) return parse_linkage();
    if (at("typedef")) return parse_typedef();
    if (ctx == Context::Class && (at("public") || at("private") || at("protected")) && at(":", 1)) {
      std::vector<std::size_t> children{leaf("access_specifier", true)};
      children.push_back(expect(":"));
      return children.front();
    }
    return parse_declaration(ctx);
  }

  std::size_t parse_namespace() {
    std::vector<std::size_t> children{take()};
    if (at_ident()) {
      children.push_back(expect_ident("namespace_identifier", "name"));
      while (at("::") && at_ident(1)) {
        children.push_back(take());
        children.push_back(expect_ident("namespace_identifier", "name"));
      }
    }
    if (at("=")) return skip_unsupported(std::move(children), "namespace alias", peek().line, false);
    children.push_back(parse_declaration_list("body"));
    return make("namespace_definition", std::move(children));
  }

  std::size_t parse_declaration_list(std::string field) {
    std::vector<std::size_t> children{expect("{")};
    while (!at("}")) {
      if (at_end()) fail("expected '}'");
      children.push_back(parse_top_level_item(Context::TopLevel));
    }
    children.push_back(expect("}"));
    return make("declaration_list", std::move(children), std::move(field));
  }

  std::size_t parse_using() {
    std::vector<std::size_t> children{take()};
    if (at("namespace")) {
      children.push_back(take());
      children.push_back(parse_scoped_name("namespace_identifier", "name"));
      children.push_back(expect(";"));
      return make("using_declaration", std::move(children));
    }
    if (at_ident() && at("=", 1)) {
      const std::string name(peek().text);
      children.push_back(expect_ident("type_identifier", "name"));
      children.push_back(take());
      children.push_back(parse_type_descriptor("type"));
      children.push_back(expect(";"));
      type_names_.insert(name);
      return make("alias_declaration", std::move(children));
    }
    children.push_back(parse_scoped_name("identifier", "name"));
    children.push_back(expect(";"));
    return make("using_declaration", std::move(children));
  }

  std::size_t parse_linkage() {
    std::vector<std::size_t> children{take(), take("value")};
    if (at("{")) {
      children.push_back(parse_declaration_list("body"));
    } else {
      children.push_back(with_field(parse_declaration(Context::TopLevel), "body"));
    }
    return make("linkage_specification", std::move(children));
  }

  std::size_t parse_typedef() {
    std::vector<std::size_t> children{take()};
    auto specs = parse_specifiers(Context::Typedef);
    children.insert(children.end(), specs.begin(), specs.end());
    while (true) {
      auto d = parse_declarator(Context::Typedef, "declarator");
      register_declared_type(d);
      children.push_back(d);
      if (at(",")) {
        children.push_back(take());
        continue;
      }
      break;
    }
    children.push_back(expect(";"));
    return make("type_definition", std::move(children));
  }

  void register_declared_type(std::size_t declarator) {
    // The innermost type_identifier of a typedef declarator is the new name.
    std::vector<std::size_t> stack{declarator};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      if (arena_[n].kind == "type_identifier") {
        type_names_.insert(std::string(text_of(n)));
        return;
      }
      if (arena_[n].kind == "parameter_list") continue;
      for (auto it = arena_[n].children.rbegin(); it != arena_[n].children.rend(); ++it) stack.push_back(*it);
    }
  }

  // ---- declarations -------------------------------------------------------

  bool at_constructor_name() const {
    if (class_stack_.empty()) return false;
    if (at("~") && at_ident(1) && peek(1).text == class_stack_.back()) return true;
    return at_ident() && peek().text == class_stack_.back() && at("(", 1);
  }

  // `A::A(` or `A::~A(` at top level.
  bool at_qualified_constructor() const {
    if (!cpp() || !at_ident()) return false;
    std::size_t k = 0;
    std::string_view last;
    while (at_ident(k) && at("::", k + 1)) {
      last = peek(k).text;
      k += 2;
    }
    if (last.empty()) return false;
    if (at("~", k) && at_ident(k + 1)) return true;
    return at_ident(k) && peek(k).text == last && at("(", k + 1);
  }

  std::vector<std::size_t> parse_specifiers(Context ctx) {
    std::vector<std::size_t> out;
    bool has_type = false;
    std::vector<std::size_t> sized;
    auto flush_sized = [&]() {
      if (sized.empty()) return;
      bool modifier = false;
      for (auto s : sized) modifier |= kSizeModifiers.contains(text_of(s));
      if (sized.size() == 1 && !modifier) {
        out.push_back(with_field(sized.front(), "type"));
      } else {
        out.push_back(make("sized_type_specifier", sized, "type"));
      }
      sized.clear();
      has_type = true;
    };

    while (!at_end()) {
      const Token& t = peek();
      // keep children in source order: close a primitive run before anything else
      if (!sized.empty() && !(t.kind == TokenKind::Keyword && kPrimitiveKeywords.contains(t.text))) flush_sized();
      if (t.kind == TokenKind::Keyword) {
        if (kStorageKeywords.contains(t.text) || (!cpp() && t.text == "auto")) {
          out.push_back(leaf("storage_class_specifier", true));
          continue;
        }
        if (kQualifierKeywords.contains(t.text)) {
          out.push_back(leaf("type_qualifier", true));
          continue;
        }
        if (kPrimitiveKeywords.contains(t.text) && !(has_type && sized.empty())) {
          sized.push_back(leaf("primitive_type", true));
          continue;
        }
        if (cpp() && t.text == "auto" && !has_type && sized.empty()) {
          out.push_back(leaf("primitive_type", true, "type"));
          has_type = true;
          continue;
        }
        if (!has_type && sized.empty() && (t.text == "struct" || t.text == "union" || t.text == "class")) {
          out.push_back(parse_class_specifier());
          has_type = true;
          continue;
        }
        if (!has_type && sized.empty() && t.text == "enum") {
          out.push_back(parse_enum_specifier());
          has_type = true;
          continue;
        }
        if (t.text == "typename") {
          out.push_back(take());
          continue;
        }
        break;
      }
      if (has_type || !sized.empty()) break;
      if (at("::") || t.kind == TokenKind::Identifier) {
        if (ctx == Context::Class && at_constructor_name()) break;
        if (ctx != Context::Class && at_qualified_constructor()) break;
        if (t.kind == TokenKind::Identifier && kBuiltinTypeNames.contains(t.text) && !at("::", 1)) {
          out.push_back(leaf("primitive_type", true, "type"));
          has_type = true;
          continue;
        }
        out.push_back(with_field(parse_type_name(), "type"));
        has_type = true;
        continue;
      }
      break;
    }
    flush_sized();
    if (!has_type && out.empty() && ctx != Context::Class && !at_qualified_constructor()) {
      fail("expected declaration specifiers");
    }
    return out;
  }

  // type_identifier, qualified type, or template type.
  std::size_t parse_type_name() {
    std::vector<std::size_t> parts;
    if (at("::")) parts.push_back(take());
    if (!at_ident()) fail("expected type name");
    if (at("::", 1)) {
      std::vector<std::size_t> children;
      if (!parts.empty()) children = parts;
      children.push_back(leaf("namespace_identifier", true, "scope"));
      if (cpp() && at("<")) children.push_back(parse_template_args());
      children.push_back(take());
      children.push_back(with_field(parse_type_name(), "name"));
      return make("qualified_identifier", std::move(children));
    }
    std::size_t name = leaf("type_identifier", true);
    if (!parts.empty()) {
      parts.push_back(name);
      name = make("qualified_identifier", parts);
    }
    if (cpp() && at("<")) {
      auto args = parse_template_args();
      return make("template_type", {with_field(name, "name"), args});
    }
    return name;
  }

  std::size_t parse_template_args() {
    std::vector<std::size_t> children{expect("<")};
    int depth = 1;
    while (!at_end() && depth > 0) {
      if (at(">")) {
        --depth;
        children.push_back(take());
        continue;
      }
      if (at(">>")) {
        // Splitting the token would break byte spans; `>>` closes two levels.
        depth -= 2;
        children.push_back(take());
        continue;
      }
      if (at("<")) {
        ++depth;
        children.push_back(take());
        continue;
      }
      if (at_ident() || starts_type_keyword()) {
        if (at_ident()) {
          children.push_back(leaf("type_identifier", true));
        } else {
          children.push_back(leaf(kPrimitiveKeywords.contains(peek().text) ? "primitive_type" : "type_qualifier",
                                  true));
        }
        continue;
      }
      children.push_back(take());
    }
    return make("template_argument_list", std::move(children), "arguments");
  }

  std::size_t parse_class_specifier() {
    const std::string keyword(peek().text);
    std::vector<std::size_t> children{take()};
    std::string name;
    if (at_ident()) {
      name = std::string(peek().text);
      children.push_back(with_field(parse_type_name(), "name"));
      if (cpp()) type_names_.insert(name);
    }
    if (at("final")) children.push_back(take());
    if (cpp() && at(":") && !at("::")) {
      std::vector<std::size_t> bases{take()};
      while (!at("{") && !at_end()) {
        if (at("public") || at("private") || at("protected")) {
          bases.push_back(leaf("access_specifier", true));
        } else if (at("virtual")) {
          bases.push_back(leaf("storage_class_specifier", true));
        } else if (at(",")) {
          bases.push_back(take());
        } else {
          bases.push_back(parse_type_name());
        }
      }
      children.push_back(make("base_class_clause", std::move(bases)));
    }
    if (at("{")) {
      class_stack_.push_back(name.empty() ? std::string("<anonymous>") : name);
      std::vector<std::size_t> members{take()};
      while (!at("}")) {
        if (at_end()) fail("expected '}'");
        members.push_back(parse_top_level_item(Context::Class));
      }
      members.push_back(take());
      class_stack_.pop_back();
      children.push_back(make("field_declaration_list", std::move(members), "body"));
    }
    std::string kind = keyword == "class" ? "class_specifier" : keyword == "union" ? "union_specifier"
                                                                                    : "struct_specifier";
    return make(std::move(kind), std::move(children), "type");
  }

  std::size_t parse_enum_specifier() {
    std::vector<std::size_t> children{take()};
    if (at("class") || at("struct")) children.push_back(take());
    if (at_ident()) {
      if (cpp()) type_names_.insert(std::string(peek().text));
      children.push_back(expect_ident("type_identifier", "name"));
    }
    if (at(":")) {
      children.push_back(take());
      auto specs = parse_specifiers(Context::Typedef);
      children.insert(children.end(), specs.begin(), specs.end());
    }
    if (at("{")) {
      std::vector<std::size_t> list{take()};
      while (!at("}")) {
        if (at_end()) fail("expected '}'");
        std::vector<std::size_t> e{expect_ident("identifier", "name")};
        if (at("=")) {
          e.push_back(take());
          e.push_back(parse_assignment("value"));
        }
        list.push_back(make("enumerator", std::move(e)));
        if (at(",")) list.push_back(take());
        else break;
      }
      list.push_back(expect("}"));
      children.push_back(make("enumerator_list", std::move(list), "body"));
    }
    return make("enum_specifier", std::move(children), "type");
  }

  static bool is_function_declarator_chain(const std::vector<TempNode>& arena, std::size_t n) {
    // pointer/reference wrappers around a function declarator still declare a function
    while (true) {
      const auto& node = arena[n];
      if (node.kind == "function_declarator") return true;
      if (node.kind != "pointer_declarator" && node.kind != "reference_declarator") return false;
      std::optional<std::size_t> inner;
      for (auto c : node.children) {
        if (arena[c].field == "declarator") inner = c;
      }
      if (!inner) return false;
      n = *inner;
    }
  }

  std::size_t parse_declaration(Context ctx) {
    const int start_line = peek().line;
    auto children = parse_specifiers(ctx);
    const bool in_class = ctx == Context::Class;
    if (at(";")) {
      children.push_back(take());
      return make(in_class ? "field_declaration" : "declaration", std::move(children));
    }
    bool first = true;
    while (true) {
      std::size_t declarator = parse_declarator(ctx, "declarator");
      if (first && is_function_declarator_chain(arena_, declarator) &&
          (at("{") || (cpp() && at(":") && !at("::")) || (cpp() && at("try")))) {
        children.push_back(declarator);
        if (at(":")) children.push_back(parse_field_initializer_list());
        if (at("try")) {
          children.push_back(skip_unsupported({}, "function try block", peek().line));
        } else {
          children.push_back(parse_compound_statement("body"));
        }
        return make("function_definition", std::move(children));
      }
      first = false;
      if (at("=")) {
        std::vector<std::size_t> init{declarator, take()};
        if (at("default") || at("delete") || (at("0") && is_function_declarator_chain(arena_, declarator))) {
          init.push_back(take("value"));
        } else {
          init.push_back(parse_initializer("value"));
        }
        children.push_back(make("init_declarator", std::move(init)));
      } else if (cpp() && at("(")) {
        children.push_back(make("init_declarator", {declarator, parse_argument_list("value")}));
      } else if (cpp() && at("{")) {
        children.push_back(make("init_declarator", {declarator, parse_initializer_list("value")}));
      } else if (at(":") && in_class) {
        std::vector<std::size_t> bits{take()};
        bits.push_back(parse_conditional(""));
        children.push_back(declarator);
        children.push_back(make("bitfield_clause", std::move(bits)));
      } else {
        children.push_back(declarator);
      }
      if (at(",")) {
        children.push_back(take());
        continue;
      }
      break;
    }
    if (!at(";")) {
      (void)start_line;
      fail("expected ';' after declaration");
    }
    children.push_back(take());
    return make(in_class ? "field_declaration" : "declaration", std::move(children));
  }

  std::size_t parse_field_initializer_list() {
    std::vector<std::size_t> children{expect(":")};
    while (true) {
      std::vector<std::size_t> init{parse_scoped_name("field_identifier", "")};
      if (at("(")) {
        init.push_back(parse_argument_list("arguments"));
      } else if (at("{")) {
        init.push_back(parse_initializer_list("arguments"));
      } else {
        fail("expected member initializer");
      }
      children.push_back(make("field_initializer", std::move(init)));
      if (at(",")) {
        children.push_back(take());
        continue;
      }
      break;
    }
    return make("field_initializer_list", std::move(children));
  }

  // name_kind depends on context: identifiers for variables and functions,
  // field_identifier for class members, type_identifier for typedef names.
  std::string declarator_name_kind(Context ctx) const {
    if (ctx == Context::Class) return "field_identifier";
    if (ctx == Context::Typedef) return "type_identifier";
    return "identifier";
  }

  std::size_t parse_declarator(Context ctx, std::string field, bool abstract = false) {
    if (at("*") || (cpp() && at("^"))) {
      std::vector<std::size_t> children{take()};
      while (kQualifierKeywords.contains(peek().text) && peek().kind == TokenKind::Keyword) {
        children.push_back(leaf("type_qualifier", true));
      }
      if (abstract && !starts_declarator()) {
        return make("abstract_pointer_declarator", std::move(children), std::move(field));
      }
      children.push_back(parse_declarator(ctx, "declarator", abstract));
      return make(abstract ? "abstract_pointer_declarator" : "pointer_declarator", std::move(children),
                  std::move(field));
    }
    if (cpp() && (at("&") || at("&&"))) {
      std::vector<std::size_t> children{take()};
      if (abstract && !starts_declarator()) {
        return make("abstract_reference_declarator", std::move(children), std::move(field));
      }
      children.push_back(parse_declarator(ctx, "declarator", abstract));
      return make(abstract ? "abstract_reference_declarator" : "reference_declarator", std::move(children),
                  std::move(field));
    }

    std::optional<std::size_t> base;
    if (at("(") && (at("*", 1) || at("^", 1) || (cpp() && (at("&", 1))) ||
                    (!abstract && at_ident(1) && at(")", 2) && at("(", 3)))) {
      std::vector<std::size_t> children{take()};
      children.push_back(parse_declarator(ctx, "declarator", abstract));
      children.push_back(expect(")"));
      base = make(abstract ? "abstract_parenthesized_declarator" : "parenthesized_declarator", std::move(children));
    } else if (at("~") && at_ident(1)) {
      std::vector<std::size_t> children{take(), expect_ident("identifier")};
      base = make("destructor_name", std::move(children));
    } else if (cpp() && at("operator")) {
      base = parse_operator_name();
    } else if (at_ident() || (cpp() && at("::"))) {
      if (cpp() && (at("::") || at("::", 1))) {
        base = parse_scoped_name(declarator_name_kind(ctx), "");
      } else {
        base = leaf(declarator_name_kind(ctx), true);
      }
    } else if (!abstract) {
      fail("expected declarator");
    }

    std::size_t current = base ? *base : 0;
    bool have = base.has_value();
    while (true) {
      if (at("[")) {
        std::vector<std::size_t> children;
        if (have) children.push_back(with_field(current, "declarator"));
        children.push_back(take());
        while (at("static") || kQualifierKeywords.contains(peek().text)) children.push_back(take());
        if (!at("]")) children.push_back(parse_expression("size"));
        children.push_back(expect("]"));
        current = make(abstract ? "abstract_array_declarator" : "array_declarator", std::move(children));
        have = true;
        continue;
      }
      if (at("(") && (!have || looks_like_parameters())) {
        if (!have && !abstract) break;
        std::vector<std::size_t> children;
        if (have) children.push_back(with_field(current, "declarator"));
        children.push_back(parse_parameter_list());
        while (at("const") || at("volatile") || at("override") || at("final") || at("noexcept") ||
               at("throw") || at("&") || at("&&")) {
          if (at("const") || at("volatile")) {
            children.push_back(leaf("type_qualifier", true));
          } else if ((at("noexcept") || at("throw")) && at("(", 1)) {
            children.push_back(take());
            children.push_back(parse_argument_list(""));
          } else {
            children.push_back(take());
          }
        }
        if (at("->")) {
          children.push_back(take());
          children.push_back(parse_type_descriptor("trailing_return"));
        }
        current = make(abstract ? "abstract_function_declarator" : "function_declarator", std::move(children));
        have = true;
        continue;
      }
      break;
    }
    if (!have) return make("abstract_declarator", {}, std::move(field));
    return with_field(current, std::move(field));
  }

  bool starts_declarator() const {
    return at("*") || at("&") || at("&&") || at("[") || at_ident() || at("(");
  }

  std::size_t parse_operator_name() {
    const int line = peek().line;
    std::vector<std::size_t> children{take()};
    if (at("(") && at(")", 1)) {
      children.push_back(take());
      children.push_back(take());
    } else if (at("[") && at("]", 1)) {
      children.push_back(take());
      children.push_back(take());
    } else if (at("new") || at("delete")) {
      children.push_back(take());
      if (at("[")) {
        children.push_back(take());
        children.push_back(expect("]"));
      }
    } else if (!at("(")) {
      // conversion operators consume a type
      if (at_ident() || starts_type_keyword()) {
        auto specs = parse_specifiers(Context::Typedef);
        children.insert(children.end(), specs.begin(), specs.end());
        while (at("*") || at("&")) children.push_back(take());
      } else {
        children.push_back(take());
      }
    }
    auto node = make("operator_name", std::move(children));
    note(DiagnosticCategory::OperatorOverloading, line, "operator overloading '" + std::string(text_of(node)) +
                                                            "' is not linked into control or data flow");
    return node;
  }

  std::size_t parse_scoped_name(const std::string& leaf_kind, std::string field) {
    std::vector<std::size_t> children;
    if (at("::")) children.push_back(take());
    if (at("~")) {
      std::vector<std::size_t> d{take(), expect_ident("identifier")};
      children.push_back(make("destructor_name", std::move(d)));
    } else if (at("operator")) {
      children.push_back(parse_operator_name());
    } else if (at_ident() && at("::", 1)) {
      children.push_back(leaf("namespace_identifier", true, "scope"));
      if (cpp() && at("<")) children.push_back(parse_template_args());
      children.push_back(take());
      children.push_back(with_field(parse_scoped_name(leaf_kind, ""), "name"));
      return make("qualified_identifier", std::move(children), std::move(field));
    } else {
      children.push_back(expect_ident(leaf_kind, children.empty() ? field : "name"));
      if (children.size() == 1) return children.front();
    }
    if (children.size() == 1) return with_field(children.front(), std::move(field));
    return make("qualified_identifier", std::move(children), std::move(field));
  }

  std::size_t parse_parameter_list() {
    std::vector<std::size_t> children{expect("(")};
    while (!at(")")) {
      if (at_end()) fail("expected ')'");
      if (at("...")) {
        children.push_back(leaf("variadic_parameter", true));
      } else {
        std::vector<std::size_t> param = parse_specifiers(Context::Parameter);
        if (!at(",") && !at(")") && !at("=")) {
          param.push_back(concretize(parse_declarator(Context::Parameter, "declarator", true)));
        }
        std::string kind = "parameter_declaration";
        if (at("=")) {
          param.push_back(take());
          param.push_back(parse_assignment("default_value"));
          kind = "optional_parameter_declaration";
        }
        children.push_back(make(std::move(kind), std::move(param)));
      }
      if (at(",")) {
        children.push_back(take());
        continue;
      }
      break;
    }
    children.push_back(expect(")"));
    return make("parameter_list", std::move(children), "parameters");
  }

  // A parameter declarator that names something is not abstract.
  std::size_t concretize(std::size_t declarator) {
    std::vector<std::size_t> chain;
    std::size_t n = declarator;
    bool named = false;
    while (true) {
      chain.push_back(n);
      const auto& node = arena_[n];
      if (node.kind == "identifier") {
        named = true;
        break;
      }
      std::optional<std::size_t> inner;
      for (auto c : node.children) {
        const auto& k = arena_[c].kind;
        if (arena_[c].field == "declarator" || k == "identifier" ||
            (k.find("declarator") != std::string::npos && k != "parameter_list")) {
          inner = c;
        }
      }
      if (!inner) break;
      n = *inner;
    }
    if (!named) return declarator;
    for (auto c : chain) {
      auto& kind = arena_[c].kind;
      if (kind.starts_with("abstract_")) kind = kind.substr(9);
    }
    return declarator;
  }

  std::size_t parse_type_descriptor(std::string field) {
    std::vector<std::size_t> children = parse_specifiers(Context::Parameter);
    if (at("*") || at("&") || at("&&") || at("[") || (at("(") && (at("*", 1) || at("^", 1)))) {
      children.push_back(parse_declarator(Context::Parameter, "declarator", true));
    }
    return make("type_descriptor", std::move(children), std::move(field));
  }

  std::size_t parse_initializer(std::string field) {
    if (at("{")) return parse_initializer_list(std::move(field));
    return parse_assignment(std::move(field));
  }

  std::size_t parse_initializer_list(std::string field) {
    std::vector<std::size_t> children{expect("{")};
    while (!at("}")) {
      if (at_end()) fail("expected '}'");
      if (at(".") && at_ident(1)) {
        std::vector<std::size_t> designator{take(), expect_ident("field_identifier")};
        std::vector<std::size_t> pair{make("field_designator", std::move(designator), "designator")};
        pair.push_back(expect("="));
        pair.push_back(parse_initializer("value"));
        children.push_back(make("initializer_pair", std::move(pair)));
      } else if (at("[")) {
        std::vector<std::size_t> designator{take(), parse_expression("")};
        designator.push_back(expect("]"));
        std::vector<std::size_t> pair{make("subscript_designator", std::move(designator), "designator")};
        pair.push_back(expect("="));
        pair.push_back(parse_initializer("value"));
        children.push_back(make("initializer_pair", std::move(pair)));
      } else {
        children.push_back(parse_initializer(""));
      }
      if (at(",")) {
        children.push_back(take());
        continue;
      }
      break;
    }
    children.push_back(expect("}"));
    return make("initializer_list", std::move(children), std::move(field));
  }

  // ---- statements ---------------------------------------------------------

  std::size_t parse_compound_statement(std::string field) {
    std::vector<std::size_t> children{expect("{")};
    while (!at("}")) {
      if (at_end()) fail("expected '}'");
      if (at("case") || at("default")) {
        children.push_back(parse_case_statement());
      } else {
        children.push_back(parse_statement(""));
      }
    }
    children.push_back(take());
    return make("compound_statement", std::move(children), std::move(field));
  }

  std::size_t parse_case_statement() {
    std::vector<std::size_t> children{take()};
    if (arena_[children.front()].kind == "case") {
      children.push_back(parse_conditional("value"));
      if (at("...")) {  // GNU case ranges
        children.push_back(take());
        children.push_back(parse_conditional("value"));
      }
    }
    children.push_back(expect(":"));
    while (!at("case") && !at("default") && !at("}")) {
      if (at_end()) fail("expected '}'");
      children.push_back(parse_statement(""));
    }
    return make("case_statement", std::move(children));
  }

  std::size_t parse_paren_condition(std::string field) {
    std::vector<std::size_t> children{expect("(")};
    if (cpp() && looks_like_declaration() && !at(")")) {
      // `if (T x = e)`: keep the declaration form inside the condition.
      auto specs = parse_specifiers(Context::Block);
      std::vector<std::size_t> decl = specs;
      std::size_t d = parse_declarator(Context::Block, "declarator");
      std::vector<std::size_t> init{d};
      init.push_back(expect("="));
      init.push_back(parse_assignment("value"));
      decl.push_back(make("init_declarator", std::move(init)));
      children.push_back(make("condition_declaration", std::move(decl)));
    } else {
      children.push_back(parse_expression(""));
    }
    children.push_back(expect(")"));
    return make(children.size() == 3 && arena_[children[1]].kind == "condition_declaration" ? "condition_clause"
                                                                                           : "parenthesized_expression",
                std::move(children), std::move(field));
  }

  std::size_t parse_statement(std::string field) {
    const Token& t = peek();
    const int line = t.line;
    if (at("{")) return parse_compound_statement(std::move(field));
    if (at("if")) {
      std::vector<std::size_t> children{take()};
      if (at("constexpr")) children.push_back(take());
      children.push_back(parse_paren_condition("condition"));
      children.push_back(parse_statement("consequence"));
      if (at("else")) {
        children.push_back(take());
        children.push_back(parse_statement("alternative"));
      }
      return make("if_statement", std::move(children), std::move(field));
    }
    if (at("while")) {
      std::vector<std::size_t> children{take()};
      children.push_back(parse_paren_condition("condition"));
      children.push_back(parse_statement("body"));
      return make("while_statement", std::move(children), std::move(field));
    }
    if (at("do")) {
      std::vector<std::size_t> children{take()};
      children.push_back(parse_statement("body"));
      children.push_back(expect("while"));
      children.push_back(parse_paren_condition("condition"));
      children.push_back(expect(";"));
      return make("do_statement", std::move(children), std::move(field));
    }
    if (at("for")) return parse_for(std::move(field));
    if (at("switch")) {
      std::vector<std::size_t> children{take()};
      children.push_back(parse_paren_condition("condition"));
      children.push_back(parse_compound_statement("body"));
      return make("switch_statement", std::move(children), std::move(field));
    }
    if (at("break") || at("continue")) {
      const std::string kind = at("break") ? "break_statement" : "continue_statement";
      std::vector<std::size_t> children{take()};
      children.push_back(expect(";"));
      return make(kind, std::move(children), std::move(field));
    }
    if (at("return")) {
      std::vector<std::size_t> children{take()};
      if (!at(";")) children.push_back(parse_expression_or_braced(""));
      children.push_back(expect(";"));
      return make("return_statement", std::move(children), std::move(field));
    }
    if (at("goto")) {
      std::vector<std::size_t> children{take()};
      if (at("*")) {
        children.push_back(take());
        children.push_back(parse_expression("label"));
      } else {
        children.push_back(expect_ident("statement_identifier", "label"));
      }
      children.push_back(expect(";"));
      return make("goto_statement", std::move(children), std::move(field));
    }
    if (cpp() && (at("try") || at("throw"))) {
      const bool is_try = at("try");
      return with_field(skip_unsupported({}, is_try ? "exception handling (try/catch)" : "throw expression", line,
                                         is_try),
                        std::move(field));
    }
    if (at("asm") || at("__asm__") || at("__asm")) {
      return with_field(skip_unsupported({}, "inline assembly", line, false), std::move(field));
    }
    if (at_ident() && at(":", 1)) {
      std::vector<std::size_t> children{leaf("statement_identifier", true, "label"), take()};
      if (!at("}")) children.push_back(parse_statement(""));
      return make("labeled_statement", std::move(children), std::move(field));
    }
    if (at(";")) {
      return make("expression_statement", {take()}, std::move(field));
    }
    if (at("static_assert") || at("_Static_assert")) {
      return with_field(skip_unsupported({}, "static assertion", line, false), std::move(field));
    }
    if (at("typedef")) return with_field(parse_typedef(), std::move(field));
    if (cpp() && at("using")) return with_field(parse_using(), std::move(field));
    if (cpp() && at("template")) {
      return with_field(skip_unsupported({take()}, "template declaration", line), std::move(field));
    }
    if (looks_like_declaration()) return with_field(parse_declaration(Context::Block), std::move(field));
    std::vector<std::size_t> children{parse_expression("")};
    children.push_back(expect(";"));
    return make("expression_statement", std::move(children), std::move(field));
  }

  std::size_t parse_for(std::string field) {
    std::vector<std::size_t> children{take()};
    children.push_back(expect("("));
    // range-based for: `for (decl : expr)`
    if (cpp() && looks_like_declaration()) {
      const std::size_t save = pos_;
      const std::size_t arena_size = arena_.size();
      auto specs = parse_specifiers(Context::Block);
      std::size_t decl = parse_declarator(Context::Block, "declarator");
      if (at(":")) {
        children.insert(children.end(), specs.begin(), specs.end());
        children.push_back(decl);
        children.push_back(take());
        children.push_back(parse_expression_or_braced("right"));
        children.push_back(expect(")"));
        children.push_back(parse_statement("body"));
        return make("for_range_loop", std::move(children), std::move(field));
      }
      pos_ = save;
      arena_.resize(arena_size);
    }
    if (at(";")) {
      children.push_back(take());
    } else if (looks_like_declaration()) {
      children.push_back(with_field(parse_declaration(Context::Block), "initializer"));
    } else {
      children.push_back(parse_expression("initializer"));
      children.push_back(expect(";"));
    }
    if (!at(";")) children.push_back(parse_expression("condition"));
    children.push_back(expect(";"));
    if (!at(")")) children.push_back(parse_expression("update"));
    children.push_back(expect(")"));
    children.push_back(parse_statement("body"));
    return make("for_statement", std::move(children), std::move(field));
  }

  // ---- expressions --------------------------------------------------------

  std::size_t parse_expression_or_braced(std::string field) {
    if (cpp() && at("{")) return parse_initializer_list(std::move(field));
    return parse_expression(std::move(field));
  }

  std::size_t parse_expression(std::string field) {
    std::size_t left = parse_assignment("");
    if (!at(",")) return with_field(left, std::move(field));
    std::vector<std::size_t> children{with_field(left, "left")};
    while (at(",")) {
      children.push_back(take());
      children.push_back(parse_assignment("right"));
    }
    return make("comma_expression", std::move(children), std::move(field));
  }

  std::size_t parse_assignment(std::string field) {
    std::size_t left = parse_conditional("");
    if (peek().kind == TokenKind::Punct && kAssignOps.contains(peek().text)) {
      std::vector<std::size_t> children{with_field(left, "left"), take("operator")};
      children.push_back(cpp() && at("{") ? parse_initializer_list("right") : parse_assignment("right"));
      return make("assignment_expression", std::move(children), std::move(field));
    }
    return with_field(left, std::move(field));
  }

  std::size_t parse_conditional(std::string field) {
    std::size_t cond = parse_binary(1);
    if (!at("?")) return with_field(cond, std::move(field));
    std::vector<std::size_t> children{with_field(cond, "condition"), take()};
    children.push_back(parse_expression("consequence"));
    children.push_back(expect(":"));
    children.push_back(parse_assignment("alternative"));
    return make("conditional_expression", std::move(children), std::move(field));
  }

  std::size_t parse_binary(int min_prec) {
    std::size_t left = parse_unary();
    while (true) {
      const Token& t = peek();
      if (t.kind != TokenKind::Punct) break;
      const int prec = binary_precedence(t.text);
      if (prec == 0 || prec < min_prec) break;
      std::vector<std::size_t> children{with_field(left, "left"), take("operator")};
      children.push_back(with_field(parse_binary(prec + 1), "right"));
      left = make("binary_expression", std::move(children));
    }
    return left;
  }

  std::size_t parse_unary() {
    const int line = peek().line;
    if (at("++") || at("--")) {
      std::vector<std::size_t> children{take("operator")};
      children.push_back(with_field(parse_unary(), "argument"));
      return make("update_expression", std::move(children));
    }
    if (at("*") || at("&")) {
      std::vector<std::size_t> children{take("operator")};
      children.push_back(with_field(parse_unary(), "argument"));
      return make("pointer_expression", std::move(children));
    }
    if (at("-") || at("+") || at("!") || at("~")) {
      std::vector<std::size_t> children{take("operator")};
      children.push_back(with_field(parse_unary(), "argument"));
      return make("unary_expression", std::move(children));
    }
    if (at("sizeof") || at("alignof") || at("_Alignof")) {
      std::vector<std::size_t> children{take()};
      if (at("...")) children.push_back(take());
      if (at("(") && looks_like_type_in_parens()) {
        children.push_back(take());
        children.push_back(parse_type_descriptor("type"));
        children.push_back(expect(")"));
      } else {
        children.push_back(with_field(parse_unary(), "value"));
      }
      const bool is_sizeof = arena_[children.front()].kind == "sizeof";
      return make(is_sizeof ? "sizeof_expression" : "alignof_expression", std::move(children));
    }
    if (cpp() && (at("new") || (at("::") && at("new", 1)))) return parse_new();
    if (cpp() && (at("delete") || (at("::") && at("delete", 1)))) {
      std::vector<std::size_t> children;
      if (at("::")) children.push_back(take());
      children.push_back(take());
      if (at("[") && at("]", 1)) {
        children.push_back(take());
        children.push_back(take());
      }
      children.push_back(with_field(parse_unary(), "argument"));
      return make("delete_expression", std::move(children));
    }
    if (cpp() && at("throw")) {
      std::vector<std::size_t> children{take()};
      if (!at(";") && !at(")")) children.push_back(parse_assignment(""));
      note_unsupported(line, "throw expression");
      return make("unsupported_construct", std::move(children));
    }
    if (at("(") && looks_like_type_in_parens()) {
      std::vector<std::size_t> children{take()};
      children.push_back(parse_type_descriptor("type"));
      children.push_back(expect(")"));
      if (at("{")) {
        children.push_back(parse_initializer_list("value"));
        return parse_postfix(make("compound_literal_expression", std::move(children)));
      }
      children.push_back(with_field(parse_unary(), "value"));
      return make("cast_expression", std::move(children));
    }
    return parse_postfix(parse_primary());
  }

  std::size_t parse_new() {
    std::vector<std::size_t> children;
    if (at("::")) children.push_back(take());
    children.push_back(take());
    if (at("(") ) {  // placement new
      children.push_back(parse_argument_list("placement"));
    }
    std::vector<std::size_t> type = parse_specifiers(Context::Parameter);
    for (auto& t : type) children.push_back(t);
    while (at("*")) children.push_back(take());
    if (at("[")) {
      std::vector<std::size_t> dims{take(), parse_expression("")};
      dims.push_back(expect("]"));
      children.push_back(make("new_declarator", std::move(dims), "declarator"));
    }
    if (at("(")) children.push_back(parse_argument_list("arguments"));
    else if (at("{")) children.push_back(parse_initializer_list("arguments"));
    return make("new_expression", std::move(children));
  }

  std::size_t parse_postfix(std::size_t expr) {
    while (true) {
      if (at("[")) {
        std::vector<std::size_t> children{with_field(expr, "argument"), take()};
        children.push_back(parse_expression_or_braced("index"));
        children.push_back(expect("]"));
        expr = make("subscript_expression", std::move(children));
        continue;
      }
      if (at("(")) {
        std::vector<std::size_t> children{with_field(expr, "function"), parse_argument_list("arguments")};
        expr = make("call_expression", std::move(children));
        continue;
      }
      if ((at(".") || at("->")) && (at_ident(1) || at("~", 1) || at("template", 1) || at("operator", 1))) {
        std::vector<std::size_t> children{with_field(expr, "argument"), take("operator")};
        if (at("template")) children.push_back(take());
        if (at("~")) {
          std::vector<std::size_t> d{take(), expect_ident("identifier")};
          children.push_back(make("destructor_name", std::move(d), "field"));
        } else if (at("operator")) {
          children.push_back(with_field(parse_operator_name(), "field"));
        } else {
          children.push_back(expect_ident("field_identifier", "field"));
        }
        expr = make("field_expression", std::move(children));
        continue;
      }
      if (at("++") || at("--")) {
        std::vector<std::size_t> children{with_field(expr, "argument"), take("operator")};
        expr = make("update_expression", std::move(children));
        continue;
      }
      break;
    }
    return expr;
  }

  std::size_t parse_argument_list(std::string field) {
    std::vector<std::size_t> children{expect("(")};
    while (!at(")")) {
      if (at_end()) fail("expected ')'");
      if (cpp() && at("{")) children.push_back(parse_initializer_list(""));
      else children.push_back(parse_assignment(""));
      if (at("...")) children.push_back(take());
      if (at(",")) {
        children.push_back(take());
        continue;
      }
      break;
    }
    children.push_back(expect(")"));
    return make("argument_list", std::move(children), std::move(field));
  }

  std::size_t parse_primary() {
    const Token& t = peek();
    const int line = t.line;
    switch (t.kind) {
      case TokenKind::Number: return take();
      case TokenKind::Char: return take();
      case TokenKind::String: {
        std::vector<std::size_t> parts{take()};
        while (peek().kind == TokenKind::String ||
               (peek().kind == TokenKind::Identifier && peek(1).kind == TokenKind::String &&
                std::string_view(peek().text).starts_with("PRI"))) {
          parts.push_back(take());
        }
        if (parts.size() == 1) return parts.front();
        return make("concatenated_string", std::move(parts));
      }
      case TokenKind::Identifier: {
        if (t.text == "NULL") return leaf("null", true);
        if (cpp() && at("::", 1)) return parse_scoped_name("identifier", "");
        return take();
      }
      case TokenKind::Keyword: {
        if (t.text == "true" || t.text == "false") return leaf(std::string(t.text), true);
        if (t.text == "nullptr") return leaf("null", true);
        if (t.text == "this") return leaf("this", true);
        if (t.text == "static_cast" || t.text == "const_cast" || t.text == "reinterpret_cast" ||
            t.text == "dynamic_cast") {
          std::vector<std::size_t> children{take(), expect("<")};
          children.push_back(parse_type_descriptor("type"));
          children.push_back(expect(">"));
          children.push_back(expect("("));
          children.push_back(parse_expression("value"));
          children.push_back(expect(")"));
          return make("cast_expression", std::move(children));
        }
        if (kPrimitiveKeywords.contains(t.text) && at("(", 1)) {
          // functional cast `int(x)`
          std::vector<std::size_t> children{leaf("primitive_type", true, "type")};
          children.push_back(parse_argument_list("arguments"));
          return make("call_expression", std::move(children));
        }
        if (t.text == "typeid" || t.text == "decltype") {
          std::vector<std::size_t> children{take()};
          return skip_unsupported_parens(std::move(children), line);
        }
        break;
      }
      case TokenKind::Punct: {
        if (at("(")) {
          std::vector<std::size_t> children{take()};
          children.push_back(parse_expression(""));
          children.push_back(expect(")"));
          return make("parenthesized_expression", std::move(children));
        }
        if (cpp() && at("::")) return parse_scoped_name("identifier", "");
        if (cpp() && at("[")) {
          // lambda: capture list, optional parameters, body
          std::vector<std::size_t> children;
          int depth = 0;
          do {
            if (at("[")) ++depth;
            if (at("]")) --depth;
            children.push_back(take());
          } while (depth > 0 && !at_end());
          if (at("(")) {
            int d = 0;
            do {
              if (at("(")) ++d;
              if (at(")")) --d;
              children.push_back(take());
            } while (d > 0 && !at_end());
          }
          while (!at("{") && !at_end()) children.push_back(take());
          int d = 0;
          do {
            if (at("{")) ++d;
            if (at("}")) --d;
            children.push_back(take());
          } while (d > 0 && !at_end());
          note_unsupported(line, "lambda expression");
          return make("unsupported_construct", std::move(children));
        }
        if (cpp() && at("{")) return parse_initializer_list("");
        break;
      }
      default: break;
    }
    fail("expected expression");
  }

  std::size_t skip_unsupported_parens(std::vector<std::size_t> children, int line) {
    if (!at("(")) fail("expected '('");
    int depth = 0;
    do {
      if (at("(")) ++depth;
      if (at(")")) --depth;
      children.push_back(take());
    } while (depth > 0 && !at_end());
    note_unsupported(line, "type introspection");
    return make("unsupported_construct", std::move(children));
  }

  // ---- numbering ----------------------------------------------------------

  std::vector<SyntaxNode> number(std::size_t root) {
    std::vector<SyntaxNode> out;
    out.reserve(arena_.size());
    struct Frame {
      std::size_t temp;
      std::optional<NodeId> parent;
    };
    std::vector<Frame> stack{{root, std::nullopt}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      const TempNode& t = arena_[f.temp];
      SyntaxNode n;
      n.id = NodeId{out.size()};
      n.kind = t.kind;
      n.field = t.field;
      n.named = t.named;
      n.span = Span{t.file, t.line_start, t.col_start, t.line_end, t.col_end};
      n.begin = t.begin;
      n.end = t.end;
      n.parent = f.parent;
      if (f.parent) out[static_cast<std::size_t>(f.parent->value)].children.push_back(n.id);
      out.push_back(std::move(n));
      const NodeId self = out.back().id;
      for (auto it = t.children.rbegin(); it != t.children.rend(); ++it) stack.push_back({*it, self});
    }
    return out;
  }

  const SourceUnit& unit_;
  Diagnostics& diagnostics_;
  Diagnostics pending_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::uint32_t file_ = 0;
  std::vector<TempNode> arena_;
  std::set<std::string> type_names_;
  std::vector<std::string> class_stack_;
};

}  // namespace

std::string_view SyntaxTree::text(NodeId id) const {
  const SyntaxNode& n = node(id);
  if (!n.parent) return {};
  const auto& files = unit_->files;
  if (n.span.file >= files.size()) return {};
  return std::string_view(files[n.span.file].text).substr(n.begin, n.end - n.begin);
}

std::optional<NodeId> SyntaxTree::child(NodeId id, std::string_view field) const {
  for (NodeId c : node(id).children) {
    if (node(c).field == field) return c;
  }
  return std::nullopt;
}

std::vector<NodeId> SyntaxTree::children_with_field(NodeId id, std::string_view field) const {
  std::vector<NodeId> out;
  for (NodeId c : node(id).children) {
    if (node(c).field == field) out.push_back(c);
  }
  return out;
}

std::vector<NodeId> SyntaxTree::named_children(NodeId id) const {
  std::vector<NodeId> out;
  for (NodeId c : node(id).children) {
    if (node(c).named) out.push_back(c);
  }
  return out;
}

std::optional<NodeId> SyntaxTree::first_child_of_kind(NodeId id, std::string_view kind) const {
  for (NodeId c : node(id).children) {
    if (node(c).kind == kind) return c;
  }
  return std::nullopt;
}

LineOrigin SyntaxTree::origin_start(NodeId id) const {
  const Span& s = node(id).span;
  return unit_->origin(s.file, s.line_start);
}

LineOrigin SyntaxTree::origin_end(NodeId id) const {
  const Span& s = node(id).span;
  return unit_->origin(s.file, s.line_end);
}

void SyntaxTree::walk(NodeId from, const std::function<bool(const SyntaxNode&)>& visit) const {
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const SyntaxNode& n = node(id);
    if (!visit(n)) continue;
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
}

ParseResult parse(std::shared_ptr<const SourceUnit> unit) {
  ParseResult result;
  Parser parser(*unit, result.diagnostics);
  auto nodes = parser.run();
  result.tree = SyntaxTree(std::move(unit), std::move(nodes));
  return result;
}

ParseResult parse(const SourceUnit& unit) { return parse(std::make_shared<const SourceUnit>(unit)); }

const std::vector<std::string>& known_node_kinds() {
  static const std::vector<std::string> kinds = {
      "abstract_array_declarator", "abstract_declarator", "abstract_function_declarator",
      "abstract_parenthesized_declarator", "abstract_pointer_declarator", "abstract_reference_declarator",
      "access_specifier", "alias_declaration", "alignof_expression", "argument_list", "array_declarator",
      "assignment_expression", "base_class_clause", "binary_expression", "bitfield_clause", "break_statement",
      "call_expression", "case_statement", "cast_expression", "char_literal", "class_specifier", "comma_expression",
      "comment", "compound_literal_expression", "compound_statement", "concatenated_string", "condition_clause",
      "condition_declaration", "conditional_expression", "continue_statement", "declaration", "declaration_list",
      "delete_expression", "destructor_name", "do_statement", "enum_specifier", "enumerator", "enumerator_list",
      "expression_statement", "false", "field_declaration", "field_declaration_list", "field_designator",
      "field_expression", "field_identifier", "field_initializer", "field_initializer_list", "for_range_loop",
      "for_statement", "function_declarator", "function_definition", "goto_statement", "identifier",
      "if_statement", "init_declarator", "initializer_list", "initializer_pair", "labeled_statement",
      "linkage_specification", "modifier", "namespace_definition", "namespace_identifier", "new_declarator",
      "new_expression", "null", "number_literal", "operator_name", "optional_parameter_declaration",
      "parameter_declaration", "parameter_list", "parenthesized_declarator", "parenthesized_expression",
      "pointer_declarator", "pointer_expression", "primitive_type", "qualified_identifier", "reference_declarator",
      "return_statement", "sized_type_specifier", "sizeof_expression", "statement_identifier",
      "storage_class_specifier", "string_literal", "struct_specifier", "subscript_designator",
      "subscript_expression", "switch_statement", "template_argument_list", "template_type", "this", "translation_unit",
      "true", "type_definition", "type_descriptor", "type_identifier", "type_qualifier", "unary_expression",
      "union_specifier", "unsupported_construct", "update_expression", "using_declaration", "variadic_parameter",
      "while_statement",
  };
  return kinds;
}

}  // namespace codeviews
