#include "codeviews/preprocessor.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "codeviews/error.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace codeviews {

std::string_view lang_name(Lang lang) { return lang == Lang::C ? "c" : "cpp"; }

Lang parse_lang(std::string_view name) {
  if (name == "c" || name == "C") return Lang::C;
  if (name == "cpp" || name == "c++" || name == "CPP" || name == "cxx") return Lang::Cpp;
  throw Error(ErrorCode::BadArguments, "unknown language '" + std::string(name) + "'");
}

bool is_header(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".h" || ext == ".hpp" || ext == ".hh" || ext == ".hxx";
}

bool has_source_extension(const fs::path& p, Lang lang) {
  const auto ext = p.extension().string();
  if (lang == Lang::C) return ext == ".c" || ext == ".h";
  return ext == ".cpp" || ext == ".cc" || ext == ".cxx" || ext == ".hpp" || ext == ".hh" ||
         ext == ".hxx" || ext == ".h";
}

LineOrigin SourceUnit::origin(std::size_t file, int line) const {
  if (file >= files.size()) return {};
  const auto& map = files[file].line_map;
  if (line < 1 || static_cast<std::size_t>(line) > map.size()) return {files[file].path, line};
  return map[static_cast<std::size_t>(line - 1)];
}

// ---------------------------------------------------------------------------
// Comment stripping

StrippedText strip_non_semantic(std::string_view text, std::string_view file_name) {
  std::string out;
  out.reserve(text.size());
  enum class State { Code, LineComment, BlockComment, String, Char, RawString };
  State state = State::Code;
  int line = 1;
  int block_start_line = 0;
  std::string raw_terminator;

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if (c == '\r') continue;
    if (c == '\n') {
      ++line;
      out.push_back('\n');
      if (state == State::LineComment) state = State::Code;
      continue;
    }
    switch (state) {
      case State::Code:
        if (c == '/' && next == '/') {
          state = State::LineComment;
          out.push_back(' ');
        } else if (c == '/' && next == '*') {
          state = State::BlockComment;
          block_start_line = line;
          out += "  ";
          ++i;
        } else if (c == 'R' && next == '"' &&
                   (i == 0 || !text_util::is_ident_char(text[i - 1]) || text[i - 1] == 'u' ||
                    text[i - 1] == 'L' || text[i - 1] == '8')) {
          std::size_t open = text.find('(', i + 2);
          if (open == std::string_view::npos) {
            out.push_back(c);
            break;
          }
          raw_terminator = ")" + std::string(text.substr(i + 2, open - i - 2)) + "\"";
          out.append(text.substr(i, open - i + 1));
          i = open;
          state = State::RawString;
        } else {
          out.push_back(c);
          if (c == '"') state = State::String;
          if (c == '\'' && !(i > 0 && std::isxdigit(static_cast<unsigned char>(text[i - 1])) &&
                             i + 1 < text.size() && std::isxdigit(static_cast<unsigned char>(next))))
            state = State::Char;
        }
        break;
      case State::LineComment:
        out.push_back(' ');
        break;
      case State::BlockComment:
        if (c == '*' && next == '/') {
          out += "  ";
          ++i;
          state = State::Code;
        } else {
          out.push_back(' ');
        }
        break;
      case State::String:
      case State::Char:
        out.push_back(c);
        if (c == '\\' && next != '\0' && next != '\n') {
          out.push_back(next);
          ++i;
        } else if ((state == State::String && c == '"') || (state == State::Char && c == '\'')) {
          state = State::Code;
        }
        break;
      case State::RawString:
        if (text.compare(i, raw_terminator.size(), raw_terminator) == 0) {
          out += raw_terminator;
          i += raw_terminator.size() - 1;
          state = State::Code;
        } else {
          out.push_back(c);
        }
        break;
    }
  }
  if (state == State::BlockComment) {
    throw Error(ErrorCode::UnterminatedComment,
                std::string(file_name) + ":" + std::to_string(block_start_line));
  }

  StrippedText result;
  std::size_t start = 0;
  int original_line = 1;
  while (start <= out.size()) {
    std::size_t end = out.find('\n', start);
    if (end == std::string::npos) end = out.size();
    std::string_view piece(out.data() + start, end - start);
    piece = text_util::rtrim(piece);
    if (!text_util::trim(piece).empty()) {
      if (!result.text.empty() || !result.line_map.empty()) result.text.push_back('\n');
      result.text.append(piece);
      result.line_map.push_back(original_line);
    }
    if (end == out.size()) break;
    start = end + 1;
    ++original_line;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Consolidation

namespace {

struct Line {
  std::string text;
  LineOrigin origin;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Replaces invalid UTF-8 sequences with '?'. Returns the 1-based lines touched.
std::vector<int> sanitize_utf8(std::string& s) {
  std::vector<int> bad_lines;
  int line = 1;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c == '\n') ++line;
    std::size_t len = 0;
    if (c < 0x80) len = 1;
    else if ((c >> 5) == 0x6) len = 2;
    else if ((c >> 4) == 0xE) len = 3;
    else if ((c >> 3) == 0x1E) len = 4;
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(s[i + k]) >> 6) == 0x2;
    }
    if (!ok) {
      s[i] = '?';
      if (bad_lines.empty() || bad_lines.back() != line) bad_lines.push_back(line);
      ++i;
    } else {
      i += len;
    }
  }
  return bad_lines;
}

// Parses `#include "x"` / `#include <x>`. Returns false for other lines.
bool parse_include(std::string_view line, std::string& target, bool& angled) {
  auto t = text_util::trim(line);
  if (t.empty() || t.front() != '#') return false;
  t = text_util::trim(t.substr(1));
  if (!t.starts_with("include")) return false;
  t = text_util::trim(t.substr(7));
  if (t.size() < 2) return false;
  const char open = t.front();
  const char close = open == '<' ? '>' : (open == '"' ? '"' : '\0');
  if (close == '\0') return false;
  const auto end = t.find(close, 1);
  if (end == std::string_view::npos) return false;
  target = std::string(t.substr(1, end - 1));
  angled = open == '<';
  return true;
}

class Consolidator {
 public:
  Consolidator(fs::path root, Lang lang) : root_(std::move(root)), lang_(lang) {}

  SourceUnit run(const std::vector<fs::path>& files) {
    SourceUnit unit;
    unit.lang = lang_;
    std::vector<fs::path> sources;
    std::vector<fs::path> headers;
    for (const auto& f : files) (is_header(f) ? headers : sources).push_back(f);

    for (const auto& f : sources) emit_file(unit, f);
    // Headers nobody included still carry declarations worth analyzing.
    for (const auto& h : headers) {
      if (!included_.contains(key(h))) emit_file(unit, h);
    }
    unit.external_includes.assign(externals_.begin(), externals_.end());
    unit.diagnostics.insert(unit.diagnostics.begin(), diagnostics_.begin(), diagnostics_.end());
    return unit;
  }

 private:
  std::string key(const fs::path& p) const { return fs::weakly_canonical(p).string(); }

  std::string relative(const fs::path& p) const {
    auto rel = fs::relative(fs::weakly_canonical(p), fs::weakly_canonical(root_));
    return rel.empty() ? p.filename().generic_string() : rel.generic_string();
  }

  void emit_file(SourceUnit& unit, const fs::path& file) {
    const auto k = key(file);
    if (included_.contains(k)) return;
    included_.insert(k);
    std::vector<Line> lines;
    stack_.push_back(relative(file));
    expand_file(file, lines);
    stack_.pop_back();
    SourceFile out;
    out.path = relative(file);
    for (auto& l : lines) {
      if (!out.text.empty() || !out.line_map.empty()) out.text.push_back('\n');
      out.text += l.text;
      out.line_map.push_back(std::move(l.origin));
    }
    unit.files.push_back(std::move(out));
  }

  void expand_file(const fs::path& file, std::vector<Line>& lines) {
    std::string raw = read_file(file);
    const std::string rel = relative(file);
    for (int bad : sanitize_utf8(raw)) {
      diagnostics_.push_back(make_diagnostic(DiagnosticCategory::Other, rel, bad,
                                             "invalid UTF-8 byte replaced"));
    }
    const StrippedText stripped = strip_non_semantic(raw, rel);
    std::size_t index = 0;
    std::size_t start = 0;
    const std::string& text = stripped.text;
    while (index < stripped.line_map.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string_view line(text.data() + start, end - start);
      const int orig = stripped.line_map[index];
      std::string target;
      bool angled = false;
      if (parse_include(line, target, angled)) {
        if (angled) {
          externals_.insert(target);
        } else if (auto resolved = resolve(file, target)) {
          include_header(*resolved, lines);
        } else {
          externals_.insert(target);
          diagnostics_.push_back(make_diagnostic(DiagnosticCategory::Other, rel, orig,
                                                 "include \"" + target + "\" not found in project"));
        }
      } else {
        lines.push_back({std::string(line), {rel, orig}});
      }
      ++index;
      start = end + 1;
    }
  }

  void include_header(const fs::path& header, std::vector<Line>& lines) {
    const std::string rel = relative(header);
    if (auto it = std::find(stack_.begin(), stack_.end(), rel); it != stack_.end()) {
      std::string cycle;
      for (; it != stack_.end(); ++it) cycle += *it + " -> ";
      cycle += rel;
      throw Error(ErrorCode::CyclicInclude, cycle);
    }
    const auto k = key(header);
    if (included_.contains(k)) return;
    included_.insert(k);
    stack_.push_back(rel);
    expand_file(header, lines);
    stack_.pop_back();
  }

  std::optional<fs::path> resolve(const fs::path& includer, const std::string& target) const {
    const fs::path candidates[] = {includer.parent_path() / target, root_ / target};
    for (const auto& c : candidates) {
      std::error_code ec;
      if (fs::is_regular_file(c, ec)) return c.lexically_normal();
    }
    return std::nullopt;
  }

  fs::path root_;
  Lang lang_;
  std::set<std::string> included_;
  std::vector<std::string> stack_;
  std::set<std::string> externals_;
  Diagnostics diagnostics_;
};

std::vector<fs::path> collect_files(const fs::path& root, Lang lang) {
  std::vector<std::pair<std::string, fs::path>> found;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || !has_source_extension(entry.path(), lang)) continue;
    found.emplace_back(fs::relative(entry.path(), root).generic_string(), entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> out;
  for (auto& [rel, p] : found) out.push_back(p);
  return out;
}

}  // namespace

SourceUnit consolidate_project(const fs::path& root, Lang lang) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::EmptyProject, root.string() + " is not a directory");
  }
  const auto files = collect_files(root, lang);
  if (files.empty()) {
    throw Error(ErrorCode::EmptyProject, "no " + std::string(lang_name(lang)) + " sources under " +
                                             root.string());
  }
  SourceUnit unit = Consolidator(root, lang).run(files);
  unit.name = root.filename().string();
  return unit;
}

SourceUnit consolidate_file(const fs::path& file, Lang lang) {
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) throw Error(ErrorCode::EmptyProject, file.string() + " not found");
  auto dir = file.parent_path();
  if (dir.empty()) dir = ".";
  SourceUnit unit = Consolidator(dir, lang).run({file});
  unit.name = file.stem().string();
  return unit;
}

// ---------------------------------------------------------------------------
// Macro expansion

namespace {

struct CondFrame {
  bool parent_active = true;
  bool keeping = true;
};

class MacroExpander {
 public:
  explicit MacroExpander(SourceUnit& unit) : unit_(unit) {}

  void run() {
    for (auto& file : unit_.files) process(file);
  }

 private:
  void process(SourceFile& file) {
    std::vector<std::string> lines = text_util::split_lines(file.text);
    std::vector<LineOrigin> origins = file.line_map;
    std::string out_text;
    std::vector<LineOrigin> out_map;
    std::vector<CondFrame> conds;
    auto active = [&] { return conds.empty() || (conds.back().parent_active && conds.back().keeping); };

    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string_view t = text_util::trim(lines[i]);
      const LineOrigin& where = origins[i];
      if (!t.empty() && t.front() == '#') {
        std::string directive(t.substr(1));
        while (!directive.empty() && directive.back() == '\\' && i + 1 < lines.size()) {
          directive.pop_back();
          directive += " ";
          directive += text_util::trim(lines[++i]);
        }
        handle_directive(text_util::trim(directive), where, conds, active());
        continue;
      }
      if (!active()) continue;
      std::string expanded = expand_line(lines[i], where);
      if (text_util::trim(expanded).empty()) continue;
      if (!out_map.empty()) out_text.push_back('\n');
      out_text += expanded;
      out_map.push_back(where);
    }
    file.text = std::move(out_text);
    file.line_map = std::move(out_map);
  }

  void handle_directive(std::string_view d, const LineOrigin& where, std::vector<CondFrame>& conds,
                        bool active) {
    std::size_t n = 0;
    while (n < d.size() && text_util::is_ident_char(d[n])) ++n;
    const std::string_view name = d.substr(0, n);
    const std::string_view rest = text_util::trim(d.substr(n));

    if (name == "if" || name == "ifdef" || name == "ifndef") {
      conds.push_back({active, true});
      return;
    }
    if (name == "elif" || name == "else" || name == "elifdef" || name == "elifndef") {
      if (conds.empty()) return;
      if (conds.back().parent_active) {
        unit_.diagnostics.push_back(make_diagnostic(DiagnosticCategory::DroppedConditionalBranch, where.file,
                                                    where.line, "#" + std::string(name) + " branch dropped"));
      }
      conds.back().keeping = false;
      return;
    }
    if (name == "endif") {
      if (!conds.empty()) conds.pop_back();
      return;
    }
    if (!active) return;

    if (name == "define") {
      std::size_t m = 0;
      while (m < rest.size() && text_util::is_ident_char(rest[m])) ++m;
      std::string macro(rest.substr(0, m));
      if (macro.empty()) return;
      if (m < rest.size() && rest[m] == '(') {
        function_like_.insert(macro);
        unit_.macro_table.erase(macro);
      } else {
        function_like_.erase(macro);
        unit_.macro_table[macro] = std::string(text_util::trim(rest.substr(m)));
      }
    } else if (name == "undef") {
      std::string macro(text_util::trim(rest));
      unit_.macro_table.erase(macro);
      function_like_.erase(macro);
    } else if (name == "include") {
      std::string target;
      bool angled = false;
      if (parse_include("#" + std::string(d), target, angled)) {
        auto& ext = unit_.external_includes;
        if (!std::binary_search(ext.begin(), ext.end(), target)) {
          ext.insert(std::upper_bound(ext.begin(), ext.end(), target), target);
        }
      }
    }
    // #pragma, #error, #line and friends carry no graph semantics.
  }

  std::string expand_line(const std::string& line, const LineOrigin& where) {
    std::set<std::string> reported;
    std::set<std::string> active;
    return expand(line, where, active, reported);
  }

  std::string expand(std::string_view text, const LineOrigin& where, std::set<std::string>& expanding,
                     std::set<std::string>& reported) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
      const char c = text[i];
      if (c == '"' || c == '\'') {
        std::size_t j = i + 1;
        while (j < text.size() && text[j] != c) j += text[j] == '\\' ? 2 : 1;
        j = std::min(j + 1, text.size());
        out.append(text.substr(i, j - i));
        i = j;
        continue;
      }
      if (text_util::is_ident_start(c) && (i == 0 || !text_util::is_ident_char(text[i - 1]))) {
        std::size_t j = i;
        while (j < text.size() && text_util::is_ident_char(text[j])) ++j;
        std::string word(text.substr(i, j - i));
        auto it = unit_.macro_table.find(word);
        if (it != unit_.macro_table.end() && !expanding.contains(word)) {
          expanding.insert(word);
          out += expand(it->second, where, expanding, reported);
          expanding.erase(word);
        } else {
          if (function_like_.contains(word)) {
            std::size_t k = j;
            while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
            if (k < text.size() && text[k] == '(' && reported.insert(word).second) {
              unit_.diagnostics.push_back(make_diagnostic(DiagnosticCategory::UnsupportedMacro, where.file,
                                                          where.line,
                                                          "function-like macro '" + word + "' not expanded"));
            }
          }
          out += word;
        }
        i = j;
        continue;
      }
      out.push_back(c);
      ++i;
    }
    return out;
  }

  SourceUnit& unit_;
  std::set<std::string> function_like_;
};

}  // namespace

SourceUnit expand_macros(SourceUnit unit) {
  MacroExpander(unit).run();
  return unit;
}

SourceUnit preprocess_text(std::string_view text, Lang lang, std::string name) {
  SourceUnit unit;
  unit.lang = lang;
  unit.name = fs::path(name).stem().string();
  std::string raw(text);
  for (int bad : sanitize_utf8(raw)) {
    unit.diagnostics.push_back(make_diagnostic(DiagnosticCategory::Other, name, bad, "invalid UTF-8 byte replaced"));
  }
  StrippedText stripped = strip_non_semantic(raw, name);
  SourceFile file;
  file.path = name;
  file.text = std::move(stripped.text);
  for (int l : stripped.line_map) file.line_map.push_back({name, l});
  unit.files.push_back(std::move(file));
  return expand_macros(std::move(unit));
}

}  // namespace codeviews
