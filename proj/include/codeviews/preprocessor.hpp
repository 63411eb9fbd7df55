#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "codeviews/diagnostic.hpp"

namespace codeviews {

enum class Lang { C, Cpp };

std::string_view lang_name(Lang lang);  // "c" or "cpp"
Lang parse_lang(std::string_view name);

// Extensions accepted for a language (.c/.h for C; .cpp/.cc/.hpp/.h for C++).
bool has_source_extension(const std::filesystem::path& p, Lang lang);
bool is_header(const std::filesystem::path& p);

struct LineOrigin {
  std::string file;  // path relative to the project root
  int line = 0;      // 1-based line in that file

  bool operator==(const LineOrigin&) const = default;
};

struct SourceFile {
  std::string path;
  std::string text;                  // normalized, '\n'-separated, no trailing newline
  std::vector<LineOrigin> line_map;  // line_map[i] is the origin of normalized line i + 1
};

struct SourceUnit {
  std::string name;
  Lang lang = Lang::C;
  std::vector<SourceFile> files;
  std::map<std::string, std::string> macro_table;
  std::vector<std::string> external_includes;  // sorted, unique
  Diagnostics diagnostics;

  LineOrigin origin(std::size_t file, int line) const;
};

struct StrippedText {
  std::string text;
  std::vector<int> line_map;  // original line of each surviving line
};

// Removes comments (string and character literals untouched) and blank lines.
// Comment characters on surviving lines become spaces so columns still match
// the original file. Throws Error{UnterminatedComment}.
StrippedText strip_non_semantic(std::string_view text, std::string_view file_name = "<input>");

// Reads every matching file under root, strips it, and inlines project-local
// quoted includes once project-wide. Throws Error{EmptyProject, CyclicInclude}.
SourceUnit consolidate_project(const std::filesystem::path& root, Lang lang);

// Single-file variant: includes resolve relative to the file's directory.
SourceUnit consolidate_file(const std::filesystem::path& file, Lang lang);

// Object-like macro substitution and first-branch conditional compilation.
// Never throws; degradations are recorded in unit.diagnostics.
SourceUnit expand_macros(SourceUnit unit);

// In-memory convenience: strip + expand a single text.
SourceUnit preprocess_text(std::string_view text, Lang lang, std::string name = "input.c");

}  // namespace codeviews
