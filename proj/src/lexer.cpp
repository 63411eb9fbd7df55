#include "lexer.hpp"

#include <string>
#include <unordered_set>

#include "text_util.hpp"

namespace codeviews::detail {

namespace {

const std::unordered_set<std::string_view>& c_keywords() {
  static const std::unordered_set<std::string_view> k = {
      "auto",     "break",  "case",     "char",   "const",    "continue", "default",  "do",
      "double",   "else",   "enum",     "extern", "float",    "for",      "goto",     "if",
      "inline",   "int",    "long",     "register", "restrict", "return", "short",    "signed",
      "sizeof",   "static", "struct",   "switch", "typedef",  "union",    "unsigned", "void",
      "volatile", "while",  "_Bool",    "_Complex", "_Atomic", "_Thread_local", "_Alignof",
      "bool",     "true",   "false",    "__inline", "__restrict",
  };
  return k;
}

const std::unordered_set<std::string_view>& cpp_keywords() {
  static const std::unordered_set<std::string_view> k = [] {
    std::unordered_set<std::string_view> s = c_keywords();
    for (std::string_view w :
         {"class",     "const_cast", "delete",   "dynamic_cast", "explicit", "friend",    "mutable",
          "namespace", "new",        "nullptr",  "operator",     "private",  "protected", "public",
          "reinterpret_cast",        "static_cast", "template",  "this",     "throw",     "try",
          "catch",     "typename",   "using",    "virtual",      "constexpr", "noexcept", "decltype",
          "typeid",    "thread_local", "static_assert", "alignof", "wchar_t", "char16_t", "char32_t"}) {
      s.insert(w);
    }
    return s;
  }();
  return k;
}

// Longest match first.
constexpr std::string_view kPunctuators[] = {
    "<<=", ">>=", "...", "->*", "<=>", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||",  "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "##", ".*", "{",  "}",  "(",  ")",  "[",
    "]",   ";",   ",",   ":",   "?",   "~",  "!",  "+",  "-",  "*",  "/",  "%",  "&",  "|",  "^",  "=",
};
constexpr std::string_view kTail[] = {"<", ">", ".", "#"};

}  // namespace

bool is_keyword(std::string_view word, Lang lang) {
  return lang == Lang::C ? c_keywords().contains(word) : cpp_keywords().contains(word);
}

std::vector<Token> tokenize(std::string_view text, Lang lang) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;

  auto advance_to = [&](std::size_t j) {
    for (; i < j; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto emit = [&](TokenKind kind, std::size_t j) {
    Token t;
    t.kind = kind;
    t.begin = static_cast<std::uint32_t>(i);
    t.end = static_cast<std::uint32_t>(j);
    t.text = text.substr(i, j - i);
    t.line = line;
    t.col = col;
    advance_to(j);
    t.end_line = line;
    t.end_col = col;
    out.push_back(t);
  };
  auto scan_quoted = [&](std::size_t start, char quote) -> std::size_t {
    std::size_t j = start + 1;
    while (j < text.size() && text[j] != quote) {
      if (text[j] == '\n') throw LexError{line, "unterminated literal"};
      j += text[j] == '\\' ? 2 : 1;
    }
    if (j >= text.size()) throw LexError{line, "unterminated literal"};
    return j + 1;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance_to(i + 1);
      continue;
    }
    // Encoding prefixes on string/char literals.
    if (c == 'L' || c == 'u' || c == 'U' || c == 'R') {
      std::size_t j = i;
      while (j < text.size() && j < i + 3 && (text[j] == 'L' || text[j] == 'u' || text[j] == 'U' ||
                                              text[j] == '8' || text[j] == 'R')) {
        ++j;
      }
      if (j < text.size() && (text[j] == '"' || text[j] == '\'')) {
        const bool raw = text[j - 1] == 'R';
        if (raw && text[j] == '"') {
          const auto open = text.find('(', j);
          if (open == std::string_view::npos) throw LexError{line, "bad raw string"};
          const std::string terminator = ")" + std::string(text.substr(j + 1, open - j - 1)) + "\"";
          const auto close = text.find(terminator, open);
          if (close == std::string_view::npos) throw LexError{line, "unterminated raw string"};
          emit(TokenKind::String, close + terminator.size());
        } else {
          emit(text[j] == '"' ? TokenKind::String : TokenKind::Char, scan_quoted(j, text[j]));
        }
        continue;
      }
    }
    if (text_util::is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && text_util::is_ident_char(text[j])) ++j;
      emit(is_keyword(text.substr(i, j - i), lang) ? TokenKind::Keyword : TokenKind::Identifier, j);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size()) {
        const char d = text[j];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '_') {
          ++j;
        } else if ((d == '+' || d == '-') && (text[j - 1] == 'e' || text[j - 1] == 'E' || text[j - 1] == 'p' ||
                                              text[j - 1] == 'P') &&
                   !(text[i] == '0' && j > i + 1 && (text[i + 1] == 'x' || text[i + 1] == 'X') &&
                     (text[j - 1] == 'e' || text[j - 1] == 'E'))) {
          ++j;
        } else if (d == '\'' && j + 1 < text.size() && std::isalnum(static_cast<unsigned char>(text[j + 1]))) {
          ++j;
        } else {
          break;
        }
      }
      emit(TokenKind::Number, j);
      continue;
    }
    if (c == '"') {
      emit(TokenKind::String, scan_quoted(i, '"'));
      continue;
    }
    if (c == '\'') {
      emit(TokenKind::Char, scan_quoted(i, '\''));
      continue;
    }
    bool matched = false;
    for (auto p : kPunctuators) {
      if (text.compare(i, p.size(), p) == 0) {
        emit(TokenKind::Punct, i + p.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      for (auto p : kTail) {
        if (text.compare(i, p.size(), p) == 0) {
          emit(TokenKind::Punct, i + p.size());
          matched = true;
          break;
        }
      }
    }
    if (!matched) {
      throw LexError{line, "unexpected character '" + std::string(1, c) + "'"};
    }
  }
  Token end;
  end.kind = TokenKind::End;
  end.begin = end.end = static_cast<std::uint32_t>(text.size());
  end.line = end.end_line = line;
  end.col = end.end_col = col;
  out.push_back(end);
  return out;
}

}  // namespace codeviews::detail
