#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "codeviews/preprocessor.hpp"

namespace codeviews::detail {

enum class TokenKind { Identifier, Keyword, Number, String, Char, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

struct LexError {
  int line = 0;
  std::string message;
};

bool is_keyword(std::string_view word, Lang lang);

// Tokenizes normalized text. Throws LexError on stray characters or
// unterminated literals. The returned vector always ends with an End token.
std::vector<Token> tokenize(std::string_view text, Lang lang);

}  // namespace codeviews::detail
