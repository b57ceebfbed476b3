#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ged {

enum class TokenKind {
  End,
  Ident,
  Int,
  String,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Eq,
  Tilde,
  Colon,
  Comma,
  KwDesign,
  KwUnits,
  KwTrts,
  KwRcrds,
  KwAllot,
  KwAssign,
  KwNestedIn,
  KwOn,
  KwSeed,
  KwRandom,
  KwSystematic,
};

// Human-readable token description, as used in "expected ..." diagnostics.
const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;             // decoded value for String, raw text otherwise
  std::uint64_t int_value = 0;  // for Int
  int line = 1;
  int column = 1;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t length = 0;  // raw byte length in the source
};

struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;
  std::vector<std::string> expected;

  // "LINE:COL: message (expected a, b)"
  std::string render() const;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::optional<ParseError> error;  // engaged iff !value

  bool ok() const { return value.has_value(); }
};

// Splits source text into tokens. Comments (# to end of line) and
// whitespace are skipped; strings are double-quoted with \" and \\ escapes.
// Line/column are 1-based; columns count bytes.
ParseResult<std::vector<Token>> tokenize(std::string_view source);

}  // namespace ged
