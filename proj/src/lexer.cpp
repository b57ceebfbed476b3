#include "ged/lexer.hpp"

#include <cctype>
#include <cstdio>
#include <unordered_map>

namespace ged {

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Tilde: return "'~'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Comma: return "','";
    case TokenKind::KwDesign: return "'design'";
    case TokenKind::KwUnits: return "'units'";
    case TokenKind::KwTrts: return "'trts'";
    case TokenKind::KwRcrds: return "'rcrds'";
    case TokenKind::KwAllot: return "'allot'";
    case TokenKind::KwAssign: return "'assign'";
    case TokenKind::KwNestedIn: return "'nested_in'";
    case TokenKind::KwOn: return "'on'";
    case TokenKind::KwSeed: return "'seed'";
    case TokenKind::KwRandom: return "'random'";
    case TokenKind::KwSystematic: return "'systematic'";
  }
  return "?";
}

std::string ParseError::render() const {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> kw = {
      {"design", TokenKind::KwDesign},       {"units", TokenKind::KwUnits},
      {"trts", TokenKind::KwTrts},           {"rcrds", TokenKind::KwRcrds},
      {"allot", TokenKind::KwAllot},         {"assign", TokenKind::KwAssign},
      {"nested_in", TokenKind::KwNestedIn},  {"on", TokenKind::KwOn},
      {"seed", TokenKind::KwSeed},           {"random", TokenKind::KwRandom},
      {"systematic", TokenKind::KwSystematic},
  };
  return kw;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string printable(char c) {
  if (std::isprint(static_cast<unsigned char>(c))) return std::string(1, c);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "\\x%02x", static_cast<unsigned char>(c));
  return buf;
}

struct Scanner {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;

  bool done() const { return pos >= src.size(); }
  char peek() const { return pos < src.size() ? src[pos] : '\0'; }

  char advance() {
    const char c = src[pos++];
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    return c;
  }

  [[noreturn]] void fail(int at_line, int at_column, std::string message) const {
    throw ParseError{at_line, at_column, std::move(message), {}};
  }

  void skip_trivia() {
    while (!done()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!done() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_trivia();
    Token tok;
    tok.line = line;
    tok.column = column;
    tok.offset = pos;
    if (done()) {
      tok.kind = TokenKind::End;
      return tok;
    }

    const char c = peek();
    switch (c) {
      case '{': return punct(tok, TokenKind::LBrace);
      case '}': return punct(tok, TokenKind::RBrace);
      case '(': return punct(tok, TokenKind::LParen);
      case ')': return punct(tok, TokenKind::RParen);
      case '[': return punct(tok, TokenKind::LBracket);
      case ']': return punct(tok, TokenKind::RBracket);
      case '=': return punct(tok, TokenKind::Eq);
      case '~': return punct(tok, TokenKind::Tilde);
      case ':': return punct(tok, TokenKind::Colon);
      case ',': return punct(tok, TokenKind::Comma);
      case '"': return string_literal(tok);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return integer(tok);
    if (ident_start(c)) return identifier(tok);
    fail(tok.line, tok.column, "illegal character '" + printable(c) + "'");
  }

  Token punct(Token tok, TokenKind kind) {
    tok.kind = kind;
    tok.text = advance();
    tok.length = 1;
    return tok;
  }

  Token identifier(Token tok) {
    std::string text;
    while (!done() && ident_char(peek())) text += advance();
    tok.length = pos - tok.offset;
    const auto kw = keywords().find(text);
    tok.kind = kw != keywords().end() ? kw->second : TokenKind::Ident;
    tok.text = std::move(text);
    return tok;
  }

  Token integer(Token tok) {
    std::uint64_t value = 0;
    std::string text;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::uint64_t digit = static_cast<std::uint64_t>(peek() - '0');
      if (value > (UINT64_MAX - digit) / 10) {
        fail(tok.line, tok.column, "integer literal is too large");
      }
      value = value * 10 + digit;
      text += advance();
    }
    if (!done() && ident_start(peek())) {
      fail(line, column, "malformed number: unexpected '" + printable(peek()) + "' after digits");
    }
    tok.kind = TokenKind::Int;
    tok.text = std::move(text);
    tok.int_value = value;
    tok.length = pos - tok.offset;
    return tok;
  }

  Token string_literal(Token tok) {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (done() || peek() == '\n') {
        fail(tok.line, tok.column, "unterminated string");
      }
      const int esc_line = line;
      const int esc_column = column;
      const char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (done() || peek() == '\n') fail(tok.line, tok.column, "unterminated string");
        const char esc = advance();
        if (esc == '"' || esc == '\\') {
          value += esc;
        } else {
          fail(esc_line, esc_column, "unsupported escape '\\" + printable(esc) + "' in string");
        }
      } else {
        value += c;
      }
    }
    tok.kind = TokenKind::String;
    tok.text = std::move(value);
    tok.length = pos - tok.offset;
    return tok;
  }
};

}  // namespace

ParseResult<std::vector<Token>> tokenize(std::string_view source) {
  ParseResult<std::vector<Token>> result;
  std::vector<Token> tokens;
  Scanner scanner{source};
  try {
    for (;;) {
      Token tok = scanner.next();
      const bool end = tok.kind == TokenKind::End;
      tokens.push_back(std::move(tok));
      if (end) break;
    }
  } catch (ParseError& err) {
    result.error = std::move(err);
    return result;
  }
  result.value = std::move(tokens);
  return result;
}

}  // namespace ged
