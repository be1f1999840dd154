#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tkd/error.hpp"

namespace tkd::lex {

enum class TokenKind { ident, string, number, punct, newline, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // decoded for strings; raw spelling otherwise
  double number = 0.0;
  SourcePos pos;

  bool is_ident(std::string_view word) const { return kind == TokenKind::ident && text == word; }
  bool is_punct(std::string_view p) const { return kind == TokenKind::punct && text == p; }
};

struct LexOptions {
  bool emit_newlines = false;
  int line_offset = 0;
};

/// Tokenizes the shared format family: identifiers (ASCII or UTF-8
/// letters, '_', with '.', '/', '-' allowed after the first character),
/// double-quoted strings, decimal numbers, punctuation { } [ ] ( ) = , ; : | ..
/// and '#' comments to end of line. Throws syntax-error with position.
std::vector<Token> tokenize(std::string_view src, LexOptions options = {});

std::string_view kind_name(TokenKind kind);

/// Cursor over a token vector with the usual expect/accept helpers.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::end; }

  bool accept_ident(std::string_view word);
  bool accept_punct(std::string_view p);
  void skip_newlines();

  const Token& expect(TokenKind kind, std::string_view what);
  void expect_ident(std::string_view word);
  void expect_punct(std::string_view p);
  /// Newline or end of input.
  void expect_line_end();
  std::string expect_string_or_ident(std::string_view what);
  double expect_number(std::string_view what);
  long long expect_integer(std::string_view what);

  [[noreturn]] void fail(const Token& at, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace tkd::lex
