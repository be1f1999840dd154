#include "tkd/lexer.hpp"

#include <cmath>

#include "tkd/text_util.hpp"

namespace tkd::lex {

namespace {

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool ident_continue(unsigned char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '.' || c == '/' || c == '-';
}

bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view src, LexOptions options) : src_(src), options_(options) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (i_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[i_]);
      if (c == '\n') {
        if (options_.emit_newlines) out.push_back(make(TokenKind::newline, "\n"));
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (c == '"') {
        out.push_back(lex_string());
      } else if (digit(c) || ((c == '-' || c == '+') && i_ + 1 < src_.size() &&
                              digit(static_cast<unsigned char>(src_[i_ + 1])))) {
        out.push_back(lex_number());
      } else if (ident_start(c)) {
        out.push_back(lex_ident());
      } else if (c == '.' && i_ + 1 < src_.size() && src_[i_ + 1] == '.') {
        Token t = make(TokenKind::punct, "..");
        advance();
        advance();
        out.push_back(t);
      } else if (std::string_view("{}[]()=,;:|").find(static_cast<char>(c)) != std::string_view::npos) {
        Token t = make(TokenKind::punct, std::string(1, static_cast<char>(c)));
        advance();
        out.push_back(t);
      } else {
        throw Error(ErrorCode::syntax_error, "unexpected character", pos());
      }
    }
    Token end;
    end.kind = TokenKind::end;
    end.pos = pos();
    out.push_back(end);
    return out;
  }

 private:
  SourcePos pos() const { return {line_ + options_.line_offset, column_}; }

  Token make(TokenKind kind, std::string text) const {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.pos = pos();
    return t;
  }

  void advance() {
    const auto c = static_cast<unsigned char>(src_[i_]);
    ++i_;
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }

  Token lex_string() {
    Token t = make(TokenKind::string, "");
    advance();  // opening quote
    while (true) {
      if (i_ >= src_.size() || src_[i_] == '\n') {
        throw Error(ErrorCode::syntax_error, "unterminated string", t.pos);
      }
      char c = src_[i_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        SourcePos esc = pos();
        advance();
        if (i_ >= src_.size()) throw Error(ErrorCode::syntax_error, "unterminated string", t.pos);
        switch (src_[i_]) {
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case 'r': t.text += '\r'; break;
          default: throw Error(ErrorCode::syntax_error, "unknown escape", esc);
        }
        advance();
        continue;
      }
      t.text += c;
      advance();
    }
    return t;
  }

  Token lex_number() {
    Token t = make(TokenKind::number, "");
    std::size_t start = i_;
    if (src_[i_] == '-' || src_[i_] == '+') advance();
    while (i_ < src_.size() && digit(static_cast<unsigned char>(src_[i_]))) advance();
    if (i_ + 1 < src_.size() && src_[i_] == '.' && digit(static_cast<unsigned char>(src_[i_ + 1]))) {
      advance();
      while (i_ < src_.size() && digit(static_cast<unsigned char>(src_[i_]))) advance();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '-' || src_[j] == '+')) ++j;
      if (j < src_.size() && digit(static_cast<unsigned char>(src_[j]))) {
        while (i_ < j) advance();
        while (i_ < src_.size() && digit(static_cast<unsigned char>(src_[i_]))) advance();
      }
    }
    t.text = std::string(src_.substr(start, i_ - start));
    auto v = text::parse_number(t.text);
    if (!v) throw Error(ErrorCode::syntax_error, "malformed number", t.pos);
    t.number = *v;
    return t;
  }

  Token lex_ident() {
    Token t = make(TokenKind::ident, "");
    std::size_t start = i_;
    while (i_ < src_.size() && ident_continue(static_cast<unsigned char>(src_[i_]))) {
      if (src_[i_] == '.' && i_ + 1 < src_.size() && src_[i_ + 1] == '.') break;
      advance();
    }
    t.text = std::string(src_.substr(start, i_ - start));
    return t;
  }

  std::string_view src_;
  LexOptions options_;
  std::size_t i_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view src, LexOptions options) { return Lexer(src, options).run(); }

std::string_view kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::ident: return "identifier";
    case TokenKind::string: return "string";
    case TokenKind::number: return "number";
    case TokenKind::punct: return "punctuation";
    case TokenKind::newline: return "end of line";
    case TokenKind::end: return "end of input";
  }
  return "?";
}

const Token& Cursor::peek(std::size_t ahead) const {
  std::size_t i = index_ + ahead;
  if (i >= tokens_.size()) return tokens_.back();
  return tokens_[i];
}

const Token& Cursor::next() {
  const Token& t = peek();
  if (index_ < tokens_.size() - 1) ++index_;
  return t;
}

bool Cursor::accept_ident(std::string_view word) {
  if (peek().is_ident(word)) {
    next();
    return true;
  }
  return false;
}

bool Cursor::accept_punct(std::string_view p) {
  if (peek().is_punct(p)) {
    next();
    return true;
  }
  return false;
}

void Cursor::skip_newlines() {
  while (peek().kind == TokenKind::newline) next();
}

void Cursor::fail(const Token& at, const std::string& message) const {
  throw Error(ErrorCode::syntax_error, message, at.pos);
}

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::end: return "end of input";
    case TokenKind::newline: return "end of line";
    case TokenKind::string: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

}  // namespace

const Token& Cursor::expect(TokenKind kind, std::string_view what) {
  if (peek().kind != kind) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

void Cursor::expect_ident(std::string_view word) {
  if (!peek().is_ident(word)) fail(peek(), "expected '" + std::string(word) + "', found " + describe(peek()));
  next();
}

void Cursor::expect_punct(std::string_view p) {
  if (!peek().is_punct(p)) fail(peek(), "expected '" + std::string(p) + "', found " + describe(peek()));
  next();
}

void Cursor::expect_line_end() {
  if (peek().kind == TokenKind::end) return;
  if (peek().kind != TokenKind::newline) fail(peek(), "expected end of line, found " + describe(peek()));
  next();
}

std::string Cursor::expect_string_or_ident(std::string_view what) {
  if (peek().kind != TokenKind::string && peek().kind != TokenKind::ident) {
    fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  }
  return next().text;
}

double Cursor::expect_number(std::string_view what) { return expect(TokenKind::number, what).number; }

long long Cursor::expect_integer(std::string_view what) {
  const Token& t = peek();
  if (t.kind != TokenKind::number || t.number != std::floor(t.number) || std::fabs(t.number) > 1e15 ||
      t.text.find_first_of(".eE") != std::string::npos) {
    fail(t, "expected integer " + std::string(what) + ", found " + describe(t));
  }
  next();
  return static_cast<long long>(t.number);
}

}  // namespace tkd::lex
