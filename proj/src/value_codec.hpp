#pragma once

// Cell value encoding shared by the .tkm and .tkb containers:
//   STRING [num NUMBER] [unit STRING] [wrap STRING+]

#include <string>
#include <string_view>
#include <vector>

#include "tkd/lexer.hpp"
#include "tkd/model.hpp"
#include "tkd/text_util.hpp"

namespace tkd::detail {

inline std::vector<std::string> default_wrap(const std::string& text) {
  if (text.empty()) return {};
  return text::split_lines(text);
}

inline std::string encode_value(const CellValue& v) {
  std::string out = text::quote(v.text);
  if (v.numeric) out += " num " + text::format_exact(*v.numeric);
  if (!v.unit.empty()) out += " unit " + text::quote(v.unit);
  if (v.wrapped_lines != default_wrap(v.text)) {
    out += " wrap";
    for (const auto& line : v.wrapped_lines) out += " " + text::quote(line);
  }
  return out;
}

inline CellValue decode_value(lex::Cursor& cur) {
  CellValue v;
  v.text = cur.expect(lex::TokenKind::string, "cell text").text;
  bool wrapped = false;
  while (cur.peek().kind == lex::TokenKind::ident) {
    const auto& key = cur.next();
    if (key.text == "num") {
      v.numeric = cur.expect_number("numeric value");
    } else if (key.text == "unit") {
      v.unit = cur.expect(lex::TokenKind::string, "unit").text;
    } else if (key.text == "wrap") {
      wrapped = true;
      while (cur.peek().kind == lex::TokenKind::string) v.wrapped_lines.push_back(cur.next().text);
    } else {
      cur.fail(key, "unknown value attribute '" + key.text + "'");
    }
  }
  if (!wrapped) v.wrapped_lines = default_wrap(v.text);
  return v;
}

/// Splits a container into its version line and '@'-prefixed sections.
struct Section {
  std::string name;
  std::string args;
  std::string body;
  int first_line = 0;  // 1-based line of the first body line
};

struct Container {
  std::string version;
  std::vector<Section> sections;
};

Container split_container(std::string_view text);

}  // namespace tkd::detail
