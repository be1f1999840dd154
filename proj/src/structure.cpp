#include "tkd/structure.hpp"

#include <cmath>
#include <map>
#include <set>

#include "tkd/lexer.hpp"
#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

namespace tkd {

namespace {

using lex::Cursor;
using lex::Token;
using lex::TokenKind;

enum class Owner { table, split, leaf };

// Canonical key order; the last two are extensions of the base key set.
const std::vector<std::string_view> kKeyOrder = {"header", "data",        "width", "prop", "object",
                                                 "unit",   "role",        "insert_unit",   "group",
                                                 "line",   "font",        "h",     "text", "note"};

bool key_allowed(Owner owner, std::string_view key) {
  static const std::set<std::string_view> table_keys = {"line", "font", "h", "note"};
  static const std::set<std::string_view> split_keys = {"header", "data", "insert_unit", "group"};
  static const std::set<std::string_view> leaf_keys = {"header", "data", "width", "prop", "object", "unit",
                                                       "role",   "line", "font",  "h",    "text"};
  switch (owner) {
    case Owner::table: return table_keys.count(key) > 0;
    case Owner::split: return split_keys.count(key) > 0;
    case Owner::leaf: return leaf_keys.count(key) > 0;
  }
  return false;
}

bool known_key(std::string_view key) {
  for (auto k : kKeyOrder) {
    if (k == key) return true;
  }
  return false;
}

LineType parse_line_type(const Cursor& cur, const Token& t, std::string_view word) {
  if (word == "thin") return LineType::thin;
  if (word == "thick") return LineType::thick;
  if (word == "none") return LineType::none;
  cur.fail(t, "unknown line type '" + std::string(word) + "'");
}

std::string_view line_type_name(LineType t) {
  switch (t) {
    case LineType::thin: return "thin";
    case LineType::thick: return "thick";
    case LineType::none: return "none";
  }
  return "thin";
}

class StructureParser {
 public:
  StructureParser(std::string_view text, int line_offset)
      : cur_(lex::tokenize(text, lex::LexOptions{false, line_offset})) {}

  StructureParse run() {
    StructureParse out;
    cur_.expect_ident("table");
    out.tmpl.name = cur_.expect(TokenKind::string, "table name").text;
    StyleOverride defaults;
    if (cur_.peek().is_punct("[")) {
      parse_attrs(Owner::table, [&](const std::string& key, Cursor& c) {
        if (key == "note") {
          out.tmpl.units_note = c.expect_string_or_ident("note text");
        } else {
          parse_style_key(key, c, defaults);
        }
      });
    }
    out.tmpl.style_defaults = defaults.apply(StyleSpec{});
    TemplatePath path;
    if (cur_.peek().is_punct("{")) {
      cur_.next();
      out.tmpl.root = parse_node(path);
      cur_.expect_punct("}");
    } else {
      out.tmpl.root = parse_node(path);
    }
    if (!cur_.at_end()) cur_.fail(cur_.peek(), "unexpected content after the root block");

    out.diagnostics = validate_template(out.tmpl);
    for (auto& d : out.diagnostics) {
      auto it = positions_.find(d.path);
      if (it != positions_.end()) d.pos = it->second;
    }
    return out;
  }

 private:
  template <typename Fn>
  void parse_attrs(Owner owner, Fn&& on_key) {
    cur_.expect_punct("[");
    std::set<std::string> seen;
    while (true) {
      const Token& key_tok = cur_.expect(TokenKind::ident, "attribute key");
      std::string key = key_tok.text;
      check_key(owner, key_tok, seen);
      cur_.expect_punct("=");
      on_key(key, cur_);
      if (cur_.accept_punct(",")) continue;
      cur_.expect_punct("]");
      break;
    }
  }

  void check_key(Owner owner, const Token& key_tok, std::set<std::string>& seen) {
    const std::string& key = key_tok.text;
    if (!known_key(key)) cur_.fail(key_tok, "unknown attribute '" + key + "'");
    if (!key_allowed(owner, key)) cur_.fail(key_tok, "attribute '" + key + "' is not allowed here");
    if (!seen.insert(key).second) cur_.fail(key_tok, "duplicate attribute '" + key + "'");
  }

  bool parse_bool(Cursor& c) {
    const Token& t = c.expect(TokenKind::ident, "true or false");
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    c.fail(t, "expected true or false");
  }

  double parse_positive(Cursor& c, std::string_view what) {
    const Token& t = c.expect(TokenKind::number, what);
    return t.number;
  }

  void parse_style_key(const std::string& key, Cursor& c, StyleOverride& style) {
    if (key == "line") {
      const Token& t = c.peek();
      if (t.kind == TokenKind::ident) {
        c.next();
        LineType lt = parse_line_type(c, t, t.text);
        style.lines = EdgeLines{lt, lt, lt, lt};
      } else {
        const Token& s = c.expect(TokenKind::string, "line type");
        std::vector<std::string> words;
        std::string cur;
        for (char ch : s.text + " ") {
          if (ch == ' ') {
            if (!cur.empty()) words.push_back(cur);
            cur.clear();
          } else {
            cur += ch;
          }
        }
        if (words.size() != 4) c.fail(s, "line needs one type or four (top right bottom left)");
        style.lines = EdgeLines{parse_line_type(c, s, words[0]), parse_line_type(c, s, words[1]),
                                parse_line_type(c, s, words[2]), parse_line_type(c, s, words[3])};
      }
    } else if (key == "font") {
      style.font_tag = c.expect_string_or_ident("font tag");
    } else if (key == "h") {
      style.text_height_mm = parse_positive(c, "text height");
    }
  }

  BlockNode parse_node(TemplatePath& path) {
    const Token& head = cur_.peek();
    positions_[path] = head.pos;
    if (head.is_ident("leaf")) return parse_leaf(path);
    if (head.is_ident("cols") || head.is_ident("rows")) return parse_split(path);
    cur_.fail(head, "expected 'cols', 'rows' or 'leaf'");
  }

  BlockNode parse_split(TemplatePath& path) {
    BlockNode node;
    node.kind = NodeKind::split;
    node.axis = cur_.next().text == "cols" ? Axis::columns : Axis::rows;
    std::optional<std::pair<long long, Token>> fixed;
    if (cur_.peek().is_ident("fixed")) {
      cur_.next();
      Token count_tok = cur_.peek();
      fixed = std::make_pair(cur_.expect_integer("part count"), count_tok);
    } else if (cur_.accept_ident("arb")) {
      node.arbitrary = true;
    }
    if (cur_.peek().is_punct("[")) {
      parse_attrs(Owner::split, [&](const std::string& key, Cursor& c) {
        if (key == "header") {
          node.visible_in_header = parse_bool(c);
        } else if (key == "data") {
          node.visible_in_data = parse_bool(c);
        } else if (key == "insert_unit") {
          node.insert_unit = static_cast<int>(std::clamp<long long>(c.expect_integer("insert unit"), -1, 1 << 20));
        } else if (key == "group") {
          node.insert_group = c.expect_string_or_ident("group label");
        }
      });
    }
    cur_.expect_punct("{");
    while (!cur_.peek().is_punct("}")) {
      if (cur_.at_end()) cur_.fail(cur_.peek(), "unterminated block, expected '}'");
      path.push_back(node.children.size());
      node.children.push_back(parse_node(path));
      path.pop_back();
    }
    const Token& close = cur_.next();
    if (node.children.empty()) cur_.fail(close, "block needs at least one child");
    if (fixed && fixed->first != static_cast<long long>(node.children.size())) {
      cur_.fail(fixed->second, "fixed count " + std::to_string(fixed->first) + " does not match " +
                                   std::to_string(node.children.size()) + " children");
    }
    return node;
  }

  BlockNode parse_leaf(const TemplatePath& path) {
    const Token& leaf_tok = cur_.next();
    BlockNode node;
    node.kind = NodeKind::leaf;
    node.graph_id = cur_.expect(TokenKind::string, "graph id").text;
    bool has_text = false;
    auto on_key = [&](const std::string& key, Cursor& c) {
      if (key == "header") {
        node.visible_in_header = parse_bool(c);
      } else if (key == "data") {
        node.visible_in_data = parse_bool(c);
      } else if (key == "width") {
        node.width_mm = c.expect_number("width");
      } else if (key == "prop") {
        node.property_id = static_cast<int>(std::clamp<long long>(c.expect_integer("property id"), -1, 1 << 30));
      } else if (key == "object") {
        node.object_class = c.expect_string_or_ident("object class");
      } else if (key == "unit") {
        const Token& t = c.peek();
        node.unit = c.expect_string_or_ident("unit");
        if (!UnitRegistry::standard().contains(node.unit)) {
          throw Error(ErrorCode::unknown_unit, "unknown unit '" + node.unit + "'", t.pos);
        }
      } else if (key == "role") {
        const Token& t = c.expect(TokenKind::ident, "role");
        if (t.text == "source") {
          node.constraint_role = ConstraintRole::source;
        } else if (t.text == "subject") {
          node.constraint_role = ConstraintRole::subject;
        } else {
          c.fail(t, "role must be source or subject");
        }
      } else if (key == "text") {
        node.header_text = c.expect(TokenKind::string, "header text").text;
        has_text = true;
      } else {
        parse_style_key(key, c, node.style);
      }
    };
    if (cur_.peek().is_punct("[")) {
      parse_attrs(Owner::leaf, on_key);
    } else {
      // inline form: leaf "Поз" width 10 prop 1
      std::set<std::string> seen;
      while (cur_.peek().kind == TokenKind::ident && known_key(cur_.peek().text)) {
        const Token& key_tok = cur_.next();
        check_key(Owner::leaf, key_tok, seen);
        cur_.accept_punct("=");
        on_key(key_tok.text, cur_);
      }
    }
    if (!has_text) node.header_text = node.graph_id;
    if (!node.graph_id.empty()) {
      auto [it, inserted] = graph_ids_.emplace(node.graph_id, leaf_tok.pos);
      if (!inserted) {
        throw Error(ErrorCode::duplicate_graph_id, "duplicate graph id '" + node.graph_id + "'", leaf_tok.pos);
      }
    }
    (void)path;
    return node;
  }

  Cursor cur_;
  std::map<TemplatePath, SourcePos> positions_;
  std::map<std::string, SourcePos> graph_ids_;
};

// --- serialization ---------------------------------------------------------

std::string format_lines(const EdgeLines& lines) {
  if (lines.uniform()) return std::string(line_type_name(lines.top));
  return text::quote(std::string(line_type_name(lines.top)) + " " + std::string(line_type_name(lines.right)) +
                     " " + std::string(line_type_name(lines.bottom)) + " " +
                     std::string(line_type_name(lines.left)));
}

std::string format_attrs(const std::vector<std::pair<std::string, std::string>>& attrs) {
  if (attrs.empty()) return {};
  std::string out = " [";
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out += ", ";
    out += attrs[i].first + "=" + attrs[i].second;
  }
  return out + "]";
}

void style_attrs(const StyleOverride& style, std::vector<std::pair<std::string, std::string>>& attrs) {
  if (style.lines) attrs.emplace_back("line", format_lines(*style.lines));
  if (style.font_tag) attrs.emplace_back("font", text::quote(*style.font_tag));
  if (style.text_height_mm) attrs.emplace_back("h", text::format_exact(*style.text_height_mm));
}

void serialize_node(const BlockNode& node, int depth, std::string& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  std::vector<std::pair<std::string, std::string>> attrs;
  if (!node.visible_in_header) attrs.emplace_back("header", "false");
  if (!node.visible_in_data) attrs.emplace_back("data", "false");
  if (node.is_leaf()) {
    attrs.emplace_back("width", text::format_exact(node.width_mm));
    if (node.property_id) attrs.emplace_back("prop", std::to_string(*node.property_id));
    if (!node.object_class.empty()) attrs.emplace_back("object", text::quote(node.object_class));
    if (!node.unit.empty()) attrs.emplace_back("unit", text::quote(node.unit));
    if (node.constraint_role) {
      attrs.emplace_back("role", node.constraint_role == ConstraintRole::source ? "source" : "subject");
    }
    style_attrs(node.style, attrs);
    if (node.header_text != node.graph_id) attrs.emplace_back("text", text::quote(node.header_text));
    out += indent + "leaf " + text::quote(node.graph_id) + format_attrs(attrs) + "\n";
    return;
  }
  if (node.insert_unit != 1) attrs.emplace_back("insert_unit", std::to_string(node.insert_unit));
  if (!node.insert_group.empty()) attrs.emplace_back("group", text::quote(node.insert_group));
  out += indent + (node.axis == Axis::columns ? "cols" : "rows");
  out += node.arbitrary ? " arb" : " fixed " + std::to_string(node.children.size());
  out += format_attrs(attrs) + " {\n";
  for (const auto& child : node.children) serialize_node(child, depth + 1, out);
  out += indent + "}\n";
}

}  // namespace

StructureParse parse_structure(std::string_view text, int line_offset) {
  return StructureParser(text, line_offset).run();
}

std::string serialize_structure(const TableTemplate& tmpl) {
  std::vector<std::pair<std::string, std::string>> attrs;
  const StyleSpec defaults;
  StyleOverride diff;
  if (tmpl.style_defaults.lines != defaults.lines) diff.lines = tmpl.style_defaults.lines;
  if (tmpl.style_defaults.font_tag != defaults.font_tag) diff.font_tag = tmpl.style_defaults.font_tag;
  if (tmpl.style_defaults.text_height_mm != defaults.text_height_mm) {
    diff.text_height_mm = tmpl.style_defaults.text_height_mm;
  }
  style_attrs(diff, attrs);
  if (!tmpl.units_note.empty()) attrs.emplace_back("note", text::quote(tmpl.units_note));

  std::string out = "table " + text::quote(tmpl.name) + format_attrs(attrs) + "\n";
  if (tmpl.root.is_leaf()) {
    out += "{\n";
    serialize_node(tmpl.root, 1, out);
    out += "}\n";
  } else {
    serialize_node(tmpl.root, 0, out);
  }
  return out;
}

}  // namespace tkd
