#include <map>
#include <set>

#include "tkd/structure.hpp"
#include "value_codec.hpp"

namespace tkd {

namespace detail {

Container split_container(std::string_view text) {
  Container c;
  auto lines = text::split_lines(text);
  if (lines.empty() || lines.front().empty()) {
    throw Error(ErrorCode::syntax_error, "missing version line", SourcePos{1, 1});
  }
  c.version = lines.front();
  if (!c.version.empty() && c.version.back() == '\r') c.version.pop_back();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (!line.empty() && line.front() == '@') {
      Section s;
      auto space = line.find(' ');
      s.name = line.substr(1, space == std::string::npos ? std::string::npos : space - 1);
      if (space != std::string::npos) s.args = line.substr(space + 1);
      s.first_line = static_cast<int>(i) + 2;
      c.sections.push_back(std::move(s));
    } else if (c.sections.empty()) {
      if (!text::trim(line).empty()) {
        throw Error(ErrorCode::syntax_error, "content outside a section", SourcePos{static_cast<int>(i) + 1, 1});
      }
    } else {
      c.sections.back().body += line;
      c.sections.back().body += '\n';
    }
  }
  return c;
}

}  // namespace detail

namespace {

using detail::decode_value;
using detail::encode_value;
using lex::Cursor;
using lex::TokenKind;

std::string format_steps(const std::vector<std::size_t>& steps) {
  std::string out = "[";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(steps[i]);
  }
  return out + "]";
}

std::vector<std::size_t> parse_steps(Cursor& cur) {
  cur.expect_punct("[");
  std::vector<std::size_t> steps;
  while (!cur.peek().is_punct("]")) {
    auto v = cur.expect_integer("path step");
    if (v < 0 || v > 1'000'000'000) cur.fail(cur.peek(), "path step out of range");
    steps.push_back(static_cast<std::size_t>(v));
  }
  cur.next();
  return steps;
}

void emit_record(const BlockNode& node, const InstanceNode& inst, std::vector<std::size_t>& steps,
                 std::string& out) {
  if (node.is_leaf()) {
    if (inst.value != CellValue{}) out += "  cell " + format_steps(steps) + " " + encode_value(inst.value) + "\n";
    return;
  }
  if (node.arbitrary) {
    out += "  parts " + format_steps(steps) + " " + std::to_string(inst.children.size()) + "\n";
  }
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    steps.push_back(i);
    emit_record(node.arbitrary ? node.children.front() : node.children[i], inst.children[i], steps, out);
    steps.pop_back();
  }
}

struct RecordSpec {
  std::map<std::vector<std::size_t>, std::size_t> parts;
  std::map<std::vector<std::size_t>, CellValue> cells;
  std::map<std::vector<std::size_t>, SourcePos> where;
};

InstanceNode build_record(const BlockNode& node, RecordSpec& spec, std::vector<std::size_t>& steps) {
  InstanceNode inst;
  if (node.is_leaf()) {
    auto it = spec.cells.find(steps);
    if (it != spec.cells.end()) {
      inst.value = std::move(it->second);
      spec.cells.erase(it);
    }
    return inst;
  }
  std::size_t count = node.children.size();
  if (node.arbitrary) {
    auto it = spec.parts.find(steps);
    count = it == spec.parts.end() ? 0 : it->second;
    if (it != spec.parts.end()) spec.parts.erase(it);
  }
  for (std::size_t i = 0; i < count; ++i) {
    steps.push_back(i);
    inst.children.push_back(build_record(node.arbitrary ? node.children.front() : node.children[i], spec, steps));
    steps.pop_back();
  }
  return inst;
}

}  // namespace

std::string save_module(const TableModule& table) {
  std::string out(kModuleVersion);
  out += "\n@structure\n";
  out += serialize_structure(table.tmpl);
  const auto& c = table.continuation;
  out += "@continuation\n";
  out += "chunk " + text::format_exact(c.chunk_height_mm);
  out += std::string(" direction ") + (c.direction == Direction::left ? "left" : "right");
  out += std::string(" repeat_header ") + (c.repeat_header ? "true" : "false");
  out += std::string(" number_row ") + (c.number_row ? "true" : "false");
  out += " first_number " + std::to_string(c.first_graph_number) + "\n";
  out += "@records " + std::to_string(table.records.size()) + "\n";
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    out += "record " + std::to_string(r) + "\n";
    std::vector<std::size_t> steps;
    emit_record(table.tmpl.root, table.records[r], steps, out);
  }
  out += "@end\n";
  return out;
}

TableModule load_module(std::string_view text) {
  auto container = detail::split_container(text);
  if (container.version != kModuleVersion) {
    if (container.version.rfind("tkd/", 0) == 0) {
      throw Error(ErrorCode::version_mismatch,
                  "module version '" + container.version + "', expected '" + std::string(kModuleVersion) + "'",
                  SourcePos{1, 1});
    }
    throw Error(ErrorCode::syntax_error, "not a table module (missing '" + std::string(kModuleVersion) + "')",
                SourcePos{1, 1});
  }
  std::vector<std::string> expected = {"structure", "continuation", "records", "end"};
  if (container.sections.size() != expected.size()) {
    throw Error(ErrorCode::syntax_error, "expected sections @structure, @continuation, @records, @end");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (container.sections[i].name != expected[i]) {
      throw Error(ErrorCode::syntax_error, "expected section @" + expected[i],
                  SourcePos{container.sections[i].first_line - 1, 1});
    }
  }

  const auto& structure = container.sections[0];
  auto parsed = parse_structure(structure.body, structure.first_line - 1);
  for (const auto& d : parsed.diagnostics) {
    if (d.severity == Diagnostic::Severity::error) {
      throw Error(ErrorCode::invalid_template, format_template_path(d.path) + ": " + d.message, d.pos);
    }
  }

  TableModule table;
  table.tmpl = std::move(parsed.tmpl);

  {
    const auto& sec = container.sections[1];
    Cursor cur(lex::tokenize(sec.body, lex::LexOptions{true, sec.first_line - 1}));
    cur.skip_newlines();
    std::set<std::string> seen;
    while (!cur.at_end()) {
      const auto& key = cur.expect(TokenKind::ident, "continuation key");
      if (!seen.insert(key.text).second) cur.fail(key, "duplicate key '" + key.text + "'");
      auto& c = table.continuation;
      auto parse_flag = [&] {
        const auto& t = cur.expect(TokenKind::ident, "true or false");
        if (t.text != "true" && t.text != "false") cur.fail(t, "expected true or false");
        return t.text == "true";
      };
      if (key.text == "chunk") {
        c.chunk_height_mm = cur.expect_number("chunk height");
      } else if (key.text == "direction") {
        const auto& t = cur.expect(TokenKind::ident, "left or right");
        if (t.text != "left" && t.text != "right") cur.fail(t, "expected left or right");
        c.direction = t.text == "left" ? Direction::left : Direction::right;
      } else if (key.text == "repeat_header") {
        c.repeat_header = parse_flag();
      } else if (key.text == "number_row") {
        c.number_row = parse_flag();
      } else if (key.text == "first_number") {
        c.first_graph_number = static_cast<int>(std::clamp<long long>(cur.expect_integer("first number"),
                                                                      -1'000'000'000, 1'000'000'000));
      } else {
        cur.fail(key, "unknown continuation key '" + key.text + "'");
      }
      cur.skip_newlines();
    }
  }

  const auto& sec = container.sections[2];
  Cursor cur(lex::tokenize(sec.body, lex::LexOptions{true, sec.first_line - 1}));
  std::vector<RecordSpec> specs;
  cur.skip_newlines();
  while (!cur.at_end()) {
    const auto& head = cur.peek();
    if (head.is_ident("record")) {
      cur.next();
      auto index = cur.expect_integer("record index");
      if (index != static_cast<long long>(specs.size())) cur.fail(head, "records must be numbered consecutively");
      specs.emplace_back();
    } else if (head.is_ident("parts") || head.is_ident("cell")) {
      if (specs.empty()) cur.fail(head, "'" + head.text + "' before the first record");
      const bool is_parts = head.is_ident("parts");
      cur.next();
      auto steps = parse_steps(cur);
      auto& spec = specs.back();
      if (spec.where.count(steps)) cur.fail(head, "path listed twice");
      spec.where[steps] = head.pos;
      if (is_parts) {
        auto n = cur.expect_integer("part count");
        if (n < 0 || n > 1'000'000) cur.fail(head, "part count out of range");
        spec.parts[steps] = static_cast<std::size_t>(n);
      } else {
        spec.cells[steps] = decode_value(cur);
      }
    } else {
      cur.fail(head, "expected 'record', 'parts' or 'cell'");
    }
    cur.expect_line_end();
    cur.skip_newlines();
  }
  if (!container.sections[2].args.empty() &&
      container.sections[2].args != std::to_string(specs.size())) {
    throw Error(ErrorCode::syntax_error, "record count does not match @records header",
                SourcePos{sec.first_line - 1, 1});
  }
  if (specs.empty()) throw Error(ErrorCode::syntax_error, "module has no header record");

  for (auto& spec : specs) {
    std::vector<std::size_t> steps;
    table.records.push_back(build_record(table.tmpl.root, spec, steps));
    std::optional<SourcePos> stray;
    if (!spec.parts.empty()) stray = spec.where[spec.parts.begin()->first];
    if (!spec.cells.empty()) stray = spec.where[spec.cells.begin()->first];
    if (stray) throw Error(ErrorCode::syntax_error, "path does not exist in the structure", stray);
  }
  if (!conforms(table)) throw Error(ErrorCode::syntax_error, "header record does not match the structure");
  return table;
}

}  // namespace tkd
