#include "tkd/item_buffer.hpp"

#include <set>

#include "value_codec.hpp"

namespace tkd {

ItemBuffer copy_to_buffer(const TableModule& table, const RowRange& range) {
  check_range(table, range);
  const BlockNode& tmpl = row_template(table, range.list);
  ItemBuffer buffer;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    PropertySet row;
    for (const auto& leaf : row_leaves(tmpl, row_instance(table, range.list, i))) {
      if (!leaf.node->property_id || !leaf.node->visible_in_data) continue;
      CellValue v = leaf.instance->value;
      if (v.numeric && v.unit.empty()) v.unit = leaf.node->unit;
      row.emplace(*leaf.node->property_id, std::move(v));
    }
    buffer.rows.push_back(std::move(row));
  }
  return buffer;
}

PasteReport paste_from_buffer(const ItemBuffer& buffer, TableModule& table, const RowListRef& list,
                              std::optional<std::size_t> after) {
  if (!list.is_records() && list.split->record == 0) {
    throw Error(ErrorCode::header_record, "cannot paste into the header record");
  }
  const std::size_t first = first_row_index(list);
  const std::size_t count = row_count(table, list);
  std::size_t pos = first;
  if (after) {
    if (*after + 1 < first || *after >= count) {
      throw Error(ErrorCode::range_out_of_bounds, "paste position " + std::to_string(*after) + " out of range");
    }
    pos = *after + 1;
  }
  TableModule next = table;
  const BlockNode& proto = row_template(next, list);
  std::vector<InstanceNode> blanks(buffer.rows.size(), blank_instance(proto));
  insert_rows(next, list, pos, std::move(blanks));
  PasteReport report;
  std::set<int> dropped;
  for (std::size_t i = 0; i < buffer.rows.size(); ++i) {
    CellPath row = row_path(list, pos + i);
    for (int id : fill_cells(next, row, buffer.rows[i])) dropped.insert(id);
    report.rows.push_back(std::move(row));
  }
  report.dropped.assign(dropped.begin(), dropped.end());
  table = std::move(next);
  return report;
}

std::string save_buffer(const ItemBuffer& buffer) {
  std::string out(kBufferVersion);
  out += "\n@rows " + std::to_string(buffer.rows.size()) + "\n";
  for (std::size_t i = 0; i < buffer.rows.size(); ++i) {
    out += "row " + std::to_string(i) + "\n";
    for (const auto& [id, value] : buffer.rows[i]) {
      out += "  prop " + std::to_string(id) + " " + detail::encode_value(value) + "\n";
    }
  }
  out += "@end\n";
  return out;
}

ItemBuffer load_buffer(std::string_view text) {
  using lex::TokenKind;
  auto container = detail::split_container(text);
  if (container.version != kBufferVersion) {
    if (container.version.rfind("tkd-buffer/", 0) == 0) {
      throw Error(ErrorCode::version_mismatch,
                  "buffer version '" + container.version + "', expected '" + std::string(kBufferVersion) + "'",
                  SourcePos{1, 1});
    }
    throw Error(ErrorCode::syntax_error, "not an item buffer (missing '" + std::string(kBufferVersion) + "')",
                SourcePos{1, 1});
  }
  if (container.sections.size() != 2 || container.sections[0].name != "rows" || container.sections[1].name != "end") {
    throw Error(ErrorCode::syntax_error, "expected sections @rows, @end");
  }
  const auto& sec = container.sections[0];
  auto declared = text::parse_number(sec.args);
  if (!declared || *declared < 0 || *declared != static_cast<double>(static_cast<std::size_t>(*declared))) {
    throw Error(ErrorCode::syntax_error, "@rows needs a row count", SourcePos{sec.first_line - 1, 1});
  }
  lex::Cursor cur(lex::tokenize(sec.body, lex::LexOptions{true, sec.first_line - 1}));
  ItemBuffer buffer;
  cur.skip_newlines();
  while (!cur.at_end()) {
    cur.expect_ident("row");
    const auto& index_tok = cur.peek();
    auto index = cur.expect_integer("row index");
    if (index != static_cast<long long>(buffer.rows.size())) {
      cur.fail(index_tok, "expected row " + std::to_string(buffer.rows.size()));
    }
    cur.expect_line_end();
    PropertySet row;
    cur.skip_newlines();
    while (cur.peek().is_ident("prop")) {
      cur.next();
      const auto& id_tok = cur.peek();
      int id = static_cast<int>(cur.expect_integer("property number"));
      CellValue v = detail::decode_value(cur);
      if (!row.emplace(id, std::move(v)).second) {
        throw Error(ErrorCode::duplicate_property, "property " + std::to_string(id) + " given twice", id_tok.pos);
      }
      cur.expect_line_end();
      cur.skip_newlines();
    }
    buffer.rows.push_back(std::move(row));
  }
  if (buffer.rows.size() != static_cast<std::size_t>(*declared)) {
    throw Error(ErrorCode::syntax_error, "@rows declares " + sec.args + " rows, found " +
                                             std::to_string(buffer.rows.size()),
                SourcePos{sec.first_line - 1, 1});
  }
  return buffer;
}

}  // namespace tkd
