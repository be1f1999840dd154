#include "tkd/spec_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "tkd/lexer.hpp"
#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

namespace tkd {

const std::set<std::string, std::less<>>& element_types() {
  static const std::set<std::string, std::less<>> types{"axonometric", "network_profile", "position_label"};
  return types;
}

DrawingFile load_drawing(std::string_view text, std::string name) {
  using lex::TokenKind;
  lex::Cursor cur(lex::tokenize(text));
  DrawingFile file;
  file.name = std::move(name);
  const auto& units = UnitRegistry::standard();
  while (!cur.at_end()) {
    cur.expect_ident("element");
    DrawingElement el;
    const lex::Token type = cur.expect(TokenKind::ident, "element type");
    if (!element_types().count(type.text)) {
      throw Error(ErrorCode::unknown_element_type, "unknown element type '" + type.text + "'", type.pos);
    }
    el.element_type = type.text;
    el.line = type.pos.line;
    cur.expect_ident("qty");
    const lex::Token& qty = cur.peek();
    el.quantity = cur.expect_number("quantity");
    if (!std::isfinite(el.quantity) || el.quantity < 0) cur.fail(qty, "quantity must be a finite number >= 0");
    const lex::Token open = cur.peek();
    cur.expect_punct("{");
    while (!cur.accept_punct("}")) {
      cur.expect_ident("prop");
      const lex::Token& id_tok = cur.peek();
      int id = static_cast<int>(cur.expect_integer("property number"));
      cur.expect_punct("=");
      const lex::Token value = cur.next();
      CellValue v;
      if (value.kind == TokenKind::number) {
        v = CellValue::from_text(value.text);
        v.numeric = value.number;
      } else if (value.kind == TokenKind::string) {
        v = CellValue::from_text(value.text);
      } else {
        cur.fail(value, "expected a string or number value");
      }
      if (cur.peek().kind == TokenKind::string) {
        const lex::Token unit = cur.next();
        if (!units.contains(unit.text)) throw Error(ErrorCode::unknown_unit, "unknown unit '" + unit.text + "'", unit.pos);
        if (!v.numeric) cur.fail(unit, "a unit needs a numeric value");
        v.unit = unit.text;
      }
      if (!el.properties.emplace(id, std::move(v)).second) {
        throw Error(ErrorCode::duplicate_property, "property " + std::to_string(id) + " given twice", id_tok.pos);
      }
    }
    if (el.properties.empty()) cur.fail(open, "element without properties");
    file.elements.push_back(std::move(el));
  }
  return file;
}

DrawingLoader directory_loader(std::string dir) {
  return [dir = std::move(dir)](const std::string& name) {
    std::filesystem::path p = std::filesystem::path(dir) / name;
    if (!p.has_extension()) p += ".dwgp";
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::file_not_found, "cannot open drawing '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
}

namespace {

/// Canonical key of a property set: numbers in base units, text verbatim.
std::string property_key(const PropertySet& props) {
  const auto& units = UnitRegistry::standard();
  std::string key;
  for (const auto& [id, v] : props) {
    key += std::to_string(id);
    if (v.numeric) {
      double x = *v.numeric;
      std::string dim;
      if (!v.unit.empty()) {
        x = units.to_base(x, v.unit);
        dim = std::string(dimension_name(units.lookup(v.unit).dimension));
      }
      // 12 significant digits: 1100 г and 1.1 кг must meet
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", x);
      key += "#n" + std::string(buf) + "#" + dim;
    } else {
      key += "#t" + v.text;
    }
    key += '\x1f';
  }
  return key;
}

}  // namespace

std::vector<CollectedEntry> collect(const std::vector<DrawingFile>& drawings, const std::set<std::string>& types) {
  for (const auto& t : types) {
    if (!element_types().count(t)) throw Error(ErrorCode::unknown_element_type, "unknown element type '" + t + "'");
  }
  std::vector<CollectedEntry> out;
  std::map<std::string, std::size_t> index;
  for (const auto& drawing : drawings) {
    for (const auto& el : drawing.elements) {
      if (!types.empty() && !types.count(el.element_type)) continue;
      auto [it, fresh] = index.emplace(property_key(el.properties), out.size());
      if (fresh) {
        out.push_back({el.properties, el.quantity});
      } else {
        out[it->second].quantity += el.quantity;
      }
    }
  }
  return out;
}

std::vector<CollectedEntry> collect(const CollectionScope& scope, const DrawingLoader& loader) {
  std::vector<DrawingFile> drawings;
  for (const auto& name : scope.files) {
    try {
      drawings.push_back(load_drawing(loader(name), name));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::file_not_found) throw;
      throw Error(e.code(), name + ": " + e.message(), e.pos());
    }
  }
  return collect(drawings, scope.element_types);
}

// ---------------------------------------------------------------------------

namespace {

bool contains_arbitrary(const BlockNode& node) {
  if (node.is_leaf()) return false;
  if (node.arbitrary) return true;
  return std::any_of(node.children.begin(), node.children.end(), contains_arbitrary);
}

/// Instance path of the item split inside `record`, creating single parts
/// in enclosing arbitrary splits that have none.
CellPath open_item_split(TableModule& table, std::size_t record, const std::vector<std::size_t>& tmpl_path) {
  CellPath path{record, {}};
  const BlockNode* node = &table.tmpl.root;
  for (std::size_t step : tmpl_path) {
    if (node->arbitrary) {
      if (instance_at(table, path).children.empty()) insert_part(table, path, 0);
      path.steps.push_back(0);
      node = &node->children[0];
    } else {
      path.steps.push_back(step);
      node = &node->children[step];
    }
  }
  return path;
}

}  // namespace

AutofillReport autofill(TableModule& table, const std::vector<CollectedEntry>& entries) {
  AutofillReport report;
  RowListRef list;
  if (contains_arbitrary(table.tmpl.root)) {
    auto item = item_split_path(table.tmpl.root);
    if (!item) throw Error(ErrorCode::no_data_split, "the template has no arbitrary split for item rows");
    TableModule next = table;
    insert_record(next, next.records.size());
    list.split = open_item_split(next, next.records.size() - 1, *item);
    table = std::move(next);
  }
  const BlockNode& proto = row_template(table, list);
  std::set<int> dropped;
  for (const auto& entry : entries) {
    const std::size_t pos = row_count(table, list);
    insert_rows(table, list, pos, {blank_instance(proto)});
    PropertySet props = entry.properties;
    props[kQuantityProperty] = CellValue::from_number(entry.quantity);
    CellPath row = row_path(list, pos);
    for (int id : fill_cells(table, row, props)) dropped.insert(id);
    report.rows.push_back(std::move(row));
  }
  report.dropped.assign(dropped.begin(), dropped.end());
  return report;
}

// ---------------------------------------------------------------------------

namespace {

bool is_quantity(const BlockNode& leaf) { return leaf.property_id == kQuantityProperty; }

bool maskable(const CellValue& v) { return v.blank() || v.numeric || text::parse_number(v.text); }

bool same_cell(const CellValue& a, const CellValue& b) {
  return a.text == b.text && a.numeric == b.numeric && a.unit == b.unit;
}

bool same_except_quantity(const BlockNode& node, const InstanceNode& a, const InstanceNode& b) {
  if (node.is_leaf()) {
    if (is_quantity(node) && maskable(a.value) && maskable(b.value)) return true;
    return same_cell(a.value, b.value);
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    const auto& child = node.arbitrary ? node.children[0] : node.children[i];
    if (!same_except_quantity(child, a.children[i], b.children[i])) return false;
  }
  return true;
}

std::optional<double> number_of(const CellValue& v) {
  if (v.numeric) return v.numeric;
  if (v.text.empty()) return std::nullopt;
  return text::parse_number(v.text);
}

void add_quantities(const BlockNode& node, InstanceNode& into, const InstanceNode& from) {
  if (node.is_leaf()) {
    if (!is_quantity(node)) return;
    auto a = number_of(into.value);
    auto b = number_of(from.value);
    if (!b) return;
    into.value = CellValue::from_number(a.value_or(0.0) + *b, into.value.unit.empty() ? from.value.unit : into.value.unit);
    return;
  }
  for (std::size_t i = 0; i < into.children.size(); ++i) {
    const auto& child = node.arbitrary ? node.children[0] : node.children[i];
    add_quantities(child, into.children[i], from.children[i]);
  }
}

void check_graphs(const TableModule& table, const std::vector<std::string>& ids) {
  auto graphs = enumerate_graphs(table.tmpl);
  for (const auto& id : ids) {
    bool found = std::any_of(graphs.begin(), graphs.end(), [&](const GraphDescriptor& g) { return g.graph_id == id; });
    if (!found) throw Error(ErrorCode::unknown_graph, "no graph '" + id + "'");
  }
}

struct SortKey {
  int rank = 0;  // 0 blank, 1 number, 2 text
  double number = 0.0;
  std::string text;

  bool operator<(const SortKey& o) const {
    if (rank != o.rank) return rank < o.rank;
    if (rank == 1) return number < o.number;
    if (rank == 2) return text < o.text;  // UTF-8 byte order is codepoint order
    return false;
  }
};

SortKey sort_key(const CellValue* v) {
  if (!v || v->blank()) return {};
  if (auto n = number_of(*v)) return {1, *n, {}};
  return {2, 0.0, v->text};
}

}  // namespace

std::size_t merge_identical(TableModule& table, const RowRange& range) {
  check_range(table, range);
  const BlockNode& tmpl = row_template(table, range.list);
  std::vector<InstanceNode> kept;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    const auto& row = row_instance(table, range.list, i);
    auto it = std::find_if(kept.begin(), kept.end(),
                           [&](const InstanceNode& k) { return same_except_quantity(tmpl, k, row); });
    if (it == kept.end()) {
      kept.push_back(row);
    } else {
      add_quantities(tmpl, *it, row);
    }
  }
  const std::size_t removed = range.size() - kept.size();
  erase_rows(table, range.list, range.begin, range.size());
  insert_rows(table, range.list, range.begin, std::move(kept));
  return removed;
}

void sort_rows(TableModule& table, const RowRange& range, const std::vector<std::string>& graph_sequence) {
  check_graphs(table, graph_sequence);
  check_range(table, range);
  const BlockNode& tmpl = row_template(table, range.list);
  struct Keyed {
    std::vector<SortKey> key;
    InstanceNode row;
  };
  std::vector<Keyed> rows;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    Keyed k{{}, row_instance(table, range.list, i)};
    for (const auto& g : graph_sequence) k.key.push_back(sort_key(row_value(tmpl, k.row, g)));
    rows.push_back(std::move(k));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_instance(table, range.list, range.begin + i) = std::move(rows[i].row);
  }
}

void sort_records(TableModule& table, const std::vector<std::string>& graph_sequence) {
  check_graphs(table, graph_sequence);
  for (const auto& list : flat_row_lists(table)) {
    RowRange range{list, first_row_index(list), row_count(table, list)};
    sort_rows(table, range, graph_sequence);
  }
}

std::string join_common_name(std::string_view header, std::string_view member) {
  std::string out(header);
  if (!member.empty() && !(header.size() >= 2 && header.substr(header.size() - 2) == "×")) out += ' ';
  out += member;
  return out;
}

ExtractResult extract_common_names(TableModule& table, const RowRange& range, const std::string& graph_id) {
  check_graphs(table, {graph_id});
  check_range(table, range);
  if (range.size() < 2) throw Error(ErrorCode::range_out_of_bounds, "common names need at least two rows");
  const BlockNode& tmpl = row_template(table, range.list);

  std::vector<std::vector<std::string>> texts;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    const CellValue* v = row_value(tmpl, row_instance(table, range.list, i), graph_id);
    if (!v) return {};
    texts.push_back(text::codepoints(v->text));
  }
  std::size_t lcp = texts[0].size();
  for (const auto& t : texts) {
    std::size_t n = 0;
    while (n < lcp && n < t.size() && t[n] == texts[0][n]) ++n;
    lcp = n;
  }

  auto cut_ok = [&](std::size_t c) {
    const bool cross = texts[0][c - 1] == "×";
    for (const auto& t : texts) {
      if (c == t.size() || cross) continue;
      if (t[c] != " " || c + 1 == t.size()) return false;
    }
    return true;
  };
  std::size_t cut = lcp;
  while (cut >= 2 && !cut_ok(cut)) --cut;
  if (cut < 2) return {};

  ExtractResult result{true, {}};
  for (std::size_t k = 0; k < cut; ++k) result.header += texts[0][k];
  if (text::codepoint_count(text::trim(result.header)) < 2) return {};
  const bool cross = texts[0][cut - 1] == "×";

  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto& t = texts[i];
    std::size_t from = cut;
    if (!cross && from < t.size()) ++from;  // the separating space
    std::string member;
    for (std::size_t k = from; k < t.size(); ++k) member += t[k];
    auto& row = row_instance(table, range.list, range.begin + i);
    for (const auto& leaf : row_leaves(tmpl, row)) {
      if (leaf.node->graph_id == graph_id) {
        const_cast<InstanceNode*>(leaf.instance)->value = CellValue::from_text(member);
        break;
      }
    }
  }
  InstanceNode header_row = blank_instance(tmpl);
  for (const auto& leaf : row_leaves(tmpl, header_row)) {
    if (leaf.node->graph_id == graph_id) {
      const_cast<InstanceNode*>(leaf.instance)->value = CellValue::from_text(result.header);
      break;
    }
  }
  insert_rows(table, range.list, range.begin, {std::move(header_row)});
  return result;
}

void pack_rows(TableModule& table, const RowRange& range, const LayoutOptions& options) {
  check_range(table, range);
  const BlockNode& tmpl = row_template(table, range.list);
  for (std::size_t i = range.begin; i < range.end; ++i) {
    auto& row = row_instance(table, range.list, i);
    for (const auto& leaf : row_leaves(tmpl, row)) {
      auto& value = const_cast<InstanceNode*>(leaf.instance)->value;
      if (value.text.empty()) {
        value.wrapped_lines.clear();
        continue;
      }
      const auto budget = static_cast<std::size_t>(std::floor(leaf.node->width_mm / options.char_width_mm + 1e-9));
      value.wrapped_lines = text::wrap(value.text, std::max<std::size_t>(1, budget));
    }
  }
}

}  // namespace tkd
