#include "tkd/json_codec.hpp"

namespace tkd::json {

namespace {

std::string_view line_name(LineType t) {
  switch (t) {
    case LineType::none: return "none";
    case LineType::thin: return "thin";
    case LineType::thick: return "thick";
  }
  return "thin";
}

json point(const Point& p) { return json{{"x", p.x}, {"y", p.y}}; }

json rect(const Rect& r) { return json{{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}}; }

json edges(const EdgeLines& e) {
  return json{{"top", line_name(e.top)}, {"right", line_name(e.right)}, {"bottom", line_name(e.bottom)},
              {"left", line_name(e.left)}};
}

[[noreturn]] void bad(const std::string& what) { throw BadRequest(what); }

}  // namespace

json to_json(const CellValue& v) {
  json j{{"text", v.text}, {"unit", v.unit}, {"wrapped_lines", v.wrapped_lines}};
  j["numeric"] = v.numeric ? json(*v.numeric) : json(nullptr);
  return j;
}

CellValue cell_value_from_json(const json& j) {
  if (j.is_string()) return CellValue::from_text(j.get<std::string>());
  if (j.is_number()) return CellValue::from_number(j.get<double>());
  if (!j.is_object()) bad("cell value must be an object or a string");
  CellValue v = CellValue::from_text(j.value("text", std::string{}));
  if (j.contains("numeric") && !j["numeric"].is_null()) {
    if (!j["numeric"].is_number()) bad("numeric must be a number");
    v.numeric = j["numeric"].get<double>();
  }
  v.unit = j.value("unit", std::string{});
  if (j.contains("wrapped_lines")) v.wrapped_lines = j["wrapped_lines"].get<std::vector<std::string>>();
  return v;
}

json to_json(const CellPath& p) { return json{{"record", p.record}, {"steps", p.steps}}; }

CellPath cell_path_from_json(const json& j) {
  if (j.is_string()) {
    try {
      return parse_cell_path(j.get<std::string>());
    } catch (const Error& e) {
      bad(e.message());
    }
  }
  if (!j.is_object() || !j.contains("record")) bad("cell path must be {record, steps} or \"r:a.b\"");
  CellPath p;
  p.record = j["record"].get<std::size_t>();
  if (j.contains("steps")) p.steps = j["steps"].get<std::vector<std::size_t>>();
  return p;
}

json to_json(const BlockNode& node) {
  json j{{"kind", node.is_leaf() ? "leaf" : "split"},
         {"visible_in_header", node.visible_in_header},
         {"visible_in_data", node.visible_in_data}};
  if (node.is_leaf()) {
    j["graph_id"] = node.graph_id;
    j["header_text"] = node.header_text;
    j["width_mm"] = node.width_mm;
    j["property_id"] = node.property_id ? json(*node.property_id) : json(nullptr);
    j["object_class"] = node.object_class;
    j["unit"] = node.unit;
    j["constraint_role"] = !node.constraint_role                                   ? json(nullptr)
                           : *node.constraint_role == ConstraintRole::source ? json("source")
                                                                             : json("subject");
    json style = json::object();
    if (node.style.lines) style["lines"] = edges(*node.style.lines);
    if (node.style.font_tag) style["font_tag"] = *node.style.font_tag;
    if (node.style.text_height_mm) style["text_height_mm"] = *node.style.text_height_mm;
    j["style"] = style;
  } else {
    j["axis"] = node.axis == Axis::columns ? "columns" : "rows";
    j["arbitrary"] = node.arbitrary;
    j["insert_unit"] = node.insert_unit;
    j["insert_group"] = node.insert_group;
    json children = json::array();
    for (const auto& c : node.children) children.push_back(to_json(c));
    j["children"] = children;
  }
  return j;
}

json to_json(const TableTemplate& tmpl) {
  return json{{"name", tmpl.name},
              {"units_note", tmpl.units_note},
              {"root", to_json(tmpl.root)},
              {"style_defaults",
               {{"lines", edges(tmpl.style_defaults.lines)},
                {"font_tag", tmpl.style_defaults.font_tag},
                {"text_height_mm", tmpl.style_defaults.text_height_mm}}}};
}

json to_json(const InstanceNode& node) {
  if (node.children.empty()) return json{{"value", to_json(node.value)}};
  json children = json::array();
  for (const auto& c : node.children) children.push_back(to_json(c));
  return json{{"children", children}};
}

json to_json(const ContinuationSpec& c) {
  return json{{"chunk_height_mm", c.chunk_height_mm},
              {"direction", c.direction == Direction::left ? "left" : "right"},
              {"repeat_header", c.repeat_header},
              {"number_row", c.number_row},
              {"first_graph_number", c.first_graph_number}};
}

json to_json(const TableModule& table) {
  json records = json::array();
  for (const auto& r : table.records) records.push_back(to_json(r));
  return json{{"template", to_json(table.tmpl)}, {"records", records}, {"continuation", to_json(table.continuation)}};
}

json to_json(const Diagnostic& d) {
  json j{{"severity", d.severity == Diagnostic::Severity::error ? "error" : "warning"},
         {"path", d.path},
         {"message", d.message}};
  if (d.pos) {
    j["line"] = d.pos->line;
    j["column"] = d.pos->column;
  }
  return j;
}

json to_json(const Error& e) {
  json j{{"error", error_code_name(e.code())}, {"message", e.message()}};
  if (e.pos()) {
    j["line"] = e.pos()->line;
    j["column"] = e.pos()->column;
  }
  return j;
}

json to_json(const LayoutTree& tree) {
  json leaves = json::array();
  for (const auto& l : tree.leaves) {
    leaves.push_back(json{{"path", to_json(l.path)}, {"rect", rect(l.rect)}, {"visible", l.visible}});
  }
  json lines = json::array();
  for (const auto& l : tree.lines) {
    lines.push_back(json{{"from", point(l.from)}, {"to", point(l.to)}, {"type", line_name(l.type)}});
  }
  json texts = json::array();
  for (const auto& t : tree.texts) {
    texts.push_back(json{{"baseline", point(t.baseline)},
                         {"text", t.text},
                         {"font_tag", t.font_tag},
                         {"size_mm", t.size_mm},
                         {"cell", to_json(t.cell)},
                         {"line_index", t.line_index}});
  }
  json j{{"width", tree.width},   {"height", tree.height},
         {"record_indices", tree.record_indices},
         {"leaves", leaves},      {"lines", lines},
         {"texts", texts}};
  j["number_band"] = tree.number_band ? rect(*tree.number_band) : json(nullptr);
  return j;
}

json to_json(const Segment& s) {
  return json{{"record_begin", s.record_begin},       {"record_end", s.record_end},
              {"rect", rect(s.rect)},                 {"header_repeated", s.header_repeated},
              {"number_row", s.number_row},           {"graph_numbers", s.graph_numbers}};
}

json to_json(const PropertySet& props) {
  json j = json::object();
  for (const auto& [id, v] : props) j[std::to_string(id)] = to_json(v);
  return j;
}

PropertySet property_set_from_json(const json& j) {
  if (!j.is_object()) bad("property set must be an object");
  PropertySet out;
  for (const auto& [key, value] : j.items()) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != key.size()) bad("property key '" + key + "' is not a number");
    out[id] = cell_value_from_json(value);
  }
  return out;
}

json to_json(const ItemBuffer& buffer) {
  json rows = json::array();
  for (const auto& r : buffer.rows) rows.push_back(to_json(r));
  return json{{"rows", rows}};
}

ItemBuffer item_buffer_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) bad("buffer must be {rows: [...]}");
  ItemBuffer b;
  for (const auto& r : j["rows"]) b.rows.push_back(property_set_from_json(r));
  return b;
}

json to_json(const ConstraintSet& c) {
  auto q = [](const std::optional<Quantity>& v) {
    return v ? json{{"value", v->value}, {"unit", v->unit}} : json(nullptr);
  };
  return json{{"temperature", q(c.temperature)}, {"pressure", q(c.pressure)},
              {"dn", c.dn ? json(*c.dn) : json(nullptr)}};
}

json to_json(const RowListRef& list) { return list.split ? to_json(*list.split) : json(nullptr); }

RowListRef row_list_from_json(const json& j) {
  RowListRef list;
  if (!j.is_null()) list.split = cell_path_from_json(j);
  return list;
}

RowRange row_range_from_json(const TableModule& table, const json& j) {
  RowRange r;
  if (!j.is_object()) bad("range must be an object");
  r.list = row_list_from_json(j.value("list", json(nullptr)));
  r.begin = j.contains("begin") ? j["begin"].get<std::size_t>() : first_row_index(r.list);
  r.end = j.contains("end") ? j["end"].get<std::size_t>() : row_count(table, r.list);
  return r;
}

}  // namespace tkd::json
