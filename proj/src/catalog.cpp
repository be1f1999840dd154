#include "tkd/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tkd/lexer.hpp"
#include "tkd/rows.hpp"
#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

namespace tkd {

std::optional<std::size_t> Catalog::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == name) return i;
  }
  return std::nullopt;
}

namespace {

using lex::Cursor;
using lex::Token;
using lex::TokenKind;

void skip_blank_lines(Cursor& cur) {
  while (cur.peek().kind == TokenKind::newline) cur.next();
}

std::string expect_unit(Cursor& cur) {
  const Token& t = cur.expect(TokenKind::string, "unit symbol");
  if (!UnitRegistry::standard().contains(t.text)) {
    throw Error(ErrorCode::unknown_unit, "unknown unit '" + t.text + "'", t.pos);
  }
  return t.text;
}

std::optional<double> optional_number(Cursor& cur) {
  if (cur.peek().kind == TokenKind::number) return cur.next().number;
  return std::nullopt;
}

CellValue item_value(const Token& t) {
  if (t.kind == TokenKind::number) {
    CellValue v = CellValue::from_text(t.text);
    v.numeric = t.number;
    return v;
  }
  return CellValue::from_text(t.text);
}

void parse_limits(Cursor& cur, CatalogItem& item) {
  while (cur.peek().kind != TokenKind::newline && !cur.at_end()) {
    const Token key = cur.next();
    if (key.is_ident("t") || key.is_ident("p")) {
      auto& slot = key.text == "t" ? item.applicability.temperature : item.applicability.pressure;
      if (slot) cur.fail(key, "limit '" + key.text + "' given twice");
      Range r;
      r.lo = optional_number(cur);
      cur.expect_punct("..");
      r.hi = optional_number(cur);
      if (r.lo && r.hi && *r.lo > *r.hi) cur.fail(key, "range bounds out of order");
      slot = r;
    } else if (key.is_ident("dn")) {
      if (item.applicability.dn) cur.fail(key, "limit 'dn' given twice");
      std::vector<int> sizes;
      do {
        sizes.push_back(static_cast<int>(cur.expect_integer("nominal diameter")));
      } while (cur.accept_punct(","));
      item.applicability.dn = std::move(sizes);
    } else {
      cur.fail(key, "expected t, p or dn");
    }
  }
}

}  // namespace

Catalog load_catalog(std::string_view text) {
  Cursor cur(lex::tokenize(text, {.emit_newlines = true}));
  Catalog cat;
  skip_blank_lines(cur);
  cur.expect_ident("class");
  cat.object_class = cur.expect(TokenKind::string, "object class").text;
  cur.expect_line_end();

  std::set<int> props;
  std::set<std::string> names;
  bool items = false;
  while (true) {
    skip_blank_lines(cur);
    if (cur.at_end()) break;
    const Token head = cur.next();
    if (head.is_ident("field")) {
      CatalogField f;
      const Token& name = cur.peek();
      f.name = cur.expect_string_or_ident("field name");
      if (!names.insert(f.name).second) cur.fail(name, "duplicate field '" + f.name + "'");
      while (cur.peek().kind == TokenKind::ident) {
        const Token key = cur.next();
        if (key.text == "prop") {
          const Token& at = cur.peek();
          f.property_id = static_cast<int>(cur.expect_integer("property number"));
          if (!props.insert(*f.property_id).second) {
            throw Error(ErrorCode::duplicate_property,
                        "property " + std::to_string(*f.property_id) + " bound twice", at.pos);
          }
        } else if (key.text == "unit") {
          f.unit = expect_unit(cur);
        } else {
          cur.fail(key, "expected prop or unit");
        }
      }
      cur.expect_line_end();
      cat.fields.push_back(std::move(f));
    } else if (head.is_ident("range")) {
      const Token kind = cur.next();
      if (!kind.is_ident("t") && !kind.is_ident("p")) cur.fail(kind, "expected t or p");
      cur.expect_ident("unit");
      const Token& at = cur.peek();
      std::string unit = expect_unit(cur);
      const auto want = kind.text == "t" ? Dimension::temperature : Dimension::pressure;
      if (UnitRegistry::standard().dimension_of(unit) != want) {
        throw Error(ErrorCode::dimension_mismatch, "range unit '" + unit + "' has the wrong dimension", at.pos);
      }
      (kind.text == "t" ? cat.temperature_unit : cat.pressure_unit) = unit;
      cur.expect_line_end();
    } else if (head.is_ident("items")) {
      cur.expect_line_end();
      items = true;
      break;
    } else {
      cur.fail(head, "expected field, range or items");
    }
  }
  if (!items) return cat;

  while (true) {
    skip_blank_lines(cur);
    if (cur.at_end()) break;
    CatalogItem item;
    const Token& first = cur.peek();
    item.line = first.pos.line;
    while (cur.peek().kind != TokenKind::newline && !cur.at_end() && !cur.peek().is_punct(":")) {
      const Token t = cur.next();
      if (t.kind == TokenKind::punct) cur.fail(t, "unexpected '" + t.text + "' in item row");
      item.values.push_back(item_value(t));
    }
    if (item.values.size() != cat.fields.size()) {
      throw Error(ErrorCode::syntax_error,
                  "item row has " + std::to_string(item.values.size()) + " values, expected " +
                      std::to_string(cat.fields.size()),
                  first.pos);
    }
    if (cur.accept_punct(":")) parse_limits(cur, item);
    cur.expect_line_end();
    cat.items.push_back(std::move(item));
  }
  return cat;
}

PropertyRules load_rules(std::string_view text) {
  Cursor cur(lex::tokenize(text, {.emit_newlines = true}));
  PropertyRules out;
  std::string scope;
  std::set<std::pair<std::string, int>> seen;
  while (true) {
    skip_blank_lines(cur);
    if (cur.at_end()) break;
    const Token head = cur.next();
    if (head.is_ident("class")) {
      scope = cur.expect(TokenKind::string, "object class").text;
    } else if (head.is_ident("rule")) {
      PropertyRule r;
      const Token& at = cur.peek();
      r.property_id = static_cast<int>(cur.expect_integer("property number"));
      if (!seen.insert({scope, r.property_id}).second) {
        throw Error(ErrorCode::duplicate_property, "rule for property " + std::to_string(r.property_id) +
                                                       " given twice", at.pos);
      }
      cur.expect_punct("=");
      r.template_text = cur.expect(TokenKind::string, "rule template").text;
      if (cur.accept_ident("unit")) r.unit = expect_unit(cur);
      r.object_class = scope;
      out.rules.push_back(std::move(r));
    } else {
      cur.fail(head, "expected class or rule");
    }
    cur.expect_line_end();
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

enum class ConstraintKind { temperature, pressure, dn };

ConstraintKind kind_of(const BlockNode& leaf) {
  if (!leaf.unit.empty()) {
    auto d = UnitRegistry::standard().dimension_of(leaf.unit);
    if (d == Dimension::pressure) return ConstraintKind::pressure;
    if (d == Dimension::temperature) return ConstraintKind::temperature;
  }
  return ConstraintKind::dn;
}

struct Source {
  const BlockNode* node;
  const InstanceNode* inst;
  std::vector<std::size_t> steps;
};

void collect_sources(const BlockNode& node, const InstanceNode& inst, std::vector<std::size_t>& steps,
                     std::vector<Source>& out) {
  if (node.is_leaf()) {
    if (node.constraint_role == ConstraintRole::source) out.push_back({&node, &inst, steps});
    return;
  }
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    steps.push_back(i);
    collect_sources(node.arbitrary ? node.children[0] : node.children[i], inst.children[i], steps, out);
    steps.pop_back();
  }
}

/// False when the source sits inside a part of an arbitrary split below
/// the point where its path leaves the subject's path.
bool in_scope(const BlockNode& root, const std::vector<std::size_t>& source, const std::vector<std::size_t>& subject) {
  std::size_t common = 0;
  while (common < source.size() && common < subject.size() && source[common] == subject[common]) ++common;
  const BlockNode* node = &root;
  for (std::size_t d = 0; d < source.size(); ++d) {
    if (d >= common && node->arbitrary) return false;
    node = node->arbitrary ? &node->children[0] : &node->children[source[d]];
  }
  return true;
}

std::optional<double> numeric_of(const CellValue& v) {
  if (v.numeric) return v.numeric;
  if (v.text.empty()) return std::nullopt;
  return text::parse_number(v.text);
}

// Bounds are inclusive; the slack absorbs unit conversion round-off.
bool within(const Range& r, double v) {
  const double eps = 1e-9 * std::max(1.0, std::fabs(v));
  return (!r.lo || *r.lo - eps <= v) && (!r.hi || v <= *r.hi + eps);
}

}  // namespace

ConstraintSet gather_constraints(const TableModule& table, const CellPath& subject) {
  ConstraintSet out;
  if (subject.record == 0 || subject.record >= table.records.size()) return out;
  std::vector<Source> sources;
  std::vector<std::size_t> steps;
  collect_sources(table.tmpl.root, table.records[subject.record], steps, sources);

  struct Best {
    std::size_t depth = 0;
    const Source* source = nullptr;
  };
  Best best[3];
  for (const auto& s : sources) {
    if (s.steps == subject.steps) continue;
    if (!in_scope(table.tmpl.root, s.steps, subject.steps)) continue;
    std::size_t common = 0;
    while (common < s.steps.size() && common < subject.steps.size() && s.steps[common] == subject.steps[common]) {
      ++common;
    }
    auto& slot = best[static_cast<int>(kind_of(*s.node))];
    if (!slot.source || common > slot.depth) slot = {common, &s};
  }
  for (int k = 0; k < 3; ++k) {
    if (!best[k].source) continue;
    const auto& s = *best[k].source;
    auto v = numeric_of(s.inst->value);
    if (!v) continue;
    std::string unit = s.inst->value.unit.empty() ? s.node->unit : s.inst->value.unit;
    switch (static_cast<ConstraintKind>(k)) {
      case ConstraintKind::temperature: out.temperature = Quantity{*v, unit}; break;
      case ConstraintKind::pressure: out.pressure = Quantity{*v, unit}; break;
      case ConstraintKind::dn: out.dn = static_cast<int>(std::lround(*v)); break;
    }
  }
  return out;
}

bool item_matches(const Catalog& catalog, const CatalogItem& item, const ConstraintSet& c) {
  const auto& units = UnitRegistry::standard();
  const auto& a = item.applicability;
  if (c.temperature) {
    if (units.lookup(c.temperature->unit).dimension != Dimension::temperature) {
      throw Error(ErrorCode::dimension_mismatch, "temperature constraint in '" + c.temperature->unit + "'");
    }
    if (a.temperature &&
        !within(*a.temperature, units.convert(c.temperature->value, c.temperature->unit, catalog.temperature_unit))) {
      return false;
    }
  }
  if (c.pressure) {
    if (units.lookup(c.pressure->unit).dimension != Dimension::pressure) {
      throw Error(ErrorCode::dimension_mismatch, "pressure constraint in '" + c.pressure->unit + "'");
    }
    if (a.pressure && !within(*a.pressure, units.convert(c.pressure->value, c.pressure->unit, catalog.pressure_unit))) {
      return false;
    }
  }
  if (c.dn && a.dn && std::find(a.dn->begin(), a.dn->end(), *c.dn) == a.dn->end()) return false;
  return true;
}

std::vector<CatalogMatch> query(const CatalogStore& store, std::string_view object_class,
                                const ConstraintSet& constraints) {
  std::vector<CatalogMatch> out;
  bool known = false;
  for (std::size_t c = 0; c < store.catalogs.size(); ++c) {
    const auto& cat = store.catalogs[c];
    if (cat.object_class != object_class) continue;
    known = true;
    for (std::size_t i = 0; i < cat.items.size(); ++i) {
      if (item_matches(cat, cat.items[i], constraints)) out.push_back({c, i});
    }
  }
  if (!known) throw Error(ErrorCode::unknown_object_class, "no catalog for '" + std::string(object_class) + "'");
  return out;
}

namespace {

CellValue field_value(const Catalog& catalog, const CatalogItem& item, std::size_t f) {
  CellValue v = item.values[f];
  if (v.numeric) v.unit = catalog.fields[f].unit;
  return v;
}

}  // namespace

PropertySet apply_rules(const PropertyRules& rules, const Catalog& catalog, const CatalogItem& item) {
  PropertySet out;
  for (const auto& rule : rules.rules) {
    if (!rule.object_class.empty() && rule.object_class != catalog.object_class) continue;
    const std::string& t = rule.template_text;
    std::string result;
    std::optional<std::size_t> sole_field;
    int placeholders = 0;
    bool literal = false;
    for (std::size_t i = 0; i < t.size();) {
      if (t.compare(i, 2, "{{") == 0 || t.compare(i, 2, "}}") == 0) {
        result += t[i];
        literal = true;
        i += 2;
      } else if (t[i] == '{') {
        auto close = t.find('}', i);
        if (close == std::string::npos) {
          throw Error(ErrorCode::unresolved_placeholder, "unterminated placeholder in rule " +
                                                             std::to_string(rule.property_id));
        }
        std::string name = t.substr(i + 1, close - i - 1);
        auto f = catalog.field_index(name);
        if (!f) {
          throw Error(ErrorCode::unresolved_placeholder,
                      "rule " + std::to_string(rule.property_id) + ": no field '" + name + "' in '" +
                          catalog.object_class + "'");
        }
        result += item.values[*f].text;
        sole_field = f;
        ++placeholders;
        i = close + 1;
      } else {
        result += t[i];
        literal = true;
        ++i;
      }
    }
    CellValue v;
    if (placeholders == 1 && !literal) {
      // a bare "{field}" passes the value through, converting numbers
      v = field_value(catalog, item, *sole_field);
      if (v.numeric && !rule.unit.empty()) {
        if (!v.unit.empty()) {
          v = CellValue::from_number(UnitRegistry::standard().convert(*v.numeric, v.unit, rule.unit), rule.unit);
        } else {
          v.unit = rule.unit;
        }
      }
    } else {
      v = CellValue::from_text(result);
      if (!rule.unit.empty()) {
        if (auto n = text::parse_number(result)) {
          v.numeric = n;
          v.unit = rule.unit;
        }
      }
    }
    out[rule.property_id] = std::move(v);
  }
  for (std::size_t f = 0; f < catalog.fields.size(); ++f) {
    const auto& field = catalog.fields[f];
    if (field.property_id && !out.count(*field.property_id)) out[*field.property_id] = field_value(catalog, item, f);
  }
  return out;
}

std::vector<int> fill_cells(TableModule& table, const CellPath& row, const PropertySet& properties) {
  const auto& row_inst = instance_at(table, row);
  const auto& row_tmpl = template_node_at(table.tmpl, row.steps);
  std::map<int, CellPath> targets;
  for (const auto& leaf : row_leaves(row_tmpl, row_inst)) {
    if (!leaf.node->property_id || !leaf.node->visible_in_data) continue;
    CellPath p = row;
    p.steps.insert(p.steps.end(), leaf.steps.begin(), leaf.steps.end());
    targets.emplace(*leaf.node->property_id, std::move(p));
  }
  std::vector<int> ignored;
  std::vector<std::pair<CellPath, CellValue>> undo;
  try {
    for (const auto& [id, value] : properties) {
      auto it = targets.find(id);
      if (it == targets.end()) {
        ignored.push_back(id);
        continue;
      }
      undo.emplace_back(it->second, instance_at(table, it->second).value);
      set_cell(table, it->second, value);
    }
  } catch (...) {
    for (auto& [path, old] : undo) instance_at(table, path).value = std::move(old);
    throw;
  }
  return ignored;
}

}  // namespace tkd
