#include "tkd/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tkd/text_util.hpp"
#include "tkd/units.hpp"

namespace tkd {

StyleSpec StyleOverride::apply(const StyleSpec& base) const {
  StyleSpec out = base;
  if (lines) out.lines = *lines;
  if (font_tag) out.font_tag = *font_tag;
  if (text_height_mm) out.text_height_mm = *text_height_mm;
  return out;
}

double BlockNode::width() const {
  if (is_leaf()) return width_mm;
  if (children.empty()) return 0.0;
  if (axis == Axis::rows) return children.front().width();
  double total = 0.0;
  for (const auto& child : children) total += child.width();
  return total;
}

BlockNode BlockNode::leaf(std::string graph_id, double width_mm) {
  BlockNode node;
  node.kind = NodeKind::leaf;
  node.header_text = graph_id;
  node.graph_id = std::move(graph_id);
  node.width_mm = width_mm;
  return node;
}

BlockNode BlockNode::split(Axis axis, std::vector<BlockNode> children) {
  BlockNode node;
  node.kind = NodeKind::split;
  node.axis = axis;
  node.children = std::move(children);
  return node;
}

BlockNode BlockNode::arbitrary_rows(BlockNode prototype, int insert_unit, std::string group) {
  BlockNode node;
  node.kind = NodeKind::split;
  node.axis = Axis::rows;
  node.arbitrary = true;
  node.insert_unit = insert_unit;
  node.insert_group = std::move(group);
  node.children.push_back(std::move(prototype));
  return node;
}

std::string format_template_path(const TemplatePath& path) {
  std::string out = "root";
  for (auto step : path) out += "." + std::to_string(step);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

constexpr double kWidthEps = 1e-9;

struct Validator {
  std::vector<Diagnostic> out;
  std::map<std::string, TemplatePath> graph_ids;
  std::map<std::string, std::vector<TemplatePath>> groups;

  void error(const TemplatePath& path, std::string msg) {
    out.push_back({Diagnostic::Severity::error, path, std::move(msg), std::nullopt});
  }
  void warning(const TemplatePath& path, std::string msg) {
    out.push_back({Diagnostic::Severity::warning, path, std::move(msg), std::nullopt});
  }

  void visit(const BlockNode& node, TemplatePath& path, bool header_reachable) {
    if (node.is_leaf()) {
      visit_leaf(node, path, header_reachable);
      return;
    }
    if (node.children.empty()) {
      error(path, "split has no children");
      return;
    }
    if (node.arbitrary) {
      if (node.axis != Axis::rows) {
        error(path, "arbitrary count is only allowed on rows splits");
      }
      if (node.children.size() != 1) {
        error(path, "arbitrary split needs exactly one prototype part");
      }
    } else if (node.children.size() < 2) {
      error(path, "split needs >=2 children");
    }
    if (node.insert_unit < 1) {
      error(path, "insert_unit must be >= 1");
    }
    if (!node.is_arbitrary_rows()) {
      if (node.insert_unit != 1) error(path, "insert_unit is only meaningful on arbitrary rows splits");
      if (!node.insert_group.empty()) error(path, "group is only allowed on arbitrary rows splits");
    } else if (!node.insert_group.empty()) {
      groups[node.insert_group].push_back(path);
    }
    if (node.axis == Axis::rows && !node.children.empty()) {
      const double expected = node.children.front().width();
      for (std::size_t i = 1; i < node.children.size(); ++i) {
        if (std::fabs(node.children[i].width() - expected) > kWidthEps) {
          path.push_back(i);
          error(path, "unequal widths in rows split: " + text::format_exact(node.children[i].width()) +
                          " vs " + text::format_exact(expected));
          path.pop_back();
        }
      }
    }
    const bool child_reachable = header_reachable && node.visible_in_header;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(i);
      visit(node.children[i], path, child_reachable);
      path.pop_back();
    }
  }

  void visit_leaf(const BlockNode& node, const TemplatePath& path, bool header_reachable) {
    if (node.graph_id.empty()) error(path, "leaf needs a graph id");
    if (!(node.width_mm > 0.0) || !std::isfinite(node.width_mm)) {
      error(path, "leaf width must be positive");
    }
    if (!node.graph_id.empty()) {
      auto [it, inserted] = graph_ids.emplace(node.graph_id, path);
      if (!inserted) error(path, "duplicate graph id '" + node.graph_id + "'");
    }
    if (!node.unit.empty() && !UnitRegistry::standard().contains(node.unit)) {
      error(path, "unknown unit '" + node.unit + "'");
    }
    if (node.style.text_height_mm && !(*node.style.text_height_mm > 0.0)) {
      error(path, "text height must be positive");
    }
    if (!node.header_text.empty() && !(header_reachable && node.visible_in_header)) {
      warning(path, "header text '" + node.header_text + "' is hidden in the header and ignored");
    }
    if (node.insert_unit != 1 || !node.insert_group.empty()) {
      error(path, "insert_unit/group are not allowed on leaves");
    }
  }

  void check_groups(const BlockNode& root) {
    for (const auto& [label, paths] : groups) {
      if (paths.size() < 2) continue;
      TemplatePath common = paths.front();
      for (const auto& p : paths) {
        std::size_t n = 0;
        while (n < common.size() && n < p.size() && common[n] == p[n]) ++n;
        common.resize(n);
      }
      bool nested = false;
      for (const auto& p : paths) {
        if (p.size() == common.size()) nested = true;
      }
      if (nested) {
        error(paths.front(), "group '" + label + "' contains nested splits");
        continue;
      }
      const BlockNode* lca = &root;
      for (auto step : common) lca = &lca->children[step];
      if (lca->is_leaf() || lca->axis != Axis::columns) {
        error(common, "group '" + label + "' splits must share a common columns split");
        continue;
      }
      for (const auto& p : paths) {
        const BlockNode* n = lca;
        for (std::size_t i = common.size(); i + 1 < p.size(); ++i) {
          n = &n->children[p[i]];
          if (n->arbitrary) {
            error(p, "group '" + label + "' split is separated from its columns split by an arbitrary split");
            break;
          }
        }
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate_template(const TableTemplate& tmpl) {
  Validator v;
  TemplatePath path;
  v.visit(tmpl.root, path, true);
  v.check_groups(tmpl.root);
  if (!(tmpl.style_defaults.text_height_mm > 0.0)) {
    v.error({}, "default text height must be positive");
  }
  return std::move(v.out);
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::error; });
}

// ---------------------------------------------------------------------------
// Values and paths

CellValue CellValue::from_text(std::string text) {
  CellValue v;
  v.text = std::move(text);
  if (!v.text.empty()) v.wrapped_lines = text::split_lines(v.text);
  return v;
}

CellValue CellValue::from_number(double value, std::string unit) {
  CellValue v = from_text(text::format_display(value));
  v.numeric = value;
  v.unit = std::move(unit);
  return v;
}

std::size_t CellValue::line_count() const { return std::max<std::size_t>(1, wrapped_lines.size()); }

std::string format_cell_path(const CellPath& path) {
  std::string out = std::to_string(path.record) + ":";
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path.steps[i]);
  }
  return out;
}

CellPath parse_cell_path(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::invalid_value, "malformed cell path '" + std::string(text) + "'");
  };
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) throw fail();
  auto to_index = [&](std::string_view s) {
    if (s.empty() || s.size() > 9) throw fail();
    std::size_t v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') throw fail();
      v = v * 10 + static_cast<std::size_t>(ch - '0');
    }
    return v;
  };
  CellPath path;
  path.record = to_index(text.substr(0, colon));
  auto rest = text.substr(colon + 1);
  while (!rest.empty()) {
    auto dot = rest.find('.');
    path.steps.push_back(to_index(rest.substr(0, dot)));
    if (dot == std::string_view::npos) break;
    rest = rest.substr(dot + 1);
    if (rest.empty()) throw fail();
  }
  return path;
}

// ---------------------------------------------------------------------------
// Graphs and instantiation

namespace {

void collect_graphs(const BlockNode& node, TemplatePath& path, std::vector<GraphDescriptor>& out) {
  if (node.is_leaf()) {
    if (node.is_graph()) {
      out.push_back({node.graph_id, node.header_text, node.width_mm, node.property_id, node.unit,
                     node.object_class, node.constraint_role, path});
    }
    return;
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    collect_graphs(node.children[i], path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<GraphDescriptor> enumerate_graphs(const TableTemplate& tmpl) {
  std::vector<GraphDescriptor> out;
  TemplatePath path;
  collect_graphs(tmpl.root, path, out);
  return out;
}

InstanceNode blank_instance(const BlockNode& node) {
  InstanceNode inst;
  if (node.is_leaf() || node.arbitrary) return inst;
  inst.children.reserve(node.children.size());
  for (const auto& child : node.children) inst.children.push_back(blank_instance(child));
  return inst;
}

InstanceNode header_instance(const BlockNode& node) {
  InstanceNode inst;
  if (node.is_leaf()) {
    inst.value = CellValue::from_text(node.header_text);
    return inst;
  }
  for (const auto& child : node.children) inst.children.push_back(header_instance(child));
  return inst;
}

TableModule new_table(TableTemplate tmpl) {
  auto diagnostics = validate_template(tmpl);
  if (has_errors(diagnostics)) {
    for (const auto& d : diagnostics) {
      if (d.severity == Diagnostic::Severity::error) {
        throw Error(ErrorCode::invalid_template, format_template_path(d.path) + ": " + d.message);
      }
    }
  }
  TableModule table;
  table.records.push_back(header_instance(tmpl.root));
  table.tmpl = std::move(tmpl);
  return table;
}

// ---------------------------------------------------------------------------
// Addressing

const BlockNode& template_node_at(const TableTemplate& tmpl, const std::vector<std::size_t>& steps) {
  const BlockNode* node = &tmpl.root;
  for (auto step : steps) {
    if (node->is_leaf()) throw Error(ErrorCode::path_out_of_range, "path descends below a leaf");
    if (node->arbitrary) {
      node = &node->children.front();
    } else {
      if (step >= node->children.size()) {
        throw Error(ErrorCode::path_out_of_range, "child index " + std::to_string(step) + " out of range");
      }
      node = &node->children[step];
    }
  }
  return *node;
}

namespace {

template <typename Table, typename Node>
Node& instance_at_impl(Table& table, const CellPath& path) {
  if (path.record >= table.records.size()) {
    throw Error(ErrorCode::path_out_of_range, "record " + std::to_string(path.record) + " out of range");
  }
  Node* node = &table.records[path.record];
  for (auto step : path.steps) {
    if (step >= node->children.size()) {
      throw Error(ErrorCode::path_out_of_range,
                  "path " + format_cell_path(path) + " out of range");
    }
    node = &node->children[step];
  }
  return *node;
}

}  // namespace

const InstanceNode& instance_at(const TableModule& table, const CellPath& path) {
  return instance_at_impl<const TableModule, const InstanceNode>(table, path);
}

InstanceNode& instance_at(TableModule& table, const CellPath& path) {
  return instance_at_impl<TableModule, InstanceNode>(table, path);
}

CellValue resolve_cell(const TableModule& table, const CellPath& path) {
  const auto& inst = instance_at(table, path);
  const auto& node = template_node_at(table.tmpl, path.steps);
  if (!node.is_leaf()) throw Error(ErrorCode::path_not_leaf, format_cell_path(path) + " is not a leaf");
  return inst.value;
}

void set_cell(TableModule& table, const CellPath& path, CellValue value) {
  if (path.record == 0) throw Error(ErrorCode::header_readonly, "the header record is defined by the template");
  auto& inst = instance_at(table, path);
  const auto& node = template_node_at(table.tmpl, path.steps);
  if (!node.is_leaf()) throw Error(ErrorCode::path_not_leaf, format_cell_path(path) + " is not a leaf");

  const auto& units = UnitRegistry::standard();
  if (!value.unit.empty()) {
    const auto& given = units.lookup(value.unit);
    if (!node.unit.empty() && units.lookup(node.unit).dimension != given.dimension) {
      throw Error(ErrorCode::unit_dimension_mismatch,
                  "value in '" + value.unit + "' does not fit a '" + node.unit + "' cell");
    }
    if (!value.numeric && !value.text.empty()) {
      value.numeric = text::parse_number(value.text);
      if (!value.numeric) {
        throw Error(ErrorCode::invalid_value, "a unit requires a numeric value");
      }
    }
  }
  CellValue stored;
  if (value.numeric) {
    double v = *value.numeric;
    std::string unit = value.unit;
    if (!node.unit.empty()) {
      if (!unit.empty()) v = units.convert(v, unit, node.unit);
      unit = node.unit;
    }
    stored = CellValue::from_number(v, unit);
  } else {
    stored = CellValue::from_text(std::move(value.text));
  }
  inst.value = std::move(stored);
}

// ---------------------------------------------------------------------------
// Structural editing

namespace {

struct GroupMember {
  std::vector<std::size_t> instance_steps;
  const BlockNode* node;
};

void find_group_paths(const BlockNode& node, const std::string& label, TemplatePath& path,
                      std::vector<TemplatePath>& out) {
  if (node.is_leaf()) return;
  if (node.is_arbitrary_rows() && node.insert_group == label) {
    out.push_back(path);
    return;
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    find_group_paths(node.children[i], label, path, out);
    path.pop_back();
  }
}

/// Instance paths of every split acting together with the split at `steps`.
std::vector<GroupMember> group_members(const TableTemplate& tmpl, const std::vector<std::size_t>& steps,
                                       const BlockNode& split) {
  if (split.insert_group.empty()) return {{steps, &split}};
  std::vector<TemplatePath> paths;
  TemplatePath scratch;
  find_group_paths(tmpl.root, split.insert_group, scratch, paths);
  TemplatePath common = paths.front();
  for (const auto& p : paths) {
    std::size_t n = 0;
    while (n < common.size() && n < p.size() && common[n] == p[n]) ++n;
    common.resize(n);
  }
  std::vector<GroupMember> out;
  for (const auto& p : paths) {
    std::vector<std::size_t> inst(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(common.size()));
    inst.insert(inst.end(), p.begin() + static_cast<std::ptrdiff_t>(common.size()), p.end());
    out.push_back({std::move(inst), &template_node_at(tmpl, p)});
  }
  return out;
}

const BlockNode& require_arbitrary(const TableModule& table, const CellPath& split_path) {
  if (split_path.record == 0) throw Error(ErrorCode::header_record, "cannot change the header record");
  if (split_path.record >= table.records.size()) {
    throw Error(ErrorCode::path_out_of_range, "record " + std::to_string(split_path.record) + " out of range");
  }
  const auto& node = template_node_at(table.tmpl, split_path.steps);
  if (!node.is_arbitrary_rows()) {
    throw Error(ErrorCode::not_arbitrary_split, format_cell_path(split_path) + " is not an arbitrary rows split");
  }
  return node;
}

}  // namespace

std::vector<CellPath> insert_part(TableModule& table, const CellPath& split_path, std::size_t at_index) {
  const auto& split = require_arbitrary(table, split_path);
  const auto& own = instance_at(table, split_path);
  if (at_index > own.children.size()) {
    throw Error(ErrorCode::path_out_of_range, "insert index " + std::to_string(at_index) + " out of range");
  }
  const std::size_t act = at_index / static_cast<std::size_t>(split.insert_unit);
  std::vector<CellPath> created;
  for (const auto& member : group_members(table.tmpl, split_path.steps, split)) {
    CellPath member_path{split_path.record, member.instance_steps};
    auto& inst = instance_at(table, member_path);
    const auto unit = static_cast<std::size_t>(member.node->insert_unit);
    const std::size_t pos = std::min(act * unit, inst.children.size());
    const InstanceNode blank = blank_instance(member.node->children.front());
    inst.children.insert(inst.children.begin() + static_cast<std::ptrdiff_t>(pos), unit, blank);
    for (std::size_t k = 0; k < unit; ++k) {
      CellPath p = member_path;
      p.steps.push_back(pos + k);
      created.push_back(std::move(p));
    }
  }
  return created;
}

void delete_part(TableModule& table, const CellPath& split_path, std::size_t index) {
  const auto& split = require_arbitrary(table, split_path);
  const auto& own = instance_at(table, split_path);
  if (index >= own.children.size()) {
    throw Error(ErrorCode::path_out_of_range, "part " + std::to_string(index) + " out of range");
  }
  const std::size_t act = index / static_cast<std::size_t>(split.insert_unit);
  for (const auto& member : group_members(table.tmpl, split_path.steps, split)) {
    auto& inst = instance_at(table, CellPath{split_path.record, member.instance_steps});
    const auto unit = static_cast<std::size_t>(member.node->insert_unit);
    const std::size_t count = inst.children.size();
    if (count == 0) continue;
    std::size_t start = act * unit;
    if (member.node != &split && start + unit > count) start = count > unit ? count - unit : 0;
    if (start >= count) continue;
    const std::size_t n = std::min(unit, count - start);
    auto first = inst.children.begin() + static_cast<std::ptrdiff_t>(start);
    inst.children.erase(first, first + static_cast<std::ptrdiff_t>(n));
  }
}

void insert_record(TableModule& table, std::size_t at_index) {
  if (at_index == 0) throw Error(ErrorCode::header_record, "records cannot be inserted before the header");
  if (at_index > table.records.size()) {
    throw Error(ErrorCode::path_out_of_range, "record index " + std::to_string(at_index) + " out of range");
  }
  table.records.insert(table.records.begin() + static_cast<std::ptrdiff_t>(at_index),
                       blank_instance(table.tmpl.root));
}

void delete_record(TableModule& table, std::size_t index) {
  if (index == 0) throw Error(ErrorCode::header_record, "the header record cannot be deleted");
  if (index >= table.records.size()) {
    throw Error(ErrorCode::path_out_of_range, "record index " + std::to_string(index) + " out of range");
  }
  table.records.erase(table.records.begin() + static_cast<std::ptrdiff_t>(index));
}

bool conforms(const BlockNode& node, const InstanceNode& instance) {
  if (node.is_leaf()) return instance.children.empty();
  if (node.arbitrary) {
    return std::all_of(instance.children.begin(), instance.children.end(),
                       [&](const InstanceNode& part) { return conforms(node.children.front(), part); });
  }
  if (instance.children.size() != node.children.size()) return false;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (!conforms(node.children[i], instance.children[i])) return false;
  }
  return true;
}

namespace {

bool header_shape(const BlockNode& node, const InstanceNode& instance) {
  if (node.is_leaf()) return instance.children.empty();
  if (instance.children.size() != node.children.size()) return false;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (!header_shape(node.children[i], instance.children[i])) return false;
  }
  return true;
}

}  // namespace

bool conforms(const TableModule& table) {
  if (table.records.empty()) return false;
  if (!header_shape(table.tmpl.root, table.records.front())) return false;
  return std::all_of(table.records.begin() + 1, table.records.end(),
                     [&](const InstanceNode& r) { return conforms(table.tmpl.root, r); });
}

}  // namespace tkd
