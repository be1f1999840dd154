#include "tkd/rows.hpp"

namespace tkd {

namespace {

bool contains_arbitrary(const BlockNode& node) {
  if (node.is_leaf()) return false;
  if (node.arbitrary) return true;
  for (const auto& child : node.children) {
    if (contains_arbitrary(child)) return true;
  }
  return false;
}

void collect_leaves(const BlockNode& node, const InstanceNode& inst, std::vector<std::size_t>& steps,
                    std::vector<LeafRef>& out) {
  if (node.is_leaf()) {
    out.push_back({&node, &inst, steps});
    return;
  }
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    const auto& child_tmpl = node.arbitrary ? node.children.front() : node.children[i];
    steps.push_back(i);
    collect_leaves(child_tmpl, inst.children[i], steps, out);
    steps.pop_back();
  }
}

void collect_flat_lists(const BlockNode& node, const InstanceNode& inst, CellPath& path,
                        std::vector<RowListRef>& out) {
  if (node.is_leaf()) return;
  if (node.is_arbitrary_rows() && !contains_arbitrary(node.children.front())) {
    out.push_back(RowListRef{path});
    return;
  }
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    const auto& child_tmpl = node.arbitrary ? node.children.front() : node.children[i];
    path.steps.push_back(i);
    collect_flat_lists(child_tmpl, inst.children[i], path, out);
    path.steps.pop_back();
  }
}

bool find_item_split(const BlockNode& node, std::vector<std::size_t>& path) {
  if (node.is_leaf()) return false;
  if (node.is_arbitrary_rows() && node.insert_group.empty() && !contains_arbitrary(node.children.front())) {
    return true;
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(node.arbitrary ? 0 : i);
    if (find_item_split(node.children[i], path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

RowRange all_data_rows(const TableModule& table) {
  return RowRange{RowListRef{}, 1, table.records.size()};
}

std::size_t first_row_index(const RowListRef& list) { return list.is_records() ? 1 : 0; }

std::size_t row_count(const TableModule& table, const RowListRef& list) {
  if (list.is_records()) return table.records.size();
  return instance_at(table, *list.split).children.size();
}

const BlockNode& row_template(const TableModule& table, const RowListRef& list) {
  if (list.is_records()) return table.tmpl.root;
  const auto& node = template_node_at(table.tmpl, list.split->steps);
  if (!node.is_arbitrary_rows()) {
    throw Error(ErrorCode::not_arbitrary_split, format_cell_path(*list.split) + " is not an arbitrary rows split");
  }
  return node.children.front();
}

CellPath row_path(const RowListRef& list, std::size_t index) {
  if (list.is_records()) return CellPath{index, {}};
  CellPath p = *list.split;
  p.steps.push_back(index);
  return p;
}

InstanceNode& row_instance(TableModule& table, const RowListRef& list, std::size_t index) {
  return instance_at(table, row_path(list, index));
}

const InstanceNode& row_instance(const TableModule& table, const RowListRef& list, std::size_t index) {
  return instance_at(table, row_path(list, index));
}

void check_range(const TableModule& table, const RowRange& range) {
  if (!range.list.is_records()) {
    if (range.list.split->record == 0) throw Error(ErrorCode::header_record, "row list lies in the header record");
    row_template(table, range.list);
  }
  const std::size_t count = row_count(table, range.list);
  if (range.begin < first_row_index(range.list) || range.begin > range.end || range.end > count) {
    throw Error(ErrorCode::range_out_of_bounds,
                "rows [" + std::to_string(range.begin) + ", " + std::to_string(range.end) +
                    ") outside the data rows [" + std::to_string(first_row_index(range.list)) + ", " +
                    std::to_string(count) + ")");
  }
}

void insert_rows(TableModule& table, const RowListRef& list, std::size_t pos, std::vector<InstanceNode> rows) {
  auto& container = list.is_records() ? table.records : instance_at(table, *list.split).children;
  if (pos < first_row_index(list) || pos > container.size()) {
    throw Error(ErrorCode::range_out_of_bounds, "insert position " + std::to_string(pos) + " out of range");
  }
  container.insert(container.begin() + static_cast<std::ptrdiff_t>(pos), std::make_move_iterator(rows.begin()),
                   std::make_move_iterator(rows.end()));
}

void erase_rows(TableModule& table, const RowListRef& list, std::size_t pos, std::size_t n) {
  auto& container = list.is_records() ? table.records : instance_at(table, *list.split).children;
  if (pos < first_row_index(list) || pos + n > container.size()) {
    throw Error(ErrorCode::range_out_of_bounds, "erase range out of range");
  }
  auto first = container.begin() + static_cast<std::ptrdiff_t>(pos);
  container.erase(first, first + static_cast<std::ptrdiff_t>(n));
}

std::vector<LeafRef> row_leaves(const BlockNode& row_tmpl, const InstanceNode& row) {
  std::vector<LeafRef> out;
  std::vector<std::size_t> steps;
  collect_leaves(row_tmpl, row, steps, out);
  return out;
}

const CellValue* row_value(const BlockNode& row_tmpl, const InstanceNode& row, std::string_view graph_id) {
  for (const auto& leaf : row_leaves(row_tmpl, row)) {
    if (leaf.node->graph_id == graph_id) return &leaf.instance->value;
  }
  return nullptr;
}

std::vector<RowListRef> flat_row_lists(const TableModule& table) {
  if (!contains_arbitrary(table.tmpl.root)) return {RowListRef{}};
  std::vector<RowListRef> out;
  for (std::size_t r = 1; r < table.records.size(); ++r) {
    CellPath path{r, {}};
    collect_flat_lists(table.tmpl.root, table.records[r], path, out);
  }
  return out;
}

std::optional<std::vector<std::size_t>> item_split_path(const BlockNode& row_tmpl) {
  std::vector<std::size_t> path;
  if (find_item_split(row_tmpl, path)) return path;
  return std::nullopt;
}

}  // namespace tkd
