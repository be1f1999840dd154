#include "tkd/layout.hpp"

namespace tkd {

std::optional<CellPath> flat_cell(const TableModule& table, std::size_t record, const GraphDescriptor& graph) {
  CellPath path{record, {}};
  const BlockNode* node = &table.tmpl.root;
  const InstanceNode* inst = &table.records.at(record);
  for (auto step : graph.template_path) {
    if (node->arbitrary) {
      if (inst->children.size() != 1) return std::nullopt;
      step = 0;
    }
    path.steps.push_back(step);
    node = &node->children[node->arbitrary ? 0 : step];
    inst = &inst->children[step];
  }
  return path;
}

FlatRegion flat_region(const TableModule& table, const CellPath& seed) {
  const auto& seed_node = template_node_at(table.tmpl, seed.steps);
  if (seed.record == 0) throw Error(ErrorCode::header_record, "flat regions are cut from data records");
  if (!seed_node.is_leaf()) throw Error(ErrorCode::path_not_leaf, format_cell_path(seed) + " is not a leaf");
  instance_at(table, seed);

  const auto graphs = enumerate_graphs(table.tmpl);
  FlatRegion region;
  region.record_begin = seed.record;
  region.record_end = seed.record + 1;
  region.grid = {{seed}};

  std::size_t g0 = graphs.size();
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    if (graphs[g].graph_id == seed_node.graph_id) g0 = g;
  }
  if (g0 == graphs.size()) return region;  // header-only leaf: degenerate
  region.graph_begin = g0;
  region.graph_end = g0 + 1;

  const std::size_t records = table.records.size();
  // ok[r][g]: the graph has a single flat cell in record r
  std::vector<std::vector<char>> ok(records, std::vector<char>(graphs.size(), 0));
  for (std::size_t r = 1; r < records; ++r) {
    for (std::size_t g = 0; g < graphs.size(); ++g) ok[r][g] = flat_cell(table, r, graphs[g]).has_value();
  }
  if (!ok[seed.record][g0]) return region;

  std::size_t best_w = 0, best_h = 0, best_a = 0, best_r = 0;
  std::vector<char> row_ok(records);
  for (std::size_t a = g0 + 1; a-- > 0;) {
    if (!ok[seed.record][a]) break;
    for (std::size_t b = g0; b < graphs.size(); ++b) {
      if (!ok[seed.record][b]) break;
      for (std::size_t r = 1; r < records; ++r) {
        row_ok[r] = 1;
        for (std::size_t g = a; g <= b && row_ok[r]; ++g) row_ok[r] = ok[r][g];
      }
      std::size_t lo = seed.record;
      while (lo > 1 && row_ok[lo - 1]) --lo;
      std::size_t hi = seed.record + 1;
      while (hi < records && row_ok[hi]) ++hi;
      const std::size_t w = b - a + 1;
      const std::size_t h = hi - lo;
      const bool better = w > best_w || (w == best_w && (h > best_h || (h == best_h && (a < best_a ||
                                                                                         (a == best_a && lo < best_r)))));
      if (better) {
        best_w = w;
        best_h = h;
        best_a = a;
        best_r = lo;
      }
    }
  }
  region.graph_begin = best_a;
  region.graph_end = best_a + best_w;
  region.record_begin = best_r;
  region.record_end = best_r + best_h;
  region.grid.clear();
  for (std::size_t r = region.record_begin; r < region.record_end; ++r) {
    std::vector<CellPath> row;
    for (std::size_t g = region.graph_begin; g < region.graph_end; ++g) row.push_back(*flat_cell(table, r, graphs[g]));
    region.grid.push_back(std::move(row));
  }
  return region;
}

}  // namespace tkd
