#include "tkd/layout.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "layout_detail.hpp"
#include "tkd/text_util.hpp"

namespace tkd {

namespace detail {

double natural_height(const BlockNode& node, const InstanceNode& inst, Region region, double row_height,
                      bool header_hidden) {
  if (node.is_leaf()) {
    if (!visible_in(node, region)) return 0.0;
    const std::size_t lines = (region == Region::header && header_hidden) ? 1 : inst.value.line_count();
    return static_cast<double>(lines) * row_height;
  }
  const bool hidden = header_hidden || (region == Region::header && !node.visible_in_header);
  double total = 0.0;
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    double h = natural_height(child_template(node, i), inst.children[i], region, row_height, hidden);
    total = node.axis == Axis::rows ? total + h : std::max(total, h);
  }
  return total;
}

std::vector<double> distribute_rows(const BlockNode& node, const InstanceNode& inst, Region region,
                                    double row_height, double total, bool header_hidden) {
  const bool hidden = header_hidden || (region == Region::header && !node.visible_in_header);
  std::vector<double> heights;
  heights.reserve(inst.children.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    heights.push_back(natural_height(child_template(node, i), inst.children[i], region, row_height, hidden));
    sum += heights.back();
  }
  if (heights.empty()) return heights;
  std::size_t receiver = heights.size() - 1;
  for (std::size_t i = heights.size(); i-- > 0;) {
    if (heights[i] > 0.0) {
      receiver = i;
      break;
    }
  }
  heights[receiver] += std::max(0.0, total - sum);
  return heights;
}

namespace {

void collect_columns(const BlockNode& node, double x, std::vector<std::pair<double, double>>& out) {
  if (node.is_leaf()) {
    if (node.is_graph()) out.emplace_back(x, node.width_mm);
    return;
  }
  for (const auto& child : node.children) {
    collect_columns(child, x, out);
    if (node.axis == Axis::columns) x += child.width();
  }
}

}  // namespace

std::vector<std::pair<double, double>> graph_columns(const BlockNode& root) {
  std::vector<std::pair<double, double>> out;
  collect_columns(root, 0.0, out);
  return out;
}

}  // namespace detail

using detail::Region;

namespace {

constexpr double kEps = 1e-9;

struct Ancestor {
  const BlockNode* node;
  Rect rect;
};

class LayoutBuilder {
 public:
  LayoutBuilder(const TableModule& table, LayoutTree& tree) : table_(table), tree_(tree) {}

  void place_record(std::size_t record, double y) {
    const auto& root = table_.tmpl.root;
    const auto& inst = table_.records[record];
    const Region region = detail::region_of(record);
    const double rh = tree_.options.row_height_mm;
    const double h = detail::natural_height(root, inst, region, rh);
    LayoutNode node;
    CellPath path{record, {}};
    ancestors_.clear();
    place(root, inst, Rect{0.0, y, root.width(), h}, region, path, false, node);
    tree_.records.push_back(std::move(node));
    tree_.record_indices.push_back(record);
  }

  bool first_record = true;

 private:
  void place(const BlockNode& node, const InstanceNode& inst, Rect rect, Region region, CellPath& path,
             bool header_hidden, LayoutNode& out) {
    out.rect = rect;
    if (node.is_leaf()) {
      out.leaf = true;
      const bool visible = detail::visible_in(node, region);
      tree_.leaves.push_back({path, rect, visible});
      if (rect.area() > 0.0) {
        emit_edges(rect, node.style.apply(table_.tmpl.style_defaults).lines, region);
        if (visible && !(region == Region::header && header_hidden)) emit_text(node, inst, rect, path);
      }
      return;
    }
    const bool hidden = header_hidden || (region == Region::header && !node.visible_in_header);
    if (inst.children.empty()) {
      // an arbitrary split with no parts: still a bordered empty block
      if (rect.area() > 0.0) emit_edges(rect, table_.tmpl.style_defaults.lines, region);
      return;
    }
    ancestors_.push_back({&node, rect});
    const double rh = tree_.options.row_height_mm;
    if (node.axis == Axis::rows) {
      auto heights = detail::distribute_rows(node, inst, region, rh, rect.height, header_hidden);
      double y = rect.y;
      for (std::size_t i = 0; i < inst.children.size(); ++i) {
        LayoutNode child;
        path.steps.push_back(i);
        place(detail::child_template(node, i), inst.children[i], Rect{rect.x, y, rect.width, heights[i]}, region,
              path, hidden, child);
        path.steps.pop_back();
        y += heights[i];
        out.children.push_back(std::move(child));
      }
    } else {
      double x = rect.x;
      for (std::size_t i = 0; i < inst.children.size(); ++i) {
        const auto& child_tmpl = detail::child_template(node, i);
        const double w = child_tmpl.width();
        LayoutNode child;
        path.steps.push_back(i);
        place(child_tmpl, inst.children[i], Rect{x, rect.y, w, rect.height}, region, path, hidden, child);
        path.steps.pop_back();
        x += w;
        out.children.push_back(std::move(child));
      }
    }
    ancestors_.pop_back();
  }

  /// Right/bottom edges are owned by the block on their left/top; the
  /// table's outer top/left border by the blocks touching it.
  void emit_edges(const Rect& r, const EdgeLines& style, Region region) {
    bool right_drawn = true;
    for (auto it = ancestors_.rbegin(); it != ancestors_.rend(); ++it) {
      if (it->node->axis == Axis::columns && it->rect.right() > r.right() + kEps) {
        right_drawn = detail::visible_in(*it->node, region);
        break;
      }
    }
    bool bottom_drawn = true;
    for (auto it = ancestors_.rbegin(); it != ancestors_.rend(); ++it) {
      if (it->node->axis == Axis::rows && it->rect.bottom() > r.bottom() + kEps) {
        bottom_drawn = detail::visible_in(*it->node, region);
        break;
      }
    }
    if (right_drawn) add_line({r.right(), r.y}, {r.right(), r.bottom()}, style.right);
    if (bottom_drawn) add_line({r.x, r.bottom()}, {r.right(), r.bottom()}, style.bottom);
    if (std::fabs(r.x) < kEps) add_line({r.x, r.y}, {r.x, r.bottom()}, style.left);
    if (first_record && std::fabs(r.y - record_top()) < kEps) add_line({r.x, r.y}, {r.right(), r.y}, style.top);
  }

  double record_top() const { return ancestors_.empty() ? current_top : ancestors_.front().rect.y; }

  void add_line(Point a, Point b, LineType type) {
    if (type == LineType::none) return;
    tree_.lines.push_back({a, b, type});
  }

  void emit_text(const BlockNode& node, const InstanceNode& inst, const Rect& rect, const CellPath& path) {
    const auto style = node.style.apply(table_.tmpl.style_defaults);
    const double rh = tree_.options.row_height_mm;
    const auto& lines = inst.value.wrapped_lines;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const double baseline = rect.y + static_cast<double>(i) * rh + rh / 2 + style.text_height_mm * 0.35;
      tree_.texts.push_back({{rect.x + 1.0, baseline}, lines[i], style.font_tag, style.text_height_mm, path, i});
    }
  }

 public:
  double current_top = 0.0;

 private:
  const TableModule& table_;
  LayoutTree& tree_;
  std::vector<Ancestor> ancestors_;
};

void dedupe_lines(std::vector<LineSegment>& lines) {
  std::set<std::tuple<double, double, double, double>> seen;
  std::vector<LineSegment> out;
  for (const auto& l : lines) {
    if (seen.insert({l.from.x, l.from.y, l.to.x, l.to.y}).second) out.push_back(l);
  }
  lines = std::move(out);
}

LayoutTree build(const TableModule& table, const std::vector<std::size_t>& records, std::optional<std::size_t> band_after,
                 const std::vector<int>& numbers, const LayoutOptions& options) {
  LayoutTree tree;
  tree.options = options;
  tree.width = table.tmpl.root.width();
  LayoutBuilder builder(table, tree);
  double y = 0.0;
  auto place_band = [&] {
    const double rh = options.row_height_mm;
    Rect band{0.0, y, tree.width, rh};
    tree.number_band = band;
    auto columns = detail::graph_columns(table.tmpl.root);
    tree.lines.push_back({{0.0, band.y}, {band.right(), band.y}, LineType::thin});
    tree.lines.push_back({{0.0, band.bottom()}, {band.right(), band.bottom()}, LineType::thin});
    tree.lines.push_back({{0.0, band.y}, {0.0, band.bottom()}, LineType::thin});
    std::set<double> xs;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      xs.insert(columns[i].first + columns[i].second);
      if (i < numbers.size()) {
        tree.texts.push_back({{columns[i].first + 1.0, band.y + rh / 2 + table.tmpl.style_defaults.text_height_mm * 0.35},
                              std::to_string(numbers[i]),
                              table.tmpl.style_defaults.font_tag,
                              table.tmpl.style_defaults.text_height_mm,
                              CellPath{},
                              0});
      }
    }
    xs.insert(band.right());
    for (double x : xs) tree.lines.push_back({{x, band.y}, {x, band.bottom()}, LineType::thin});
    y += rh;
    builder.first_record = false;
  };
  if (band_after && records.empty()) place_band();
  for (std::size_t k = 0; k < records.size(); ++k) {
    builder.current_top = y;
    builder.place_record(records[k], y);
    builder.first_record = false;
    y = tree.records.back().rect.bottom();
    if (band_after && *band_after == k) place_band();
  }
  tree.height = y;
  dedupe_lines(tree.lines);
  return tree;
}

}  // namespace

double record_height(const TableModule& table, std::size_t record, const LayoutOptions& options) {
  return detail::natural_height(table.tmpl.root, table.records.at(record), detail::region_of(record),
                                options.row_height_mm);
}

LayoutTree layout(const TableModule& table, const LayoutOptions& options) {
  std::vector<std::size_t> all(table.records.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build(table, all, std::nullopt, {}, options);
}

LayoutTree layout_segment(const TableModule& table, const Segment& segment, const LayoutOptions& options) {
  std::vector<std::size_t> records;
  if (segment.header_repeated) records.push_back(0);
  for (std::size_t r = segment.record_begin; r < segment.record_end; ++r) records.push_back(r);
  std::optional<std::size_t> band;
  if (segment.number_row) {
    const bool has_header = !records.empty() && records.front() == 0;
    // band below the header, or at the very top when no header is shown
    band = has_header ? std::optional<std::size_t>(0) : std::nullopt;
  }
  LayoutTree tree;
  if (segment.number_row && !band) {
    // no header in this segment: band first
    tree = build(table, {}, std::size_t{0}, segment.graph_numbers, options);
    LayoutTree rest = build(table, records, std::nullopt, {}, options);
    const double shift = tree.height;
    for (auto& r : rest.records) {
      std::vector<LayoutNode*> stack{&r};
      while (!stack.empty()) {
        auto* n = stack.back();
        stack.pop_back();
        n->rect.y += shift;
        for (auto& c : n->children) stack.push_back(&c);
      }
    }
    for (auto& l : rest.leaves) l.rect.y += shift;
    for (auto& l : rest.lines) {
      l.from.y += shift;
      l.to.y += shift;
    }
    for (auto& t : rest.texts) t.baseline.y += shift;
    tree.record_indices = rest.record_indices;
    tree.records = std::move(rest.records);
    tree.leaves = std::move(rest.leaves);
    tree.lines.insert(tree.lines.end(), rest.lines.begin(), rest.lines.end());
    tree.texts.insert(tree.texts.end(), rest.texts.begin(), rest.texts.end());
    tree.height += rest.height;
    dedupe_lines(tree.lines);
  } else {
    tree = build(table, records, band, segment.graph_numbers, options);
  }
  // move onto the sheet
  auto move = [&](Point& p) {
    p.x += segment.rect.x;
    p.y += segment.rect.y;
  };
  for (auto& l : tree.lines) {
    move(l.from);
    move(l.to);
  }
  for (auto& t : tree.texts) move(t.baseline);
  for (auto& l : tree.leaves) {
    l.rect.x += segment.rect.x;
    l.rect.y += segment.rect.y;
  }
  if (tree.number_band) {
    tree.number_band->x += segment.rect.x;
    tree.number_band->y += segment.rect.y;
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Hit testing

namespace {

CellPath descend(const BlockNode& node, const InstanceNode& inst, Point p, Rect rect, Region region,
                 double rh, bool header_hidden, CellPath path) {
  if (node.is_leaf() || inst.children.empty()) return path;
  const bool hidden = header_hidden || (region == Region::header && !node.visible_in_header);
  if (node.axis == Axis::rows) {
    auto heights = detail::distribute_rows(node, inst, region, rh, rect.height, header_hidden);
    double y = rect.y;
    for (std::size_t i = 0; i < heights.size(); ++i) {
      if (heights[i] > 0.0 && p.y >= y && p.y < y + heights[i]) {
        path.steps.push_back(i);
        return descend(detail::child_template(node, i), inst.children[i], p, Rect{rect.x, y, rect.width, heights[i]},
                       region, rh, hidden, std::move(path));
      }
      y += heights[i];
    }
    return path;
  }
  double x = rect.x;
  for (std::size_t i = 0; i < inst.children.size(); ++i) {
    const auto& child = detail::child_template(node, i);
    const double w = child.width();
    if (p.x >= x && p.x < x + w) {
      path.steps.push_back(i);
      return descend(child, inst.children[i], p, Rect{x, rect.y, w, rect.height}, region, rh, hidden,
                     std::move(path));
    }
    x += w;
  }
  return path;
}

}  // namespace

CellPath hit_test(const TableModule& table, Point p, const LayoutOptions& options) {
  const double width = table.tmpl.root.width();
  if (p.x < 0.0 || p.y < 0.0 || p.x >= width) {
    throw Error(ErrorCode::outside_table, "point (" + text::format_exact(p.x) + ", " + text::format_exact(p.y) +
                                              ") is outside the table");
  }
  double y = 0.0;
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const double h = record_height(table, r, options);
    if (h > 0.0 && p.y < y + h) {
      return descend(table.tmpl.root, table.records[r], p, Rect{0.0, y, width, h}, detail::region_of(r),
                     options.row_height_mm, false, CellPath{r, {}});
    }
    y += h;
  }
  throw Error(ErrorCode::outside_table, "point below the last record");
}

InsertResult insert_at_point(TableModule& table, Point p, const LayoutOptions& options) {
  const CellPath hit = hit_test(table, p, options);
  if (hit.record == 0) throw Error(ErrorCode::header_record, "the header cannot receive inserted parts");

  // innermost arbitrary rows split on the hit path
  std::optional<std::size_t> split_depth;
  const BlockNode* node = &table.tmpl.root;
  for (std::size_t k = 0;; ++k) {
    if (node->is_arbitrary_rows()) split_depth = k;
    if (k == hit.steps.size() || node->is_leaf()) break;
    node = &detail::child_template(*node, hit.steps[k]);
  }

  InsertResult result;
  if (!split_depth) {
    insert_record(table, hit.record + 1);
    result.created.push_back(CellPath{hit.record + 1, {}});
    return result;
  }
  CellPath split_path{hit.record, std::vector<std::size_t>(hit.steps.begin(),
                                                           hit.steps.begin() + static_cast<std::ptrdiff_t>(*split_depth))};
  const auto& split = template_node_at(table.tmpl, split_path.steps);
  std::size_t at = 0;
  if (*split_depth < hit.steps.size()) {
    const auto unit = static_cast<std::size_t>(split.insert_unit);
    at = (hit.steps[*split_depth] / unit + 1) * unit;
    at = std::min(at, instance_at(table, split_path).children.size());
  }
  result.created = insert_part(table, split_path, at);
  return result;
}

double stroke_width(LineType type) {
  switch (type) {
    case LineType::thick: return 0.6;
    case LineType::thin: return 0.3;
    case LineType::none: return 0.0;
  }
  return 0.3;
}

}  // namespace tkd
