#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tkd/model.hpp"

namespace tkd {

struct LayoutOptions {
  double row_height_mm = 8.0;
  /// Horizontal text scale: one character cell per this many millimetres.
  /// Used by wrapping and by the monospace renderer.
  double char_width_mm = 2.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Millimetres, y grows downward, origin at the table's top-left corner.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  Point center() const { return {x + width / 2, y + height / 2}; }
  double area() const { return width * height; }
  /// Right and bottom edges are exclusive.
  bool contains(Point p) const { return p.x >= x && p.x < right() && p.y >= y && p.y < bottom(); }
};

struct LayoutNode {
  Rect rect;
  std::vector<LayoutNode> children;
  bool leaf = false;
};

struct LineSegment {
  Point from;
  Point to;
  LineType type = LineType::thin;

  bool operator==(const LineSegment& o) const {
    return from.x == o.from.x && from.y == o.from.y && to.x == o.to.x && to.y == o.to.y && type == o.type;
  }
};

struct TextRun {
  Point baseline;
  std::string text;
  std::string font_tag;
  double size_mm = 3.5;
  CellPath cell;
  std::size_t line_index = 0;
};

struct LeafBox {
  CellPath path;
  Rect rect;
  bool visible = true;  // false for leaves hidden in their region
};

struct LayoutTree {
  double width = 0.0;
  double height = 0.0;
  LayoutOptions options;
  std::vector<std::size_t> record_indices;
  std::vector<LayoutNode> records;  // parallel to record_indices
  std::optional<Rect> number_band;
  std::vector<LeafBox> leaves;
  std::vector<LineSegment> lines;
  std::vector<TextRun> texts;
};

/// Natural height of one record (header or data region rules).
double record_height(const TableModule& table, std::size_t record, const LayoutOptions& options = {});

LayoutTree layout(const TableModule& table, const LayoutOptions& options = {});

/// Resolves a point to the cell under it by descending the record
/// structure and summing the heights of the blocks above. Points inside an
/// arbitrary split that currently has no parts resolve to that split.
/// Throws outside-table.
CellPath hit_test(const TableModule& table, Point p, const LayoutOptions& options = {});

struct InsertResult {
  std::vector<CellPath> created;
};

/// Inserts one act of blank parts after the part under the point, in the
/// innermost arbitrary rows split on the hit path. When the path crosses no
/// arbitrary split, a blank record is inserted after the hit record.
/// Throws outside-table or header-record.
InsertResult insert_at_point(TableModule& table, Point p, const LayoutOptions& options = {});

struct PaginateOptions {
  Direction direction = Direction::right;
  bool repeat_header = true;
  bool number_row = false;
  int first_number = 1;
  double gap_mm = 10.0;
};

PaginateOptions paginate_options(const ContinuationSpec& spec);

struct Segment {
  std::size_t record_begin = 0;  // [begin, end) over all records, header included
  std::size_t record_end = 0;
  Rect rect;
  bool header_repeated = false;  // header drawn above records not containing it
  bool number_row = false;
  std::vector<int> graph_numbers;
};

/// Greedy continuation into chunks of at most `chunk_height_mm`.
/// Throws chunk-too-small or record-taller-than-chunk.
std::vector<Segment> paginate(const TableModule& table, double chunk_height_mm, const PaginateOptions& options,
                              const LayoutOptions& layout_options = {});

/// Layout of one continuation segment placed at its sheet position.
LayoutTree layout_segment(const TableModule& table, const Segment& segment, const LayoutOptions& options = {});

struct FlatRegion {
  std::size_t graph_begin = 0;  // indexes into enumerate_graphs(), half-open
  std::size_t graph_end = 0;
  std::size_t record_begin = 0;  // half-open
  std::size_t record_end = 0;
  std::vector<std::vector<CellPath>> grid;  // [record][graph]
};

/// The unique cell of `graph` in `record` when every arbitrary split on the
/// way has exactly one part, nullopt otherwise.
std::optional<CellPath> flat_cell(const TableModule& table, std::size_t record, const GraphDescriptor& graph);

/// Largest graph-range x record-range rectangle around the seed whose
/// cells are all flat; prefers wider, then taller, then left/top-most.
FlatRegion flat_region(const TableModule& table, const CellPath& seed);

std::string render_text(const TableModule& table, const LayoutOptions& options = {});
std::string render_text(const LayoutTree& tree);
std::string render_svg(const TableModule& table, const LayoutOptions& options = {});
std::string render_svg(const std::vector<LayoutTree>& pages);

/// Stroke widths in millimetres.
double stroke_width(LineType type);

}  // namespace tkd
