#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tkd/error.hpp"

namespace tkd {

enum class Axis { columns, rows };
enum class LineType { none, thin, thick };
enum class ConstraintRole { source, subject };

struct EdgeLines {
  LineType top = LineType::thin;
  LineType right = LineType::thin;
  LineType bottom = LineType::thin;
  LineType left = LineType::thin;

  bool uniform() const { return top == right && right == bottom && bottom == left; }
  bool operator==(const EdgeLines&) const = default;
};

struct StyleSpec {
  EdgeLines lines;
  std::string font_tag = "GOST-A";
  double text_height_mm = 3.5;

  bool operator==(const StyleSpec&) const = default;
};

/// Per-leaf style; unset members fall back to the template defaults.
struct StyleOverride {
  std::optional<EdgeLines> lines;
  std::optional<std::string> font_tag;
  std::optional<double> text_height_mm;

  bool empty() const { return !lines && !font_tag && !text_height_mm; }
  StyleSpec apply(const StyleSpec& base) const;
  bool operator==(const StyleOverride&) const = default;
};

enum class NodeKind { leaf, split };

/// One node of the record structure. A split divides its rectangle into
/// columns or stacked rows, either into a fixed number of parts or into an
/// arbitrary number of copies of a single prototype part. Leaves are the
/// cells; a leaf visible in the data region is a graph (table column).
///
/// visible_in_header / visible_in_data: for splits, whether the division
/// lines are drawn in that region (and, for the header, whether header
/// texts beneath are shown); for leaves, whether the cell occupies space
/// in that region at all (group titles are header-only leaves).
struct BlockNode {
  NodeKind kind = NodeKind::leaf;
  bool visible_in_header = true;
  bool visible_in_data = true;

  // split
  Axis axis = Axis::columns;
  bool arbitrary = false;
  int insert_unit = 1;
  std::string insert_group;
  std::vector<BlockNode> children;

  // leaf
  std::string graph_id;
  std::string header_text;
  double width_mm = 0.0;
  std::optional<int> property_id;
  std::string object_class;
  std::string unit;
  std::optional<ConstraintRole> constraint_role;
  StyleOverride style;

  bool is_leaf() const { return kind == NodeKind::leaf; }
  bool is_arbitrary_rows() const { return !is_leaf() && arbitrary && axis == Axis::rows; }
  bool is_graph() const { return is_leaf() && visible_in_data; }
  /// Total width: sum over columns, the first child's width for rows.
  double width() const;

  static BlockNode leaf(std::string graph_id, double width_mm);
  static BlockNode split(Axis axis, std::vector<BlockNode> children);
  static BlockNode arbitrary_rows(BlockNode prototype, int insert_unit = 1,
                                  std::string group = {});

  bool operator==(const BlockNode&) const = default;
};

struct TableTemplate {
  std::string name;
  std::string units_note;
  BlockNode root;
  StyleSpec style_defaults;

  bool operator==(const TableTemplate&) const = default;
};

/// Address of a template node: child indices from the root.
using TemplatePath = std::vector<std::size_t>;
std::string format_template_path(const TemplatePath& path);

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  TemplatePath path;
  std::string message;
  std::optional<SourcePos> pos;
};

std::vector<Diagnostic> validate_template(const TableTemplate& tmpl);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

struct CellValue {
  std::string text;
  std::optional<double> numeric;
  std::string unit;
  /// Lines used by layout. Plain assignment splits on '\n'; pack_rows
  /// re-wraps to the column width.
  std::vector<std::string> wrapped_lines;

  static CellValue from_text(std::string text);
  static CellValue from_number(double value, std::string unit = {});
  bool blank() const { return text.empty() && !numeric; }
  std::size_t line_count() const;

  bool operator==(const CellValue&) const = default;
};

/// Instance-side mirror of BlockNode. Leaves carry a value; fixed splits
/// have one child per template child; arbitrary splits have k >= 0 copies
/// of the prototype.
struct InstanceNode {
  std::vector<InstanceNode> children;
  CellValue value;

  bool operator==(const InstanceNode&) const = default;
};

struct CellPath {
  std::size_t record = 0;
  std::vector<std::size_t> steps;

  bool operator==(const CellPath&) const = default;
  auto operator<=>(const CellPath&) const = default;
};
std::string format_cell_path(const CellPath& path);
/// Inverse of format_cell_path ("3:0.1.2", "0:" for a record root).
CellPath parse_cell_path(std::string_view text);

enum class Direction { left, right };

struct ContinuationSpec {
  double chunk_height_mm = 0.0;  // 0: not chunked
  Direction direction = Direction::right;
  bool repeat_header = true;
  bool number_row = false;
  int first_graph_number = 1;

  bool operator==(const ContinuationSpec&) const = default;
};

struct TableModule {
  TableTemplate tmpl;
  std::vector<InstanceNode> records;  // records[0] is the header
  ContinuationSpec continuation;

  std::size_t data_record_count() const { return records.empty() ? 0 : records.size() - 1; }
  bool operator==(const TableModule&) const = default;
};

struct GraphDescriptor {
  std::string graph_id;
  std::string header_text;
  double width_mm = 0.0;
  std::optional<int> property_id;
  std::string unit;
  std::string object_class;
  std::optional<ConstraintRole> constraint_role;
  TemplatePath template_path;
};

/// Data-visible leaves in left-to-right (depth-first) order.
std::vector<GraphDescriptor> enumerate_graphs(const TableTemplate& tmpl);

/// Throws invalid-template when validation reports errors.
TableModule new_table(TableTemplate tmpl);

/// A blank data record: empty cells, arbitrary splits with zero parts.
InstanceNode blank_instance(const BlockNode& node);
/// The header record: header texts in leaves, one part per arbitrary split.
InstanceNode header_instance(const BlockNode& node);

/// Template node addressed by an instance path (arbitrary-split part
/// indices map onto the prototype). Throws path-out-of-range.
const BlockNode& template_node_at(const TableTemplate& tmpl, const std::vector<std::size_t>& steps);
const InstanceNode& instance_at(const TableModule& table, const CellPath& path);
InstanceNode& instance_at(TableModule& table, const CellPath& path);

CellValue resolve_cell(const TableModule& table, const CellPath& path);
/// Writes one data leaf. Numeric values are converted into the leaf unit.
void set_cell(TableModule& table, const CellPath& path, CellValue value);

/// Inserts one act's worth of blank parts (insert_unit) at `at_index` of
/// the arbitrary rows split at `split_path`, and aligned parts into every
/// split of the same insert_group within the record. Returns the paths of
/// all created parts.
std::vector<CellPath> insert_part(TableModule& table, const CellPath& split_path, std::size_t at_index);
/// Inverse of insert_part: removes the act containing `index`.
void delete_part(TableModule& table, const CellPath& split_path, std::size_t index);

/// Record-array counterparts; at_index in [1, records.size()].
void insert_record(TableModule& table, std::size_t at_index);
void delete_record(TableModule& table, std::size_t index);

/// True when `instance` matches the shape of `node`.
bool conforms(const BlockNode& node, const InstanceNode& instance);
/// Whole-module conformance, including the header record.
bool conforms(const TableModule& table);

}  // namespace tkd
