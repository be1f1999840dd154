#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tkd/catalog.hpp"
#include "tkd/layout.hpp"
#include "tkd/rows.hpp"

namespace tkd {

/// Element types understood by load_drawing.
const std::set<std::string, std::less<>>& element_types();

struct DrawingElement {
  std::string element_type;
  PropertySet properties;
  double quantity = 0.0;
  int line = 0;
};

struct DrawingFile {
  std::string name;
  std::vector<DrawingElement> elements;
};

/// Parses a `.dwgp` drawing-property file:
///
///   file    := element*
///   element := "element" TYPE "qty" NUMBER "{" prop+ "}"
///   prop    := "prop" INT "=" (STRING | NUMBER) STRING?
///
/// Throws syntax-error, unknown-element-type, unknown-unit,
/// duplicate-property (positioned).
DrawingFile load_drawing(std::string_view text, std::string name = {});

struct CollectionScope {
  std::vector<std::string> files;
  std::set<std::string> element_types;  // empty: every type
};

struct CollectedEntry {
  PropertySet properties;
  double quantity = 0.0;
};

/// Returns the text of a named drawing; throws file-not-found.
using DrawingLoader = std::function<std::string(const std::string& name)>;

/// Loader reading `<dir>/<name>`, appending ".dwgp" when the name has no
/// extension.
DrawingLoader directory_loader(std::string dir);

/// Elements of the scoped types, merged when their property sets agree
/// after unit normalization, in first-appearance order.
/// Throws file-not-found, unknown-element-type.
std::vector<CollectedEntry> collect(const CollectionScope& scope, const DrawingLoader& loader);
std::vector<CollectedEntry> collect(const std::vector<DrawingFile>& drawings,
                                    const std::set<std::string>& types = {});

inline constexpr int kQuantityProperty = 4;

struct AutofillReport {
  std::vector<CellPath> rows;
  std::vector<int> dropped;  // property ids without a graph, sorted
};

/// Appends one data row per entry (quantity into the property-4 graph).
/// Flat templates use the record array; otherwise a fresh record is
/// appended and the entries go into its item split. Throws no-data-split.
AutofillReport autofill(TableModule& table, const std::vector<CollectedEntry>& entries);

/// Collapses rows equal on every cell except quantity cells, summing the
/// quantities into the first occurrence. Returns the number of rows removed.
/// Throws range-out-of-bounds.
std::size_t merge_identical(TableModule& table, const RowRange& range);

/// Stable sort of the rows by the listed graphs: blank < number < text,
/// numbers numerically, text by codepoint. Throws unknown-graph.
void sort_rows(TableModule& table, const RowRange& range, const std::vector<std::string>& graph_sequence);
/// sort_rows over every section (flat row list) independently.
void sort_records(TableModule& table, const std::vector<std::string>& graph_sequence);

struct ExtractResult {
  bool applied = false;
  std::string header;
};

/// Moves the longest common word-bounded prefix of the graph's texts into a
/// group-header row inserted before the range. Member texts keep the
/// remainder; header + " " + member rebuilds the original (no space after
/// a trailing '×' or before an empty member).
/// Throws range-out-of-bounds, unknown-graph.
ExtractResult extract_common_names(TableModule& table, const RowRange& range, const std::string& graph_id);

/// Joins a group header and member text the way extract_common_names split them.
std::string join_common_name(std::string_view header, std::string_view member);

/// Re-wraps every cell of the rows to its column width.
void pack_rows(TableModule& table, const RowRange& range, const LayoutOptions& options = {});

}  // namespace tkd
